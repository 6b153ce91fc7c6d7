#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "permlz/errors.hpp"
#include "permlz/rng.hpp"
#include "permlz/series.hpp"

namespace permlz {

// Deterministic orbit generation for the 26-map catalog. The catalog itself
// is a plain text table (map_catalog.inc) embedded in the header and parsed
// once, so parameter or initial-condition corrections are data edits, not
// code changes. Orbits are pure functions of (map id, seed): the initial
// condition is perturbed inside a small per-map box, the orbit is iterated
// through a burn-in, and the observable coordinate of the last L states is
// emitted. Leaving the per-map safety box (or going non-finite) marks the
// perturbation bad; the perturbation is resampled deterministically.

enum class MapClass { conservative, dissipative, noninvertible };

inline std::string to_string(MapClass c) {
    switch (c) {
        case MapClass::conservative: return "conservative";
        case MapClass::dissipative: return "dissipative";
        case MapClass::noninvertible: return "noninvertible";
    }
    return "?";
}

inline MapClass map_class_from_string(std::string_view s) {
    if (s == "conservative") return MapClass::conservative;
    if (s == "dissipative") return MapClass::dissipative;
    if (s == "noninvertible") return MapClass::noninvertible;
    throw invalid_config("unknown map class '" + std::string(s) + "'");
}

struct MapSpec {
    int id = 0;
    std::string slug;
    std::string name;
    MapClass cls = MapClass::noninvertible;
    int state_dim = 1;
    int observable = 0;
    std::vector<std::pair<std::string, double>> params; // order matters to the stepper
    std::vector<double> initial_state;
    std::vector<std::pair<double, double>> safety_box;
    double perturb_halfwidth = 1e-3;
    std::string note;

    bool operator==(const MapSpec&) const = default;
};

struct OrbitRequest {
    int map_id = 0;
    std::size_t length = 0;
    std::size_t burn_in = 1000;
    std::uint64_t seed = 0;
};

namespace detail {

inline double mod1(double x) {
    double r = x - std::floor(x);
    if (r >= 1.0) r -= 1.0; // floor rounding can land exactly on 1
    return r;
}

inline double mod_2pi(double x) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    double r = x - two_pi * std::floor(x / two_pi);
    if (r >= two_pi) r -= two_pi;
    return r;
}

using StepFn = void (*)(double*, const double*);

inline void step_arnold_cat(double* s, const double*) {
    const double x = s[0], y = s[1];
    s[0] = mod1(x + y);
    s[1] = mod1(x + 2.0 * y);
}

inline void step_chaotic_web(double* s, const double* p) {
    const double ca = std::cos(p[0]), sa = std::sin(p[0]);
    const double x = s[0];
    const double t = s[1] + p[1] * std::sin(x);
    s[0] = x * ca - t * sa;
    s[1] = x * sa + t * ca;
}

inline void step_chirikov(double* s, const double* p) {
    const double i_next = mod_2pi(s[1] + p[0] * std::sin(s[0]));
    s[0] = mod_2pi(s[0] + i_next);
    s[1] = i_next;
}

inline void step_gingerbreadman(double* s, const double*) {
    const double x = s[0];
    s[0] = 1.0 - s[1] + std::fabs(x);
    s[1] = x;
}

inline void step_henon_quadratic(double* s, const double* p) {
    const double ca = p[0], sa = std::sqrt(1.0 - p[0] * p[0]);
    const double x = s[0];
    const double ym = s[1] - x * x;
    s[0] = x * ca - ym * sa;
    s[1] = x * sa + ym * ca;
}

inline void step_lorenz_3d(double* s, const double*) {
    const double x = s[0], y = s[1], z = s[2];
    s[0] = x * y - z;
    s[1] = x;
    s[2] = y;
}

inline void step_henon(double* s, const double* p) {
    const double x = s[0];
    s[0] = 1.0 - p[0] * x * x + p[1] * s[1];
    s[1] = x;
}

inline void step_lozi(double* s, const double* p) {
    const double x = s[0];
    s[0] = 1.0 - p[0] * std::fabs(x) + p[1] * s[1];
    s[1] = x;
}

inline void step_delayed_logistic(double* s, const double* p) {
    const double x = s[0];
    s[0] = p[0] * x * (1.0 - s[1]);
    s[1] = x;
}

inline void step_tinkerbell(double* s, const double* p) {
    const double x = s[0], y = s[1];
    s[0] = x * x - y * y + p[0] * x + p[1] * y;
    s[1] = 2.0 * x * y + p[2] * x + p[3] * y;
}

inline void step_holmes(double* s, const double* p) {
    const double x = s[0], y = s[1];
    s[0] = y;
    s[1] = -p[0] * x + p[1] * y - y * y * y;
}

inline void step_dissipative_standard(double* s, const double* p) {
    const double y_next = mod_2pi(p[0] * s[1] + p[1] * std::sin(s[0]));
    s[0] = mod_2pi(s[0] + y_next);
    s[1] = y_next;
}

inline void step_ikeda(double* s, const double* p) {
    const double x = s[0], y = s[1];
    const double phi = p[3] - p[2] / (1.0 + x * x + y * y);
    const double c = std::cos(phi), sn = std::sin(phi);
    s[0] = p[0] + p[1] * (x * c - y * sn);
    s[1] = p[1] * (x * sn + y * c);
}

inline void step_sinai(double* s, const double* p) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    const double x = s[0], y = s[1];
    s[0] = mod1(x + y + p[0] * std::cos(two_pi * y));
    s[1] = mod1(x + 2.0 * y);
}

inline void step_predator_prey(double* s, const double* p) {
    const double x = s[0], y = s[1];
    s[0] = x * std::exp(p[0] * (1.0 - x / p[1]) - p[2] * y);
    s[1] = x * (1.0 - std::exp(-p[2] * y));
}

inline void step_lcg(double* s, const double* p) {
    // state is x/m on the unit interval: u' = (a u + b/m) mod 1
    s[0] = mod1(p[0] * s[0] + p[1] / p[2]);
}

inline void step_cubic(double* s, const double* p) {
    const double x = s[0];
    s[0] = p[0] * x * (1.0 - x * x);
}

inline void step_cusp(double* s, const double* p) {
    s[0] = 1.0 - p[0] * std::sqrt(std::fabs(s[0]));
}

inline void step_gauss(double* s, const double* p) {
    s[0] = std::exp(-p[0] * s[0] * s[0]) + p[1];
}

inline void step_logistic(double* s, const double* p) {
    s[0] = p[0] * s[0] * (1.0 - s[0]);
}

inline void step_pinchers(double* s, const double* p) {
    s[0] = std::fabs(std::tanh(p[0] * (s[0] - p[1])));
}

inline void step_ricker(double* s, const double* p) {
    s[0] = p[0] * s[0] * std::exp(-s[0]);
}

inline void step_sine_circle(double* s, const double* p) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    s[0] = mod1(s[0] + p[0] - (p[1] / two_pi) * std::sin(two_pi * s[0]));
}

inline void step_sine(double* s, const double* p) {
    s[0] = p[0] * std::sin(M_PI * s[0]);
}

inline void step_spence(double* s, const double*) {
    s[0] = std::fabs(std::log(s[0]));
}

inline void step_tent(double* s, const double* p) {
    s[0] = p[0] * std::min(s[0], 1.0 - s[0]);
}

inline StepFn stepper_for(std::string_view slug) {
    if (slug == "arnold_cat") return step_arnold_cat;
    if (slug == "chaotic_web") return step_chaotic_web;
    if (slug == "chirikov") return step_chirikov;
    if (slug == "gingerbreadman") return step_gingerbreadman;
    if (slug == "henon_quadratic") return step_henon_quadratic;
    if (slug == "lorenz_3d") return step_lorenz_3d;
    if (slug == "henon") return step_henon;
    if (slug == "lozi") return step_lozi;
    if (slug == "delayed_logistic") return step_delayed_logistic;
    if (slug == "tinkerbell") return step_tinkerbell;
    if (slug == "holmes") return step_holmes;
    if (slug == "dissipative_standard") return step_dissipative_standard;
    if (slug == "ikeda") return step_ikeda;
    if (slug == "sinai") return step_sinai;
    if (slug == "predator_prey") return step_predator_prey;
    if (slug == "lcg") return step_lcg;
    if (slug == "cubic") return step_cubic;
    if (slug == "cusp") return step_cusp;
    if (slug == "gauss") return step_gauss;
    if (slug == "logistic") return step_logistic;
    if (slug == "pinchers") return step_pinchers;
    if (slug == "ricker") return step_ricker;
    if (slug == "sine_circle") return step_sine_circle;
    if (slug == "sine") return step_sine;
    if (slug == "spence") return step_spence;
    if (slug == "tent") return step_tent;
    throw unknown_map("no stepper for map '" + std::string(slug) + "'");
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(s.substr(start));
            break;
        }
        out.emplace_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

inline double parse_double(const std::string& s, const std::string& where) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw invalid_config("catalog: bad number '" + s + "' in " + where);
    }
}

} // namespace detail

inline std::vector<MapSpec> parse_catalog(std::string_view text) {
    std::vector<MapSpec> maps;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto fields = detail::split(line, '|');
        const std::string where = "catalog line " + std::to_string(lineno);
        if (fields.size() != 11)
            throw invalid_config(where + ": expected 11 fields, got " +
                                 std::to_string(fields.size()));
        MapSpec m;
        m.id = static_cast<int>(detail::parse_double(fields[0], where));
        m.slug = fields[1];
        m.name = fields[2];
        m.cls = map_class_from_string(fields[3]);
        m.state_dim = static_cast<int>(detail::parse_double(fields[4], where));
        m.observable = static_cast<int>(detail::parse_double(fields[5], where));
        if (fields[6] != "none") {
            for (const auto& kv : detail::split(fields[6], ',')) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos)
                    throw invalid_config(where + ": bad param '" + kv + "'");
                m.params.emplace_back(kv.substr(0, eq),
                                      detail::parse_double(kv.substr(eq + 1), where));
            }
        }
        for (const auto& v : detail::split(fields[7], ','))
            m.initial_state.push_back(detail::parse_double(v, where));
        for (const auto& box : detail::split(fields[8], ',')) {
            const auto lohi = detail::split(box, ':');
            if (lohi.size() != 2) throw invalid_config(where + ": bad box '" + box + "'");
            m.safety_box.emplace_back(detail::parse_double(lohi[0], where),
                                      detail::parse_double(lohi[1], where));
        }
        m.perturb_halfwidth = detail::parse_double(fields[9], where);
        m.note = fields[10];
        if (static_cast<int>(m.initial_state.size()) != m.state_dim ||
            static_cast<int>(m.safety_box.size()) != m.state_dim)
            throw invalid_config(where + ": dimension mismatch");
        if (m.observable < 0 || m.observable >= m.state_dim)
            throw invalid_config(where + ": observable out of range");
        maps.push_back(std::move(m));
    }
    return maps;
}

inline std::string serialize_catalog(const std::vector<MapSpec>& maps) {
    std::ostringstream out;
    out.precision(17);
    for (const auto& m : maps) {
        out << m.id << '|' << m.slug << '|' << m.name << '|' << to_string(m.cls) << '|'
            << m.state_dim << '|' << m.observable << '|';
        if (m.params.empty()) {
            out << "none";
        } else {
            for (std::size_t i = 0; i < m.params.size(); ++i)
                out << (i ? "," : "") << m.params[i].first << '=' << m.params[i].second;
        }
        out << '|';
        for (std::size_t i = 0; i < m.initial_state.size(); ++i)
            out << (i ? "," : "") << m.initial_state[i];
        out << '|';
        for (std::size_t i = 0; i < m.safety_box.size(); ++i)
            out << (i ? "," : "") << m.safety_box[i].first << ':' << m.safety_box[i].second;
        out << '|' << m.perturb_halfwidth << '|' << m.note << '\n';
    }
    return out.str();
}

inline std::string_view embedded_catalog_text() {
    static const char* const text =
#include "permlz/map_catalog.inc"
        ;
    return text;
}

inline const std::vector<MapSpec>& map_catalog() {
    static const std::vector<MapSpec> maps = parse_catalog(embedded_catalog_text());
    return maps;
}

inline const MapSpec& find_map(int id) {
    for (const auto& m : map_catalog())
        if (m.id == id) return m;
    throw unknown_map("no map with id " + std::to_string(id));
}

inline const MapSpec& find_map(std::string_view slug) {
    for (const auto& m : map_catalog())
        if (m.slug == slug) return m;
    throw unknown_map("no map with slug '" + std::string(slug) + "'");
}

inline TimeSeries iterate(const OrbitRequest& req) {
    const MapSpec& spec = find_map(req.map_id);
    if (req.length == 0) throw invalid_config("iterate: length must be >= 1");

    const detail::StepFn step = detail::stepper_for(spec.slug);
    std::array<double, 8> params{};
    for (std::size_t i = 0; i < spec.params.size(); ++i) params[i] = spec.params[i].second;

    constexpr int max_attempts = 64;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        SplitMix64 rng(derive_seed(req.seed, 0x6f7262u /* "orb" */, static_cast<std::uint64_t>(attempt)));
        std::array<double, 3> state{};
        for (int i = 0; i < spec.state_dim; ++i)
            state[static_cast<std::size_t>(i)] =
                spec.initial_state[static_cast<std::size_t>(i)] +
                rng.uniform(-spec.perturb_halfwidth, spec.perturb_halfwidth);

        std::vector<double> out;
        out.reserve(req.length);
        bool ok = true;
        const std::size_t total = req.burn_in + req.length;
        for (std::size_t it = 0; it < total && ok; ++it) {
            step(state.data(), params.data());
            for (int i = 0; i < spec.state_dim; ++i) {
                const double v = state[static_cast<std::size_t>(i)];
                const auto& box = spec.safety_box[static_cast<std::size_t>(i)];
                if (!(v >= box.first && v <= box.second)) { // also catches NaN
                    ok = false;
                    break;
                }
            }
            if (ok && it >= req.burn_in)
                out.push_back(state[static_cast<std::size_t>(spec.observable)]);
        }
        if (ok) return TimeSeries{std::move(out), spec.slug, req.seed};
    }
    throw diverged_orbit("map '" + spec.slug + "' left its safety box for " +
                         std::to_string(max_attempts) + " perturbations of seed " +
                         std::to_string(req.seed));
}

} // namespace permlz

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "permlz/chaos.hpp"
#include "permlz/errors.hpp"
#include "permlz/measures.hpp"
#include "permlz/noise.hpp"
#include "permlz/ordinal.hpp"
#include "permlz/rng.hpp"

namespace permlz {

// N-realization experiments over a list of sources (chaotic maps, K-noises,
// FGN, FBM), reduced to per-source complexity-entropy plane summaries.
// Realizations are seeded by a counter scheme from the master seed, computed
// by a worker pool, and reduced in realization order, so results are
// byte-identical for any worker count.

enum class SourceKind { map, knoise, fgn, fbm };

struct SourceRequest {
    SourceKind kind = SourceKind::map;
    int map_id = 0;     // kind == map
    double param = 0.0; // k for knoise, Hurst exponent for fgn/fbm

    bool operator==(const SourceRequest&) const = default;
};

namespace detail {

inline std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

inline std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace detail

inline std::string source_label(const SourceRequest& s) {
    switch (s.kind) {
        case SourceKind::map: return find_map(s.map_id).slug;
        case SourceKind::knoise: return "k_noise(k=" + detail::fmt_g(s.param) + ")";
        case SourceKind::fgn: return "fgn(H=" + detail::fmt_g(s.param) + ")";
        case SourceKind::fbm: return "fbm(H=" + detail::fmt_g(s.param) + ")";
    }
    return "?";
}

inline std::string source_family(const SourceRequest& s) {
    switch (s.kind) {
        case SourceKind::map: return to_string(find_map(s.map_id).cls);
        case SourceKind::knoise: return "knoise";
        case SourceKind::fgn: return "fgn";
        case SourceKind::fbm: return "fbm";
    }
    return "?";
}

struct ExperimentSpec {
    std::vector<SourceRequest> sources;
    std::size_t realizations = 100;  // N
    std::size_t length = 100000;     // L (samples per series)
    EmbeddingConfig embedding{5, 1};
    std::uint64_t master_seed = 1;
    std::size_t burn_in = 1000;      // chaotic maps only
    bool keep_points = false;        // retain per-realization points even for large N

    bool operator==(const ExperimentSpec&) const = default;
};

struct Histogram {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<std::uint64_t> bins;

    bool operator==(const Histogram&) const = default;

    void add(double v) {
        if (bins.empty()) return;
        const double w = (hi - lo) / static_cast<double>(bins.size());
        auto idx = static_cast<std::ptrdiff_t>((v - lo) / w);
        idx = std::clamp<std::ptrdiff_t>(idx, 0,
                                         static_cast<std::ptrdiff_t>(bins.size()) - 1);
        ++bins[static_cast<std::size_t>(idx)];
    }

    std::uint64_t total() const {
        std::uint64_t t = 0;
        for (auto b : bins) t += b;
        return t;
    }
};

inline constexpr std::size_t histogram_bins = 100;
inline constexpr std::size_t keep_points_threshold = 10000;

struct SourceSummary {
    SourceRequest request;
    std::string label;
    std::string family;
    std::uint64_t n = 0;
    double mean_h = 0.0;
    double mean_c = 0.0;
    // sample covariance of (h, c), divisor n-1; zero matrix for n == 1
    double cov_hh = 0.0;
    double cov_hc = 0.0;
    double cov_cc = 0.0;
    Histogram h_hist;
    Histogram c_hist;
    std::vector<double> points_h; // retained when n <= threshold or requested
    std::vector<double> points_c;

    bool operator==(const SourceSummary&) const = default;

    double se_h() const { return n ? std::sqrt(cov_hh / static_cast<double>(n)) : 0.0; }
    double se_c() const { return n ? std::sqrt(cov_cc / static_cast<double>(n)) : 0.0; }
};

// One realization of one source. Burn-in applies to map orbits only.
inline TimeSeries generate_source(const SourceRequest& src, std::size_t length,
                                  std::size_t burn_in, std::uint64_t seed) {
    switch (src.kind) {
        case SourceKind::map:
            return iterate(OrbitRequest{src.map_id, length, burn_in, seed});
        case SourceKind::knoise:
            return k_noise(KNoiseSpec{src.param, length, seed});
        case SourceKind::fgn:
            return fgn(FractionalSpec{src.param, length, seed, FractionalKind::fgn});
        case SourceKind::fbm:
            return fbm(FractionalSpec{src.param, length, seed, FractionalKind::fbm});
    }
    throw invalid_config("generate_source: bad source kind");
}

namespace detail {

inline SourceSummary reduce_source(const SourceRequest& req, const ExperimentSpec& spec,
                                   std::vector<PlanePoint>&& pts) {
    SourceSummary s;
    s.request = req;
    s.label = source_label(req);
    s.family = source_family(req);
    s.n = pts.size();

    const double n = static_cast<double>(pts.size());
    double sum_h = 0.0, sum_c = 0.0;
    for (const auto& p : pts) {
        sum_h += p.h;
        sum_c += p.c;
    }
    s.mean_h = sum_h / n;
    s.mean_c = sum_c / n;
    if (pts.size() > 1) {
        double shh = 0.0, shc = 0.0, scc = 0.0;
        for (const auto& p : pts) {
            const double dh = p.h - s.mean_h;
            const double dc = p.c - s.mean_c;
            shh += dh * dh;
            shc += dh * dc;
            scc += dc * dc;
        }
        s.cov_hh = shh / (n - 1.0);
        s.cov_hc = shc / (n - 1.0);
        s.cov_cc = scc / (n - 1.0);
    }

    s.h_hist.lo = 0.0;
    s.h_hist.hi = 1.0;
    s.h_hist.bins.assign(histogram_bins, 0);
    double c_max = 0.0;
    for (const auto& p : pts) c_max = std::max(c_max, p.c);
    s.c_hist.lo = 0.0;
    s.c_hist.hi = c_max > 0.0 ? 1.05 * c_max : 1.0;
    s.c_hist.bins.assign(histogram_bins, 0);
    for (const auto& p : pts) {
        s.h_hist.add(p.h);
        s.c_hist.add(p.c);
    }

    if (spec.keep_points || pts.size() <= keep_points_threshold) {
        s.points_h.reserve(pts.size());
        s.points_c.reserve(pts.size());
        for (const auto& p : pts) {
            s.points_h.push_back(p.h);
            s.points_c.push_back(p.c);
        }
    }
    return s;
}

} // namespace detail

inline std::vector<SourceSummary> run_experiment(const ExperimentSpec& spec,
                                                 unsigned workers = 0) {
    validate(spec.embedding);
    if (spec.realizations == 0)
        throw invalid_config("run_experiment: need at least one realization");
    embedded_count(spec.length, spec.embedding); // throws series_too_short if L too small
    for (const auto& src : spec.sources) {
        if (src.kind == SourceKind::map) find_map(src.map_id); // throws unknown_map
        if ((src.kind == SourceKind::fgn || src.kind == SourceKind::fbm) &&
            !(src.param > 0.0 && src.param < 1.0))
            throw invalid_config("run_experiment: Hurst exponent must be in (0,1)");
        if (src.kind == SourceKind::knoise && src.param < 0.0)
            throw invalid_config("run_experiment: k must be >= 0");
    }

    const std::size_t n_sources = spec.sources.size();
    const std::size_t n = spec.realizations;
    std::vector<std::vector<PlanePoint>> pts(n_sources);
    for (auto& v : pts) v.resize(n);

    const std::size_t total = n_sources * n;
    unsigned thread_count = workers ? workers : std::max(1u, std::thread::hardware_concurrency());
    thread_count = static_cast<unsigned>(
        std::min<std::size_t>(thread_count, std::max<std::size_t>(total, 1)));

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex err_mutex;
    std::size_t err_job = total;
    std::string err_msg;

    auto work = [&]() {
        while (true) {
            const std::size_t j = next.fetch_add(1);
            if (j >= total || failed.load(std::memory_order_relaxed)) break;
            const std::size_t s = j / n;
            const std::size_t r = j % n;
            try {
                const std::uint64_t seed = derive_seed(spec.master_seed, s, r);
                const TimeSeries series =
                    generate_source(spec.sources[s], spec.length, spec.burn_in, seed);
                pts[s][r] = plane_point(series, spec.embedding);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (j < err_job) {
                    err_job = j;
                    err_msg = "source '" + source_label(spec.sources[s]) +
                              "', realization " + std::to_string(r) + ": " + e.what();
                }
                failed.store(true, std::memory_order_relaxed);
            }
        }
    };

    if (thread_count <= 1 || total <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(thread_count);
        for (unsigned t = 0; t < thread_count; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (failed.load()) throw error("run_experiment: " + err_msg);

    std::vector<SourceSummary> out;
    out.reserve(n_sources);
    for (std::size_t s = 0; s < n_sources; ++s)
        out.push_back(detail::reduce_source(spec.sources[s], spec, std::move(pts[s])));
    return out;
}

// ---- dispersion ellipse ----------------------------------------------------

// Level set { v : v C v^t = 1 } of the sample covariance, centered on the
// mean point. Semi-axes are 1/sqrt(eigenvalue) along the eigenvectors.
struct Ellipse {
    double center_h = 0.0;
    double center_c = 0.0;
    double semi_major = 0.0;
    double semi_minor = 0.0;
    double angle = 0.0; // of the major axis, radians from the h axis
};

inline std::optional<Ellipse> dispersion_ellipse(const SourceSummary& s) {
    const double a = s.cov_hh, b = s.cov_hc, c = s.cov_cc;
    const double half_tr = 0.5 * (a + c);
    const double disc = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
    const double lam_max = half_tr + disc;
    const double lam_min = half_tr - disc;
    if (!(lam_min > 0.0) || lam_min <= 1e-300 ||
        lam_min < 1e-14 * lam_max) // degenerate covariance
        return std::nullopt;
    Ellipse e;
    e.center_h = s.mean_h;
    e.center_c = s.mean_c;
    e.semi_major = 1.0 / std::sqrt(lam_min);
    e.semi_minor = 1.0 / std::sqrt(lam_max);
    if (std::fabs(b) < 1e-300) {
        e.angle = a <= c ? 0.0 : M_PI / 2.0; // smaller eigenvalue axis
    } else {
        e.angle = std::atan2(lam_min - a, b);
    }
    return e;
}

// Axis-aligned one-standard-deviation bars, the fallback when the covariance
// is singular.
inline std::pair<double, double> stddev_bars(const SourceSummary& s) {
    return {std::sqrt(std::max(s.cov_hh, 0.0)), std::sqrt(std::max(s.cov_cc, 0.0))};
}

// ---- noise line ------------------------------------------------------------

// Piecewise-linear interpolant through K-noise mean points ordered by mean
// entropy, plus the least-squares line and its R^2 over the same points.
// Evaluation slightly beyond the anchor hull (within domain_pad) extends the
// end segments; beyond that it is an out_of_domain error.
struct NoiseLine {
    std::vector<PlanePoint> anchors; // sorted by h, strictly increasing
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 1.0;
    double domain_pad = 0.005;

    double h_min() const { return anchors.front().h; }
    double h_max() const { return anchors.back().h; }

    double operator()(double h) const {
        if (h < h_min() - domain_pad || h > h_max() + domain_pad)
            throw out_of_domain("noise line evaluated at h=" + detail::fmt_g(h) +
                                " outside [" + detail::fmt_g(h_min()) + ", " +
                                detail::fmt_g(h_max()) + "] (+/- " +
                                detail::fmt_g(domain_pad) + ")");
        std::size_t hi = 1;
        while (hi + 1 < anchors.size() && anchors[hi].h < h) ++hi;
        const PlanePoint& p0 = anchors[hi - 1];
        const PlanePoint& p1 = anchors[hi];
        const double t = (h - p0.h) / (p1.h - p0.h);
        return p0.c + t * (p1.c - p0.c);
    }
};

inline NoiseLine fit_noise_line(std::span<const SourceSummary> summaries) {
    std::vector<PlanePoint> pts;
    pts.reserve(summaries.size());
    for (const auto& s : summaries) pts.push_back(PlanePoint{s.mean_h, s.mean_c});
    std::sort(pts.begin(), pts.end(),
              [](const PlanePoint& a, const PlanePoint& b) { return a.h < b.h; });
    // merge anchors with coincident entropies
    std::vector<PlanePoint> anchors;
    for (const auto& p : pts) {
        if (!anchors.empty() && std::fabs(anchors.back().h - p.h) < 1e-12) {
            anchors.back().c = 0.5 * (anchors.back().c + p.c);
        } else {
            anchors.push_back(p);
        }
    }
    if (anchors.size() < 2)
        throw insufficient_points("fit_noise_line: need >= 2 points with distinct mean entropy");

    NoiseLine line;
    line.anchors = std::move(anchors);

    const double n = static_cast<double>(line.anchors.size());
    double sh = 0.0, sc = 0.0;
    for (const auto& p : line.anchors) {
        sh += p.h;
        sc += p.c;
    }
    const double mh = sh / n, mc = sc / n;
    double shh = 0.0, shc = 0.0;
    for (const auto& p : line.anchors) {
        shh += (p.h - mh) * (p.h - mh);
        shc += (p.h - mh) * (p.c - mc);
    }
    line.slope = shc / shh;
    line.intercept = mc - line.slope * mh;
    double ss_res = 0.0, ss_tot = 0.0;
    for (const auto& p : line.anchors) {
        const double fit = line.slope * p.h + line.intercept;
        ss_res += (p.c - fit) * (p.c - fit);
        ss_tot += (p.c - mc) * (p.c - mc);
    }
    line.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return line;
}

// Signed distance below the noise line at the summary's mean entropy;
// positive means the source sits below the line.
inline double below_line_margin(const SourceSummary& s, const NoiseLine& line) {
    return line(s.mean_h) - s.mean_c;
}

// ---- export / import -------------------------------------------------------

inline constexpr int export_schema_version = 1;

inline std::string to_csv(std::span<const SourceSummary> summaries) {
    std::string out =
        "label,family,map_id,param,mean_h,mean_c,cov_hh,cov_hc,cov_cc,n\n";
    for (const auto& s : summaries) {
        out += s.label;
        out += ',';
        out += s.family;
        out += ',';
        if (s.request.kind == SourceKind::map) out += std::to_string(s.request.map_id);
        out += ',';
        if (s.request.kind != SourceKind::map) out += detail::fmt_full(s.request.param);
        out += ',';
        out += detail::fmt_full(s.mean_h);
        out += ',';
        out += detail::fmt_full(s.mean_c);
        out += ',';
        out += detail::fmt_full(s.cov_hh);
        out += ',';
        out += detail::fmt_full(s.cov_hc);
        out += ',';
        out += detail::fmt_full(s.cov_cc);
        out += ',';
        out += std::to_string(s.n);
        out += '\n';
    }
    return out;
}

// CSV with the experiment parameters appended to every row; this is the
// file format external plotting tools consume.
inline std::string to_csv(std::span<const SourceSummary> summaries,
                          const ExperimentSpec& spec) {
    std::string out =
        "label,family,map_id,param,mean_h,mean_c,cov_hh,cov_hc,cov_cc,n,length,d,tau,seed\n";
    const std::string tail = "," + std::to_string(spec.length) + "," +
                             std::to_string(spec.embedding.d) + "," +
                             std::to_string(spec.embedding.tau) + "," +
                             std::to_string(spec.master_seed) + "\n";
    for (const auto& s : summaries) {
        out += s.label;
        out += ',';
        out += s.family;
        out += ',';
        if (s.request.kind == SourceKind::map) out += std::to_string(s.request.map_id);
        out += ',';
        if (s.request.kind != SourceKind::map) out += detail::fmt_full(s.request.param);
        out += ',';
        out += detail::fmt_full(s.mean_h);
        out += ',';
        out += detail::fmt_full(s.mean_c);
        out += ',';
        out += detail::fmt_full(s.cov_hh);
        out += ',';
        out += detail::fmt_full(s.cov_hc);
        out += ',';
        out += detail::fmt_full(s.cov_cc);
        out += ',';
        out += std::to_string(s.n);
        out += tail;
    }
    return out;
}

inline void write_text_file(const std::string& text, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw io_error("write failed for '" + path + "'");
}

NLOHMANN_JSON_SERIALIZE_ENUM(SourceKind, {
    {SourceKind::map, "map"},
    {SourceKind::knoise, "knoise"},
    {SourceKind::fgn, "fgn"},
    {SourceKind::fbm, "fbm"},
})

inline void to_json(nlohmann::json& j, const SourceRequest& s) {
    j = nlohmann::json{{"type", s.kind}};
    if (s.kind == SourceKind::map)
        j["id"] = s.map_id;
    else if (s.kind == SourceKind::knoise)
        j["k"] = s.param;
    else
        j["H"] = s.param;
}

inline void from_json(const nlohmann::json& j, SourceRequest& s) {
    s = SourceRequest{};
    s.kind = j.at("type").get<SourceKind>();
    if (s.kind == SourceKind::map) {
        if (j.contains("slug"))
            s.map_id = find_map(j.at("slug").get<std::string>()).id;
        else
            s.map_id = j.at("id").get<int>();
    } else if (s.kind == SourceKind::knoise) {
        s.param = j.at("k").get<double>();
    } else {
        s.param = j.at("H").get<double>();
    }
}

inline void to_json(nlohmann::json& j, const ExperimentSpec& spec) {
    j = nlohmann::json{{"schema_version", export_schema_version},
                       {"sources", spec.sources},
                       {"realizations", spec.realizations},
                       {"length", spec.length},
                       {"d", spec.embedding.d},
                       {"tau", spec.embedding.tau},
                       {"seed", spec.master_seed},
                       {"burn_in", spec.burn_in},
                       {"keep_points", spec.keep_points}};
}

inline void from_json(const nlohmann::json& j, ExperimentSpec& spec) {
    spec = ExperimentSpec{};
    spec.sources = j.at("sources").get<std::vector<SourceRequest>>();
    spec.realizations = j.at("realizations").get<std::size_t>();
    spec.length = j.at("length").get<std::size_t>();
    spec.embedding.d = j.at("d").get<int>();
    spec.embedding.tau = j.at("tau").get<int>();
    spec.master_seed = j.at("seed").get<std::uint64_t>();
    spec.burn_in = j.value("burn_in", std::size_t{1000});
    spec.keep_points = j.value("keep_points", false);
}

inline void to_json(nlohmann::json& j, const Histogram& h) {
    j = nlohmann::json{{"lo", h.lo}, {"hi", h.hi}, {"bins", h.bins}};
}

inline void from_json(const nlohmann::json& j, Histogram& h) {
    h.lo = j.at("lo").get<double>();
    h.hi = j.at("hi").get<double>();
    h.bins = j.at("bins").get<std::vector<std::uint64_t>>();
}

inline void to_json(nlohmann::json& j, const SourceSummary& s) {
    j = nlohmann::json{{"request", s.request}, {"label", s.label},
                       {"family", s.family},   {"n", s.n},
                       {"mean_h", s.mean_h},   {"mean_c", s.mean_c},
                       {"cov_hh", s.cov_hh},   {"cov_hc", s.cov_hc},
                       {"cov_cc", s.cov_cc},   {"h_hist", s.h_hist},
                       {"c_hist", s.c_hist}};
    if (!s.points_h.empty()) {
        j["points_h"] = s.points_h;
        j["points_c"] = s.points_c;
    }
}

inline void from_json(const nlohmann::json& j, SourceSummary& s) {
    s = SourceSummary{};
    s.request = j.at("request").get<SourceRequest>();
    s.label = j.at("label").get<std::string>();
    s.family = j.at("family").get<std::string>();
    s.n = j.at("n").get<std::uint64_t>();
    s.mean_h = j.at("mean_h").get<double>();
    s.mean_c = j.at("mean_c").get<double>();
    s.cov_hh = j.at("cov_hh").get<double>();
    s.cov_hc = j.at("cov_hc").get<double>();
    s.cov_cc = j.at("cov_cc").get<double>();
    s.h_hist = j.at("h_hist").get<Histogram>();
    s.c_hist = j.at("c_hist").get<Histogram>();
    if (j.contains("points_h")) {
        s.points_h = j.at("points_h").get<std::vector<double>>();
        s.points_c = j.at("points_c").get<std::vector<double>>();
    }
}

inline std::string to_export_json(std::span<const SourceSummary> summaries,
                                  const ExperimentSpec& spec) {
    nlohmann::json j;
    j["schema_version"] = export_schema_version;
    j["spec"] = spec;
    j["summaries"] = std::vector<SourceSummary>(summaries.begin(), summaries.end());
    return j.dump(2) + "\n";
}

struct ExportedExperiment {
    ExperimentSpec spec;
    std::vector<SourceSummary> summaries;
};

inline ExportedExperiment import_export_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw io_error(std::string("export JSON parse failed: ") + e.what());
    }
    try {
        ExportedExperiment out;
        if (j.at("schema_version").get<int>() != export_schema_version)
            throw io_error("unsupported export schema version");
        out.spec = j.at("spec").get<ExperimentSpec>();
        out.summaries = j.at("summaries").get<std::vector<SourceSummary>>();
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw io_error(std::string("export JSON invalid: ") + e.what());
    }
}

} // namespace permlz

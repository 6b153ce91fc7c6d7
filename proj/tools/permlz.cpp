// permlz: symbolize time series into ordinal patterns, compute the
// permutation entropy / permutation Lempel-Ziv complexity plane, and run
// multi-source plane experiments.
//
// Subcommands: catalog, generate, measure, plane. All randomness flows from
// --seed; when the flag is absent a fixed default keeps casual runs
// reproducible. Exit codes: 0 success, 1 usage error, 2 data error,
// 3 internal invariant violation.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "permlz/chaos.hpp"
#include "permlz/errors.hpp"
#include "permlz/io.hpp"
#include "permlz/measures.hpp"
#include "permlz/noise.hpp"
#include "permlz/ordinal.hpp"
#include "permlz/plane.hpp"

namespace {

constexpr std::uint64_t default_seed = 12345;

// flag combinations the parser cannot express; distinct from data errors so
// the exit code stays 1
struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void print_error(const std::string& msg) {
    std::cerr << "permlz: error: " << msg << "\n";
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

const permlz::MapSpec& resolve_map(const std::string& token) {
    try {
        std::size_t used = 0;
        const int id = std::stoi(token, &used);
        if (used == token.size()) return permlz::find_map(id);
    } catch (const std::invalid_argument&) {
    } catch (const std::out_of_range&) {
    }
    return permlz::find_map(std::string_view(token));
}

struct GeneratorFlags {
    std::string map_token;
    std::string noise_kind;
    double k = 1.0;
    double hurst = 0.5;
    std::uint64_t seed = default_seed;
    std::size_t length = 100000;
    std::size_t burn_in = 1000;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--map", map_token, "chaotic map id (1-26) or slug");
        cmd.add_option("--noise", noise_kind, "noise family: knoise, fgn or fbm")
            ->check(CLI::IsMember({"knoise", "fgn", "fbm"}));
        cmd.add_option("--k", k, "K-noise spectral exponent (spectrum ~ 1/f^k)");
        cmd.add_option("--hurst", hurst, "Hurst exponent in (0,1) for fgn/fbm");
        cmd.add_option("--L", length, "series length")->capture_default_str();
        cmd.add_option("--seed", seed, "random seed")->capture_default_str();
        cmd.add_option("--burn-in", burn_in, "discarded map iterations")
            ->capture_default_str();
    }

    bool selected() const { return !map_token.empty() || !noise_kind.empty(); }

    permlz::TimeSeries generate() const {
        if (!map_token.empty() && !noise_kind.empty())
            throw usage_error("--map and --noise are mutually exclusive");
        if (!map_token.empty()) {
            const auto& spec = resolve_map(map_token);
            return permlz::iterate(permlz::OrbitRequest{spec.id, length, burn_in, seed});
        }
        if (noise_kind == "knoise")
            return permlz::k_noise(permlz::KNoiseSpec{k, length, seed});
        if (noise_kind == "fgn")
            return permlz::fgn(permlz::FractionalSpec{hurst, length, seed});
        if (noise_kind == "fbm")
            return permlz::fbm(permlz::FractionalSpec{hurst, length, seed,
                                                      permlz::FractionalKind::fbm});
        throw usage_error("select a generator with --map or --noise");
    }
};

int cmd_catalog(const std::string& class_filter, bool as_json) {
    std::vector<const permlz::MapSpec*> rows;
    for (const auto& m : permlz::map_catalog()) {
        if (!class_filter.empty() && permlz::to_string(m.cls) != class_filter) continue;
        rows.push_back(&m);
    }
    if (as_json) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto* m : rows) {
            j.push_back({{"id", m->id},
                         {"slug", m->slug},
                         {"name", m->name},
                         {"class", permlz::to_string(m->cls)},
                         {"dim", m->state_dim}});
        }
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::printf("%3s  %-22s %-14s %3s  %s\n", "id", "slug", "class", "dim", "name");
    for (const auto* m : rows)
        std::printf("%3d  %-22s %-14s %3d  %s\n", m->id, m->slug.c_str(),
                    permlz::to_string(m->cls).c_str(), m->state_dim, m->name.c_str());
    return 0;
}

int cmd_generate(const GeneratorFlags& gen, const std::string& out_path) {
    const permlz::TimeSeries series = gen.generate();
    if (out_path.empty()) {
        char buf[64];
        for (double v : series.values) {
            std::snprintf(buf, sizeof(buf), "%.17g\n", v);
            std::fputs(buf, stdout);
        }
    } else {
        permlz::write_series_auto(series, out_path);
        std::cout << series.size() << " samples from " << series.source << " -> "
                  << out_path << "\n";
    }
    return 0;
}

int cmd_measure(const GeneratorFlags& gen, const std::string& in_path, int d, int tau,
                bool as_json, bool with_counts) {
    if (in_path.empty() && !gen.selected())
        throw usage_error("measure needs --in or a generator (--map/--noise)");
    if (!in_path.empty() && gen.selected())
        throw usage_error("--in and generator flags are mutually exclusive");

    const permlz::TimeSeries series =
        in_path.empty() ? gen.generate() : permlz::read_series_auto(in_path);
    const permlz::EmbeddingConfig cfg{d, tau};
    const permlz::SeriesAnalysis a = permlz::analyze_series(series, cfg);

    if (as_json) {
        nlohmann::json j{{"h", a.point.h},
                         {"c", a.point.c},
                         {"C", a.lz.productions},
                         {"T", a.lz.length},
                         {"d", d},
                         {"tau", tau},
                         {"series_length", series.size()},
                         {"source", series.source}};
        if (with_counts || cfg.d <= 6) j["pattern_counts"] = a.distribution.counts;
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "h=" << fmt(a.point.h) << " c=" << fmt(a.point.c)
              << " C=" << a.lz.productions << " T=" << a.lz.length << " d=" << d
              << " tau=" << tau << "\n";
    if (with_counts) {
        for (std::size_t i = 0; i < a.distribution.counts.size(); ++i) {
            const auto perm = permlz::lehmer_decode(i, d);
            std::cout << "count[" << i << "] [";
            for (std::size_t q = 0; q < perm.size(); ++q)
                std::cout << (q ? " " : "") << perm[q];
            std::cout << "] = " << a.distribution.counts[i] << "\n";
        }
    }
    return 0;
}

struct PlaneOverrides {
    std::optional<std::size_t> realizations;
    std::optional<std::size_t> length;
    std::optional<int> d;
    std::optional<int> tau;
    std::optional<std::uint64_t> seed;
    bool paper_scale = false;
};

int cmd_plane(const std::string& config_path, const std::string& out_prefix,
              unsigned workers, const PlaneOverrides& ov,
              const std::string& dump_config_path) {
    std::ifstream in(config_path);
    if (!in) throw permlz::io_error("cannot open config '" + config_path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw permlz::io_error(config_path + ": " + e.what());
    }
    permlz::ExperimentSpec spec;
    try {
        spec = j.get<permlz::ExperimentSpec>();
    } catch (const nlohmann::json::exception& e) {
        throw permlz::invalid_config(config_path + ": " + e.what());
    }

    if (ov.paper_scale) {
        spec.realizations = 40000;
        spec.length = 1000000;
    }
    if (ov.realizations) spec.realizations = *ov.realizations;
    if (ov.length) spec.length = *ov.length;
    if (ov.d) spec.embedding.d = *ov.d;
    if (ov.tau) spec.embedding.tau = *ov.tau;
    if (ov.seed) spec.master_seed = *ov.seed;

    if (!dump_config_path.empty()) {
        nlohmann::json out = spec;
        permlz::write_text_file(out.dump(2) + "\n", dump_config_path);
    }

    const auto summaries = permlz::run_experiment(spec, workers);
    permlz::write_text_file(permlz::to_csv(summaries, spec), out_prefix + ".csv");
    permlz::write_text_file(permlz::to_export_json(summaries, spec),
                            out_prefix + ".json");
    for (const auto& s : summaries)
        std::cout << s.label << ": h=" << fmt(s.mean_h) << " c=" << fmt(s.mean_c)
                  << " (n=" << s.n << ")\n";
    std::cout << summaries.size() << " sources -> " << out_prefix << ".csv, "
              << out_prefix << ".json\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"permutation entropy / permutation LZ complexity plane toolkit"};
    app.require_subcommand(1);

    // catalog
    auto* catalog = app.add_subcommand("catalog", "list the chaotic map catalog");
    std::string class_filter;
    bool catalog_json = false;
    catalog->add_option("--class", class_filter, "filter by class")
        ->check(CLI::IsMember({"conservative", "dissipative", "noninvertible"}));
    catalog->add_flag("--json", catalog_json, "machine-readable output");

    // generate
    auto* generate = app.add_subcommand("generate", "generate a series to a file or stdout");
    GeneratorFlags gen_flags;
    gen_flags.add_to(*generate);
    std::string gen_out;
    generate->add_option("--out", gen_out,
                         "output path (.f64 = binary little-endian, else text)");

    // measure
    auto* measure = app.add_subcommand("measure", "compute (h, c) for one series");
    GeneratorFlags measure_gen;
    measure_gen.add_to(*measure);
    std::string measure_in;
    int measure_d = 5, measure_tau = 1;
    bool measure_json = false, measure_counts = false;
    measure->add_option("--in", measure_in, "input series file (.f64 or text)");
    measure->add_option("--d", measure_d, "embedding dimension")->capture_default_str();
    measure->add_option("--tau", measure_tau, "embedding delay")->capture_default_str();
    measure->add_flag("--json", measure_json, "machine-readable output");
    measure->add_flag("--counts", measure_counts, "also print per-pattern counts");

    // plane
    auto* plane = app.add_subcommand("plane", "run a multi-source plane experiment");
    std::string plane_config, plane_out = "plane", plane_dump;
    unsigned plane_workers = 0;
    PlaneOverrides ov;
    std::size_t ov_n = 0, ov_l = 0;
    int ov_d = 0, ov_tau = 0;
    std::uint64_t ov_seed = 0;
    plane->add_option("--config", plane_config, "experiment config (JSON)")->required();
    plane->add_option("--out", plane_out, "output prefix for .csv/.json")
        ->capture_default_str();
    plane->add_option("--workers", plane_workers,
                      "worker threads (0 = hardware concurrency)");
    auto* opt_n = plane->add_option("--N", ov_n, "override realizations per source");
    auto* opt_l = plane->add_option("--L", ov_l, "override samples per series");
    auto* opt_d = plane->add_option("--d", ov_d, "override embedding dimension");
    auto* opt_tau = plane->add_option("--tau", ov_tau, "override embedding delay");
    auto* opt_seed = plane->add_option("--seed", ov_seed, "override master seed");
    plane->add_flag("--paper-scale", ov.paper_scale,
                    "run at the full published scale (N=40000, L=1e6)");
    plane->add_option("--dump-config", plane_dump,
                      "write the resolved config to this path before running");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (catalog->parsed()) return cmd_catalog(class_filter, catalog_json);
        if (generate->parsed()) return cmd_generate(gen_flags, gen_out);
        if (measure->parsed())
            return cmd_measure(measure_gen, measure_in, measure_d, measure_tau,
                               measure_json, measure_counts);
        if (plane->parsed()) {
            if (*opt_n) ov.realizations = ov_n;
            if (*opt_l) ov.length = ov_l;
            if (*opt_d) ov.d = ov_d;
            if (*opt_tau) ov.tau = ov_tau;
            if (*opt_seed) ov.seed = ov_seed;
            return cmd_plane(plane_config, plane_out, plane_workers, ov, plane_dump);
        }
        print_error("no subcommand");
        return 1;
    } catch (const usage_error& e) {
        print_error(e.what());
        return 1;
    } catch (const permlz::error& e) {
        print_error(e.what());
        return 2;
    } catch (const std::exception& e) {
        print_error(std::string("internal: ") + e.what());
        return 3;
    }
}

// Acceptance suite: one test case per release criterion, each printing a
// single PASS/FAIL line. Monte Carlo criteria run at desk scale (N = 100
// realizations of L = 1e5 samples, d = 5, tau = 1) with a fixed master seed,
// so every number here is reproducible.

#define CATCH_CONFIG_MAIN
#include <catch2/catch.hpp>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "lz_oracle.hpp"
#include "permlz/chaos.hpp"
#include "permlz/io.hpp"
#include "permlz/lz76.hpp"
#include "permlz/measures.hpp"
#include "permlz/noise.hpp"
#include "permlz/ordinal.hpp"
#include "permlz/plane.hpp"
#include "permlz/rng.hpp"
#include "test_helpers.hpp"

using namespace permlz;

namespace {

constexpr std::size_t desk_n = 100;
constexpr std::size_t desk_len = 100000;
constexpr EmbeddingConfig desk_cfg{5, 1};
constexpr std::uint64_t desk_seed = 20140911;

double now_s() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

void report(int idx, const std::string& name, bool pass, const std::string& detail) {
    std::printf("criterion %02d [%s]: %s  (%s)\n", idx, name.c_str(),
                pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof(buf), f, args);
    va_end(args);
    return buf;
}

ExperimentSpec desk_spec(std::vector<SourceRequest> sources) {
    ExperimentSpec spec;
    spec.sources = std::move(sources);
    spec.realizations = desk_n;
    spec.length = desk_len;
    spec.embedding = desk_cfg;
    spec.master_seed = desk_seed;
    return spec;
}

// shared fixtures, computed once
const std::vector<SourceSummary>& knoise_sweep() {
    static const auto summaries = [] {
        std::vector<SourceRequest> sources;
        for (int n = 0; n <= 14; ++n)
            sources.push_back(SourceRequest{SourceKind::knoise, 0, 0.25 * n});
        return run_experiment(desk_spec(std::move(sources)));
    }();
    return summaries;
}

const std::vector<SourceSummary>& chaos_summaries() {
    static const auto summaries = [] {
        std::vector<SourceRequest> sources{
            SourceRequest{SourceKind::map, find_map("logistic").id, 0.0},
            SourceRequest{SourceKind::map, find_map("henon").id, 0.0},
            SourceRequest{SourceKind::map, find_map("tent").id, 0.0},
            SourceRequest{SourceKind::map, find_map("lcg").id, 0.0}};
        return run_experiment(desk_spec(std::move(sources)));
    }();
    return summaries;
}

const std::vector<SourceSummary>& fgn_summaries() { // H = 0.2, 0.5, 0.8
    static const auto summaries = [] {
        std::vector<SourceRequest> sources{SourceRequest{SourceKind::fgn, 0, 0.2},
                                           SourceRequest{SourceKind::fgn, 0, 0.5},
                                           SourceRequest{SourceKind::fgn, 0, 0.8}};
        return run_experiment(desk_spec(std::move(sources)));
    }();
    return summaries;
}

// variance of the interpolated line value at entropy h, propagated from the
// bracketing anchors' mean-variances
double line_value_variance(const std::vector<SourceSummary>& sweep, double h) {
    std::vector<const SourceSummary*> sorted;
    for (const auto& s : sweep) sorted.push_back(&s);
    std::sort(sorted.begin(), sorted.end(),
              [](const SourceSummary* a, const SourceSummary* b) {
                  return a->mean_h < b->mean_h;
              });
    if (h <= sorted.front()->mean_h) return std::pow(sorted.front()->se_c(), 2);
    if (h >= sorted.back()->mean_h) return std::pow(sorted.back()->se_c(), 2);
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (h <= sorted[i]->mean_h) {
            const double t =
                (h - sorted[i - 1]->mean_h) / (sorted[i]->mean_h - sorted[i - 1]->mean_h);
            return (1 - t) * (1 - t) * std::pow(sorted[i - 1]->se_c(), 2) +
                   t * t * std::pow(sorted[i]->se_c(), 2);
        }
    }
    return std::pow(sorted.back()->se_c(), 2);
}

} // namespace

TEST_CASE("criterion 01: LZ oracle equivalence") {
    const double t0 = now_s();
    std::uint64_t cases = 0, mismatches = 0;
    std::string first_bad;
    for (std::uint64_t alpha : {2ull, 3ull}) {
        for (std::size_t len = 1; len <= 12; ++len) {
            std::uint64_t total = 1;
            for (std::size_t i = 0; i < len; ++i) total *= alpha;
            std::vector<Symbol> s(len);
            for (std::uint64_t code = 0; code < total; ++code) {
                std::uint64_t rem = code;
                for (std::size_t i = 0; i < len; ++i) {
                    s[i] = rem % alpha;
                    rem /= alpha;
                }
                ++cases;
                if (lz76_production_count(s) != lz_oracle::minimal_history(s)) {
                    ++mismatches;
                    if (first_bad.empty()) {
                        for (Symbol x : s) first_bad += std::to_string(x);
                    }
                }
            }
        }
    }
    const double elapsed = now_s() - t0;
    const bool pass = mismatches == 0 && elapsed < 300.0;
    report(1, "lz-oracle-equivalence", pass,
           fmt("%llu cases, %llu mismatches%s%s, %.1f s",
               static_cast<unsigned long long>(cases),
               static_cast<unsigned long long>(mismatches),
               first_bad.empty() ? "" : ", first ", first_bad.c_str(), elapsed));
    CHECK(pass);
}

TEST_CASE("criterion 02: logistic forbidden pattern") {
    const double t0 = now_s();
    const auto orbit = iterate(OrbitRequest{find_map("logistic").id, 100000, 1000, desk_seed});
    const auto dist = pattern_frequencies(symbolize(orbit, {3, 1}));
    const double elapsed = now_s() - t0;
    const bool pass = dist.counts[5] == 0 && elapsed < 1.0;
    report(2, "logistic-forbidden-pattern", pass,
           fmt("count of [2 1 0] = %llu over %llu windows, %.3f s",
               static_cast<unsigned long long>(dist.counts[5]),
               static_cast<unsigned long long>(dist.total), elapsed));
    CHECK(pass);
}

TEST_CASE("criterion 03: worked ranking example") {
    const auto ranks = rank_vector(std::vector<double>{0.55, 1.7, -0.45});
    const bool pass = ranks == PermutationVector{1, 2, 0};
    report(3, "rank-vector-worked-example", pass,
           fmt("rank([0.55 1.7 -0.45]) = [%d %d %d]", ranks[0], ranks[1], ranks[2]));
    CHECK(pass);
}

TEST_CASE("criterion 04: white-noise extreme") {
    const double t0 = now_s();
    const auto& sweep = knoise_sweep();
    const auto& white = fgn_summaries()[1]; // H = 0.5
    double max_c = 0.0;
    for (const auto& s : sweep) max_c = std::max(max_c, s.mean_c);
    const double gap = std::fabs(max_c - white.mean_c);
    const double elapsed = now_s() - t0;
    const bool pass = white.mean_h >= 0.99 && gap <= 0.05 && elapsed < 600.0;
    report(4, "white-noise-extreme", pass,
           fmt("FGN(0.5): h=%.5f (>=0.99), c=%.5f vs sweep max %.5f, gap %.4f (<=0.05), %.0f s",
               white.mean_h, white.mean_c, max_c, gap, elapsed));
    CHECK(pass);
}

TEST_CASE("criterion 05: noise line") {
    const auto& sweep = knoise_sweep();
    std::vector<SourceSummary> fit_subset; // k in {0.5, ..., 3.5}
    std::vector<SourceSummary> small_k;    // k in {0, 0.25}, reported but excluded
    for (const auto& s : sweep) {
        if (s.request.param >= 0.5 - 1e-12)
            fit_subset.push_back(s);
        else
            small_k.push_back(s);
    }
    REQUIRE(fit_subset.size() == 13);
    const auto line = fit_noise_line(fit_subset);
    const bool pass = line.r2 >= 0.98;
    std::string small_report;
    for (const auto& s : small_k) {
        const double dev = line.slope * s.mean_h + line.intercept - s.mean_c;
        small_report += fmt(" k=%.2f dev=%+.5f", s.request.param, dev);
    }
    report(5, "noise-line", pass,
           fmt("R^2=%.5f over 13 points (>=0.98); excluded small-k deviations:%s",
               line.r2, small_report.c_str()));
    CHECK(pass);
}

TEST_CASE("criterion 06: chaos below the line, LCG on it") {
    const auto& sweep = knoise_sweep();
    const auto line = fit_noise_line(sweep); // interpolant over the full sweep
    const auto& chaos = chaos_summaries();

    bool pass = true;
    std::string detail;
    for (std::size_t i = 0; i < 3; ++i) { // logistic, henon, tent
        const auto& s = chaos[i];
        const double margin = below_line_margin(s, line);
        const bool ok = margin > 0.0 && margin > 3.0 * s.se_c();
        pass = pass && ok;
        detail += fmt("%s margin=%.4f (%.0f se); ", s.label.c_str(), margin,
                      margin / s.se_c());
    }
    const auto& lcg = chaos[3];
    const double lcg_margin = below_line_margin(lcg, line);
    const double pooled_se =
        std::sqrt(lcg.se_c() * lcg.se_c() + line_value_variance(sweep, lcg.mean_h));
    const bool lcg_ok = std::fabs(lcg_margin) <= 3.0 * pooled_se;
    pass = pass && lcg_ok;
    detail += fmt("lcg |margin|=%.2e vs 3*pooled_se=%.2e", std::fabs(lcg_margin),
                  3.0 * pooled_se);
    report(6, "chaos-below-line", pass, detail);
    CHECK(pass);
}

TEST_CASE("criterion 07: FGN H-asymmetry") {
    const auto& fgns = fgn_summaries();
    const auto& lo = fgns[0];  // H = 0.2
    const auto& hi = fgns[2];  // H = 0.8
    const double dh = std::fabs(lo.mean_h - hi.mean_h);
    const double dc = std::fabs(lo.mean_c - hi.mean_c);
    const double pooled_se = std::sqrt(lo.se_c() * lo.se_c() + hi.se_c() * hi.se_c());
    const bool pass = dh <= 0.02 && dc > 3.0 * pooled_se;
    report(7, "fgn-h-asymmetry", pass,
           fmt("|dh|=%.5f (<=0.02); |dc|=%.5f = %.0f pooled se (>3)", dh, dc,
               dc / pooled_se));
    CHECK(pass);
}

TEST_CASE("criterion 08: generator fidelity") {
    bool pass = true;
    std::string detail;

    // (a) periodogram slopes, 50-seed averages
    for (double k : {1.0, 2.0, 3.0}) {
        const double slope = test_helpers::mean_periodogram_slope(
            k, 1 << 16, 50, desk_seed + static_cast<std::uint64_t>(k * 100));
        const bool ok = std::fabs(slope + k) <= 0.15;
        pass = pass && ok;
        detail += fmt("slope(k=%g)=%.3f; ", k, slope);
    }

    // (b) FGN lag-1 autocorrelation against the closed form
    for (double h : {0.25, 0.5, 0.75}) {
        const auto g = fgn(FractionalSpec{h, desk_len, desk_seed + 7});
        const double rho = test_helpers::lag1_autocorr(g.values);
        const double expect = fgn_covariance(h, 1.0);
        const bool ok = std::fabs(rho - expect) <= 0.02;
        pass = pass && ok;
        detail += fmt("rho1(H=%g)=%.4f vs %.4f; ", h, rho, expect);
    }

    // (c) differencing an FBM draw recovers the FGN draw bit-exactly
    std::uint64_t diff_mismatches = 0;
    for (double h : {0.2, 0.5, 0.8}) {
        const std::size_t len = 20000;
        const auto path = fbm(FractionalSpec{h, len, desk_seed + 11, FractionalKind::fbm});
        const auto inc = fgn(FractionalSpec{h, len - 1, desk_seed + 11});
        for (std::size_t t = 0; t + 1 < len; ++t)
            diff_mismatches += (path.values[t + 1] - path.values[t]) != inc.values[t];
    }
    pass = pass && diff_mismatches == 0;
    detail += fmt("diff mismatches=%llu; ",
                  static_cast<unsigned long long>(diff_mismatches));

    // (d) B(0) = 0 always
    bool b0 = true;
    for (double h : {0.1, 0.5, 0.9})
        for (std::uint64_t seed : {1ull, 99ull})
            b0 = b0 && fbm(FractionalSpec{h, 100, seed, FractionalKind::fbm}).values[0] == 0.0;
    pass = pass && b0;
    detail += fmt("B(0)=0: %s", b0 ? "yes" : "no");

    report(8, "generator-fidelity", pass, detail);
    CHECK(pass);
}

TEST_CASE("criterion 09: invariance suite") {
    SplitMix64 rng(desk_seed);
    std::uint64_t violations = 0;

    // monotone-transform invariance, 1000 cases x 3 transforms
    for (int rep = 0; rep < 1000; ++rep) {
        const int d = 2 + static_cast<int>(rng.next_u64() % 4);
        std::vector<double> v(50 + rng.next_u64() % 100);
        for (auto& x : v) x = rng.uniform(-3, 3);
        const auto series = make_series(std::move(v));
        const auto base = symbolize(series, {d, 1}).symbols;
        const auto check = [&](auto f) {
            std::vector<double> m(series.size());
            for (std::size_t i = 0; i < series.size(); ++i) m[i] = f(series.values[i]);
            violations += symbolize(make_series(std::move(m)), {d, 1}).symbols != base;
        };
        check([](double x) { return 2.0 * x + 5.0; });
        check([](double x) { return std::exp(x); });
        check([](double x) { return x * x * x + x; });
    }

    // entropy in [0,1], 1000 cases
    for (int rep = 0; rep < 1000; ++rep) {
        const int d = 2 + static_cast<int>(rng.next_u64() % 4);
        std::vector<double> v(40 + rng.next_u64() % 200);
        for (auto& x : v) x = rng.uniform(-1, 1);
        const double h = permutation_entropy(
            pattern_frequencies(symbolize(make_series(std::move(v)), {d, 1})));
        violations += !(h >= 0.0 && h <= 1.0);
    }

    // C bounds and the refined upper bound, 1000 cases
    for (int rep = 0; rep < 1000; ++rep) {
        const std::uint64_t alpha = 2 + rng.next_u64() % 4;
        const std::size_t n = 1 + rng.next_u64() % 3000;
        std::vector<Symbol> s(n);
        for (auto& x : s) x = rng.next_u64() % alpha;
        const auto c = lz76_production_count(s);
        violations += !(c >= 1 && c <= n);
        try {
            violations += static_cast<double>(c) > lz_upper_bound(n, alpha);
        } catch (const bound_undefined&) {
        }
    }

    // entropy depends only on the multiset of frequencies, 1000 cases
    for (int rep = 0; rep < 1000; ++rep) {
        const int d = 2 + static_cast<int>(rng.next_u64() % 3);
        PatternDistribution dist;
        dist.d = d;
        dist.counts.assign(factorial(d), 0);
        dist.total = 0;
        for (auto& c : dist.counts) {
            c = rng.next_u64() % 30;
            dist.total += c;
        }
        if (dist.total == 0) continue;
        const double h1 = permutation_entropy(dist);
        for (std::size_t i = dist.counts.size(); i-- > 1;)
            std::swap(dist.counts[i], dist.counts[rng.next_u64() % (i + 1)]);
        violations += std::fabs(permutation_entropy(dist) - h1) > 1e-12;
    }

    const bool pass = violations == 0;
    report(9, "invariance-suite", pass,
           fmt("4 properties x 1000 cases, %llu violations",
               static_cast<unsigned long long>(violations)));
    CHECK(pass);
}

TEST_CASE("criterion 10: reproducibility and throughput") {
    ExperimentSpec spec;
    spec.sources = {SourceRequest{SourceKind::map, find_map("sine").id, 0.0},
                    SourceRequest{SourceKind::knoise, 0, 1.5},
                    SourceRequest{SourceKind::fbm, 0, 0.7}};
    spec.realizations = 8;
    spec.length = 4000;
    spec.embedding = desk_cfg;
    spec.master_seed = desk_seed;

    const auto s1 = run_experiment(spec, 1);
    const auto s2 = run_experiment(spec, 2);
    const auto s8 = run_experiment(spec, 8);
    const bool identical = to_csv(s1, spec) == to_csv(s2, spec) &&
                           to_csv(s1, spec) == to_csv(s8, spec) &&
                           to_export_json(s1, spec) == to_export_json(s8, spec);

    const auto orbit = iterate(OrbitRequest{find_map("logistic").id, 1000000, 1000, desk_seed});
    const double t0 = now_s();
    const auto p = plane_point(orbit, desk_cfg);
    const double elapsed = now_s() - t0;
    const bool fast = elapsed <= 10.0;

    const bool pass = identical && fast;
    report(10, "reproducibility-throughput", pass,
           fmt("workers {1,2,8} byte-identical: %s; plane_point(L=1e6,d=5)=%.2f s "
               "(<=10, h=%.4f c=%.4f)",
               identical ? "yes" : "no", elapsed, p.h, p.c));
    CHECK(pass);
}

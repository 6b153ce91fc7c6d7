#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "permlz/errors.hpp"
#include "permlz/lz76.hpp"
#include "permlz/ordinal.hpp"
#include "permlz/series.hpp"

namespace permlz {

// Dense frequency tables need a d! sized array; cap the dimension where that
// stops being sensible (10! ~ 3.6e6 counters). Meaningful statistics need
// T >> d! anyway, so analyses beyond d = 7 are already questionable.
inline constexpr int max_distribution_dim = 10;

struct PatternDistribution {
    std::vector<std::uint64_t> counts; // indexed by Lehmer symbol, size d!
    std::uint64_t total = 0;
    int d = 0;
};

inline PatternDistribution pattern_frequencies(const OrdinalSequence& s) {
    if (s.symbols.empty()) throw empty_sequence("pattern_frequencies: empty sequence");
    if (s.config.d > max_distribution_dim)
        throw invalid_config("pattern_frequencies: d > " +
                             std::to_string(max_distribution_dim) +
                             " would need a " + std::to_string(s.config.d) +
                             "! sized table");
    PatternDistribution dist;
    dist.d = s.config.d;
    dist.counts.assign(factorial(s.config.d), 0);
    for (Symbol sym : s.symbols) {
        if (sym >= dist.counts.size())
            throw symbol_out_of_range("pattern_frequencies: symbol " +
                                      std::to_string(sym) + " >= d!");
        ++dist.counts[sym];
    }
    dist.total = s.symbols.size();
    return dist;
}

// Plug-in Shannon entropy of the pattern frequencies, base d! so the result
// lives in [0, 1]: 0 for a single pattern, 1 for the uniform distribution.
inline double permutation_entropy(const PatternDistribution& dist) {
    if (dist.total == 0) throw empty_sequence("permutation_entropy: empty distribution");
    const double total = static_cast<double>(dist.total);
    double h_nats = 0.0;
    for (std::uint64_t c : dist.counts) {
        if (c == 0) continue; // 0 log 0 := 0
        const double f = static_cast<double>(c) / total;
        h_nats -= f * std::log(f);
    }
    const double log_alphabet = std::lgamma(static_cast<double>(dist.d) + 1.0);
    return std::clamp(h_nats / log_alphabet, 0.0, 1.0);
}

struct LzResult {
    std::uint64_t productions = 0;  // C
    double normalized = 0.0;        // c = C log_alpha(T) / T
    std::uint64_t alphabet_size = 0;
    std::uint64_t length = 0;       // T
};

inline LzResult lz_complexity(std::span<const Symbol> symbols, std::uint64_t alphabet) {
    if (symbols.empty()) throw empty_sequence("lz_complexity: empty sequence");
    if (alphabet < 2) throw invalid_config("lz_complexity: alphabet size must be >= 2");
    for (Symbol s : symbols)
        if (s >= alphabet)
            throw symbol_out_of_range("lz_complexity: symbol " + std::to_string(s) +
                                      " >= alphabet size " + std::to_string(alphabet));
    LzResult r;
    r.alphabet_size = alphabet;
    r.length = symbols.size();
    r.productions = lz76_production_count(symbols);
    const double t = static_cast<double>(r.length);
    r.normalized = static_cast<double>(r.productions) * std::log(t) /
                   (std::log(static_cast<double>(alphabet)) * t);
    return r;
}

// Refined upper bound on C: T / ((1 - eps_T) log_alpha T) with
// eps_T = 2 (1 + log_alpha log_alpha(alpha T)) / log_alpha T.
inline double lz_upper_bound(std::uint64_t length, std::uint64_t alphabet) {
    if (alphabet < 2) throw invalid_config("lz_upper_bound: alphabet size must be >= 2");
    if (length < 1) throw bound_undefined("lz_upper_bound: empty sequence");
    const double la = std::log(static_cast<double>(alphabet));
    const double log_t = std::log(static_cast<double>(length)) / la;
    const double log_at = std::log(static_cast<double>(alphabet) *
                                   static_cast<double>(length)) / la;
    if (log_t <= 0.0 || log_at <= 0.0)
        throw bound_undefined("lz_upper_bound: undefined for T=" + std::to_string(length));
    const double eps = 2.0 * (1.0 + std::log(log_at) / la) / log_t;
    const double denom = (1.0 - eps) * log_t;
    if (denom <= 0.0)
        throw bound_undefined("lz_upper_bound: undefined for T=" + std::to_string(length) +
                              ", alpha=" + std::to_string(alphabet));
    return static_cast<double>(length) / denom;
}

struct PlanePoint {
    double h = 0.0; // normalized permutation entropy
    double c = 0.0; // normalized permutation LZ complexity

    bool operator==(const PlanePoint&) const = default;
};

// Full per-series result; plane_point() is the (h, c) projection.
struct SeriesAnalysis {
    PlanePoint point;
    LzResult lz;
    PatternDistribution distribution;
};

inline SeriesAnalysis analyze_series(const TimeSeries& series, const EmbeddingConfig& cfg) {
    const OrdinalSequence seq = symbolize(series, cfg);
    SeriesAnalysis a;
    a.distribution = pattern_frequencies(seq);
    a.lz = lz_complexity(seq.symbols, seq.alphabet_size());
    a.point.h = permutation_entropy(a.distribution);
    a.point.c = a.lz.normalized;
    return a;
}

inline PlanePoint plane_point(const TimeSeries& series, const EmbeddingConfig& cfg) {
    return analyze_series(series, cfg).point;
}

} // namespace permlz

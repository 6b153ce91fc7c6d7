#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "permlz/errors.hpp"
#include "permlz/series.hpp"

namespace permlz {

// Ordinal-pattern symbolization: delay-embed a scalar series into windows
// of d samples spaced tau apart, replace each window by the permutation of
// ranks of its components, and encode that permutation as its lexicographic
// (Lehmer) rank in [0, d!). Ties are broken by time index, so earlier
// samples get the lower rank and symbolization stays deterministic on data
// where equal doubles do occur.

using Symbol = std::uint64_t;

inline constexpr int max_embedding_dim = 20; // 20! still fits in 64 bits

struct EmbeddingConfig {
    int d = 5;
    int tau = 1;

    bool operator==(const EmbeddingConfig&) const = default;
};

inline void validate(const EmbeddingConfig& cfg) {
    if (cfg.d < 2 || cfg.d > max_embedding_dim)
        throw invalid_config("embedding dimension d must be in [2, " +
                             std::to_string(max_embedding_dim) + "], got " +
                             std::to_string(cfg.d));
    if (cfg.tau < 1)
        throw invalid_config("delay tau must be >= 1, got " + std::to_string(cfg.tau));
}

inline std::uint64_t factorial(int n) {
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
}

using PermutationVector = std::vector<int>;

struct OrdinalSequence {
    std::vector<Symbol> symbols;
    EmbeddingConfig config;
    std::size_t source_length = 0;

    std::size_t size() const { return symbols.size(); }
    std::uint64_t alphabet_size() const { return factorial(config.d); }
};

inline std::size_t embedded_count(std::size_t series_len, const EmbeddingConfig& cfg) {
    const std::size_t span = static_cast<std::size_t>(cfg.d - 1) *
                             static_cast<std::size_t>(cfg.tau);
    if (series_len < span + 1)
        throw series_too_short("series of length " + std::to_string(series_len) +
                               " too short for d=" + std::to_string(cfg.d) +
                               ", tau=" + std::to_string(cfg.tau) +
                               " (need at least " + std::to_string(span + 1) + ")");
    return series_len - span;
}

// Windows [X_{t-(d-1)tau}, ..., X_{t-tau}, X_t], oldest first.
inline std::vector<std::vector<double>> embed(const TimeSeries& series,
                                              const EmbeddingConfig& cfg) {
    validate(cfg);
    const std::size_t count = embedded_count(series.size(), cfg);
    std::vector<std::vector<double>> out;
    out.reserve(count);
    for (std::size_t t = 0; t < count; ++t) {
        std::vector<double> v(static_cast<std::size_t>(cfg.d));
        for (int i = 0; i < cfg.d; ++i)
            v[static_cast<std::size_t>(i)] =
                series.values[t + static_cast<std::size_t>(i) * static_cast<std::size_t>(cfg.tau)];
        out.push_back(std::move(v));
    }
    return out;
}

// Component i of the result is the ascending-sort rank of v[i]; equal values
// ranked in time order.
inline PermutationVector rank_vector(std::span<const double> v) {
    const int d = static_cast<int>(v.size());
    if (d < 2) throw invalid_config("rank_vector needs at least 2 components");
    std::array<int, max_embedding_dim> order;
    if (d > max_embedding_dim) throw invalid_config("rank_vector: too many components");
    for (int i = 0; i < d; ++i) order[static_cast<std::size_t>(i)] = i;
    std::stable_sort(order.begin(), order.begin() + d,
                     [&](int a, int b) { return v[static_cast<std::size_t>(a)] <
                                                v[static_cast<std::size_t>(b)]; });
    PermutationVector ranks(static_cast<std::size_t>(d));
    for (int r = 0; r < d; ++r)
        ranks[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] = r;
    return ranks;
}

inline bool is_permutation_of_iota(std::span<const int> p) {
    std::array<bool, max_embedding_dim> seen{};
    const int d = static_cast<int>(p.size());
    if (d < 1 || d > max_embedding_dim) return false;
    for (int x : p) {
        if (x < 0 || x >= d || seen[static_cast<std::size_t>(x)]) return false;
        seen[static_cast<std::size_t>(x)] = true;
    }
    return true;
}

// Lexicographic rank of p among all d! permutations of {0,...,d-1}.
inline Symbol lehmer_index(std::span<const int> p) {
    if (!is_permutation_of_iota(p))
        throw invalid_permutation("lehmer_index: input is not a permutation of 0..d-1");
    const int d = static_cast<int>(p.size());
    Symbol idx = 0;
    std::uint64_t place = factorial(d - 1);
    for (int i = 0; i < d; ++i) {
        int smaller_later = 0;
        for (int j = i + 1; j < d; ++j)
            if (p[static_cast<std::size_t>(j)] < p[static_cast<std::size_t>(i)]) ++smaller_later;
        idx += static_cast<Symbol>(smaller_later) * place;
        if (i + 1 < d) place /= static_cast<std::uint64_t>(d - 1 - i);
    }
    return idx;
}

inline PermutationVector lehmer_decode(Symbol idx, int d) {
    if (d < 1 || d > max_embedding_dim)
        throw invalid_permutation("lehmer_decode: bad dimension");
    if (idx >= factorial(d))
        throw invalid_permutation("lehmer_decode: index out of range");
    std::vector<int> pool(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) pool[static_cast<std::size_t>(i)] = i;
    PermutationVector p(static_cast<std::size_t>(d));
    std::uint64_t place = factorial(d - 1);
    for (int i = 0; i < d; ++i) {
        const std::size_t pick = static_cast<std::size_t>(idx / place);
        idx %= place;
        p[static_cast<std::size_t>(i)] = pool[pick];
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
        if (i + 1 < d) place /= static_cast<std::uint64_t>(d - 1 - i);
    }
    return p;
}

// Fused embed + rank + encode. Equivalent to composing the three operations
// above (tested as such) without materializing the windows.
inline OrdinalSequence symbolize(const TimeSeries& series, const EmbeddingConfig& cfg) {
    validate(cfg);
    const std::size_t count = embedded_count(series.size(), cfg);
    const int d = cfg.d;
    const std::size_t tau = static_cast<std::size_t>(cfg.tau);

    std::array<std::uint64_t, max_embedding_dim> place{};
    place[static_cast<std::size_t>(d - 1)] = 1;
    for (int i = d - 2; i >= 0; --i)
        place[static_cast<std::size_t>(i)] =
            place[static_cast<std::size_t>(i + 1)] * static_cast<std::uint64_t>(d - 1 - i);

    OrdinalSequence out;
    out.symbols.resize(count);
    out.config = cfg;
    out.source_length = series.size();

    std::array<double, max_embedding_dim> w;
    std::array<int, max_embedding_dim> order;
    std::array<int, max_embedding_dim> rank;
    for (std::size_t t = 0; t < count; ++t) {
        for (int i = 0; i < d; ++i)
            w[static_cast<std::size_t>(i)] =
                series.values[t + static_cast<std::size_t>(i) * tau];
        for (int i = 0; i < d; ++i) order[static_cast<std::size_t>(i)] = i;
        // insertion sort, stable in time index
        for (int i = 1; i < d; ++i) {
            const int oi = order[static_cast<std::size_t>(i)];
            const double key = w[static_cast<std::size_t>(oi)];
            int j = i - 1;
            while (j >= 0 && w[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])] > key) {
                order[static_cast<std::size_t>(j + 1)] = order[static_cast<std::size_t>(j)];
                --j;
            }
            order[static_cast<std::size_t>(j + 1)] = oi;
        }
        for (int r = 0; r < d; ++r)
            rank[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] = r;
        Symbol idx = 0;
        for (int i = 0; i < d; ++i) {
            int smaller_later = 0;
            for (int j = i + 1; j < d; ++j)
                if (rank[static_cast<std::size_t>(j)] < rank[static_cast<std::size_t>(i)])
                    ++smaller_later;
            idx += static_cast<Symbol>(smaller_later) * place[static_cast<std::size_t>(i)];
        }
        out.symbols[t] = idx;
    }
    return out;
}

} // namespace permlz

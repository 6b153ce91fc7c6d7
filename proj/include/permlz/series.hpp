#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "permlz/errors.hpp"

namespace permlz {

// A finite real-valued series plus provenance (generator label, seed).
// Values are guaranteed finite once constructed through make_series().
struct TimeSeries {
    std::vector<double> values;
    std::string source;
    std::uint64_t seed = 0;

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
};

inline void require_finite(std::span<const double> values, const std::string& context) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw non_finite_sample(context + ": non-finite sample at index " +
                                    std::to_string(i));
        }
    }
}

inline TimeSeries make_series(std::vector<double> values, std::string source = "",
                              std::uint64_t seed = 0) {
    require_finite(values, source.empty() ? "series" : source);
    return TimeSeries{std::move(values), std::move(source), seed};
}

} // namespace permlz

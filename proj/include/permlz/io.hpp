#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "permlz/errors.hpp"
#include "permlz/series.hpp"

namespace permlz {

// Series files: plain text with one sample per line (blank lines ignored),
// or raw little-endian float64 for bulk data. Extension ".f64" selects the
// binary format when auto-detecting.

inline TimeSeries read_series_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open '" + path + "' for reading");
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t i = 0;
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        if (i == line.size()) continue;
        char* end = nullptr;
        const double v = std::strtod(line.c_str() + i, &end);
        while (end && *end != '\0' && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
        if (end == line.c_str() + i || (end && *end != '\0'))
            throw io_error(path + ":" + std::to_string(lineno) + ": cannot parse '" +
                           line + "' as a number");
        values.push_back(v);
    }
    TimeSeries s = make_series(std::move(values), path);
    return s;
}

inline void write_series_text(const TimeSeries& series, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    char buf[64];
    for (double v : series.values) {
        std::snprintf(buf, sizeof(buf), "%.17g\n", v);
        out << buf;
    }
    if (!out) throw io_error("write failed for '" + path + "'");
}

inline TimeSeries read_series_f64(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path + "' for reading");
    in.seekg(0, std::ios::end);
    const auto bytes = static_cast<std::size_t>(in.tellg());
    in.seekg(0);
    if (bytes % sizeof(double) != 0)
        throw io_error(path + ": size " + std::to_string(bytes) +
                       " is not a multiple of 8");
    std::vector<double> values(bytes / sizeof(double));
    in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(bytes));
    if (!in) throw io_error("read failed for '" + path + "'");
    return make_series(std::move(values), path);
}

inline void write_series_f64(const TimeSeries& series, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    out.write(reinterpret_cast<const char*>(series.values.data()),
              static_cast<std::streamsize>(series.values.size() * sizeof(double)));
    if (!out) throw io_error("write failed for '" + path + "'");
}

inline bool has_f64_extension(const std::string& path) {
    return path.size() >= 4 && path.compare(path.size() - 4, 4, ".f64") == 0;
}

inline TimeSeries read_series_auto(const std::string& path) {
    return has_f64_extension(path) ? read_series_f64(path) : read_series_text(path);
}

inline void write_series_auto(const TimeSeries& series, const std::string& path) {
    if (has_f64_extension(path))
        write_series_f64(series, path);
    else
        write_series_text(series, path);
}

} // namespace permlz

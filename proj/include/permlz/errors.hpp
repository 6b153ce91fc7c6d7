#pragma once

#include <stdexcept>
#include <string>

namespace permlz {

// Base for all library errors so callers can catch one type.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

class series_too_short : public error {
public:
    using error::error;
};

class non_finite_sample : public error {
public:
    using error::error;
};

class invalid_permutation : public error {
public:
    using error::error;
};

class empty_sequence : public error {
public:
    using error::error;
};

class symbol_out_of_range : public error {
public:
    using error::error;
};

class bound_undefined : public error {
public:
    using error::error;
};

class unknown_map : public error {
public:
    using error::error;
};

class diverged_orbit : public error {
public:
    using error::error;
};

class invalid_length : public error {
public:
    using error::error;
};

class embedding_not_psd : public error {
public:
    using error::error;
};

class insufficient_points : public error {
public:
    using error::error;
};

class out_of_domain : public error {
public:
    using error::error;
};

class io_error : public error {
public:
    using error::error;
};

class invalid_config : public error {
public:
    using error::error;
};

} // namespace permlz

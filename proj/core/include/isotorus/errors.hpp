#pragma once

#include <stdexcept>
#include <string>

namespace isotorus {

// Bad user input: rejected parameters, malformed config, out-of-range requests.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& msg) : std::invalid_argument(msg) {}
};

// A numerical procedure failed to converge or left its domain of validity.
// `where` identifies the module/operation, `location` the offending abscissa
// or state when one is known.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& where, const std::string& msg)
        : std::runtime_error(where + ": " + msg), where_(where) {}

    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

} // namespace isotorus

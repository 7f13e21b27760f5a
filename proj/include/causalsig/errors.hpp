#pragma once

#include <stdexcept>
#include <string>

namespace causalsig {

// Bad configuration or command-line usage (CLI exit code 1).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input data that violates a contract: malformed CSV, bad prices,
// non-finite measurements, empty series (CLI exit code 2).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace causalsig

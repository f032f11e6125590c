#ifndef ODMD_ERRORS_HPP
#define ODMD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace odmd {

/// Bad arguments or malformed inputs (dimensions, schemas, config files).
class validation_error : public std::invalid_argument {
public:
    explicit validation_error(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical routine failed to meet its contract (non-convergence,
/// consistency checks, empty rank after truncation).
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace odmd

#endif

#pragma once

#include <stdexcept>
#include <string>

namespace ebrank {

// Raised on malformed or inconsistent inputs (files, labels, parameter
// domains). The CLI maps this to exit code 2.
struct InputError : std::runtime_error {
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when an iterative procedure exhausts its iteration budget or the
// data make the problem degenerate. The CLI maps this to exit code 3.
struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ebrank

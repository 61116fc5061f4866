#pragma once

#include <stdexcept>
#include <string>

// Error taxonomy used across the library.
//
//   invalid_param     - an argument is outside its documented domain
//   degenerate_input  - structurally valid input that is numerically degenerate
//                       (exact distance ties, coincident event times, ...)
//   capacity_exceeded - an instance is larger than a documented size guard
//   numeric_failure   - a quadrature / optimizer did not reach its target

namespace cgas {

struct invalid_param : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct degenerate_input : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct capacity_exceeded : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct numeric_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace cgas

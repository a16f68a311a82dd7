#pragma once

#include <stdexcept>
#include <string>

namespace lqw {

/// Invalid graph, window or training parameters.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Matrix or vector shapes that do not fit together.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A position or label outside the region it must belong to.
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// No window in a schedule contains a solution.
class ExhaustionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace lqw

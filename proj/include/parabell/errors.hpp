#pragma once

#include <stdexcept>
#include <string>

namespace parabell {

// Malformed arguments: dimension mismatch, non-normal operator, bad config.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// C(X,Y) with a vanishing spread and no regularization.
class UndefinedCorrelatorError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// An objective produced NaN/inf during optimization.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace parabell

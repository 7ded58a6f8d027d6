#pragma once

#include <stdexcept>
#include <string>

namespace cgl {

/// Raised when an operation is asked to act outside the parameter region
/// where it is defined (non-positive divisor, absent fixed point, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace cgl

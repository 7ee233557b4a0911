#pragma once

#include <stdexcept>
#include <string>

namespace formaldisc {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Domain errors named after the contract they guard.
struct NonZeroConstantTerm : Error { using Error::Error; };
struct NotInvertible : Error { using Error::Error; };
struct NotExponentiable : Error { using Error::Error; };
struct NotUnipotent : Error { using Error::Error; };
struct FractionalPowerUndefined : Error { using Error::Error; };
struct NotNilpotent : Error { using Error::Error; };
struct OnDiagonal : Error { using Error::Error; };
struct BadRange : Error { using Error::Error; };
struct DomainViolation : Error { using Error::Error; };
struct ExpansionBudgetExceeded : Error { using Error::Error; };
struct TruncationBudgetExhausted : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct UnknownTest : Error { using Error::Error; };

}  // namespace formaldisc

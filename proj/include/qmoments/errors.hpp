#pragma once

#include <stdexcept>
#include <string>

namespace qmoments {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Stiffness factor X <= 0 or other value outside the domain of the closed forms.
struct DomainError : Error {
  using Error::Error;
};

// Structurally invalid index/order arguments (parity, bounds, truncation).
struct RangeError : Error {
  using Error::Error;
};

// Moment order combinations the expansion does not solve.
struct UnsupportedMoment : Error {
  using Error::Error;
};

// Leading coefficient of the fourth-order equation below the configured floor.
struct SingularLeadingTerm : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

struct ValidationError : Error {
  using Error::Error;
};

struct EmptyOverlap : Error {
  using Error::Error;
};

}  // namespace qmoments

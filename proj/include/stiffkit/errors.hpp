#pragma once

#include <stdexcept>
#include <string>

namespace stiffkit {

// Base class for every error the toolkit raises on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

// A pivot fell below the relative threshold during factorization.
struct SingularMatrix : Error {
  using Error::Error;
};

struct IllConditioned : Error {
  using Error::Error;
};

// z sits on a pole of the stability function.
struct PoleAtZ : Error {
  using Error::Error;
};

// Parameters hit a vanishing denominator of a method family.
struct DegenerateFamily : Error {
  using Error::Error;
};

struct NoRealRoot : Error {
  using Error::Error;
};

struct NegativeDiscriminant : Error {
  using Error::Error;
};

struct OrderNotVerified : Error {
  using Error::Error;
};

struct NewtonDivergence : Error {
  using Error::Error;
};

// A stage vector picked up an inf/nan entry (instability blow-up).
struct NonFiniteState : Error {
  using Error::Error;
};

struct UnknownMethod : Error {
  using Error::Error;
};

}  // namespace stiffkit

#ifndef MINBALL_ERRORS_HPP
#define MINBALL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace minball {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

// point outside the domain, frame not orthonormal, parameter out of range
struct DomainError : Error {
  using Error::Error;
};

struct SingularityError : Error {
  using Error::Error;
};

struct HypothesisError : Error {
  using Error::Error;
};

struct ConvergenceError : Error {
  using Error::Error;
};

// NaN or Inf produced by an integrand
struct NumericError : Error {
  using Error::Error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

} // namespace minball

#endif // MINBALL_ERRORS_HPP

#ifndef MINBALL_SPECIAL_HPP
#define MINBALL_SPECIAL_HPP

#include <cmath>

namespace minball {

inline double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

inline double beta_fn(double a, double b) { return std::exp(log_beta(a, b)); }

// log of the dimension of degree-k spherical harmonics on S^n (real dimension n+1)
inline double log_harmonic_dim(int n, double k) {
  return std::log(2 * k + n - 1) + std::lgamma(k + n - 1) - std::lgamma(k + 1) - std::lgamma(n);
}

// 1/p', with 1/p' = 0 at p = 1
inline double conj_inv(double p) { return p == 1.0 ? 0.0 : 1.0 - 1.0 / p; }

} // namespace minball

#endif // MINBALL_SPECIAL_HPP

#ifndef MINBALL_ORBIT_HPP
#define MINBALL_ORBIT_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "quadrature.hpp"
#include "special.hpp"

namespace minball {

// Law of a = xi0 . conj(xi) for xi ~ mu on the boundary of M, xi0 fixed.
// The phase of a is uniform and E|a|^{2k} = 1 / dim H_k(S^n); the density of
// X = |a|^2 follows from partial fractions of that moment sequence.
class OrbitLaw {
 public:
  explicit OrbitLaw(int n) : n_(n) {
    if (n < 2) throw DomainError("n must be at least 2");
    std::vector<double> poles;
    poles.push_back(0.5 * (n - 1));
    for (int j = 1; j <= n - 2; ++j) poles.push_back(j);
    std::sort(poles.begin(), poles.end());
    const double scale = 0.5 * std::exp(std::lgamma(n));
    for (std::size_t i = 0; i < poles.size();) {
      const double alpha = poles[i];
      std::size_t mult = 1;
      while (i + mult < poles.size() && poles[i + mult] == alpha) ++mult;
      double g = scale, dlog = 0.0;
      for (double other : poles) {
        if (other == alpha) continue;
        g /= (other - alpha);
        dlog -= 1.0 / (other - alpha);
      }
      if (mult == 1) {
        terms_.push_back({alpha, g, 0.0});
      } else {
        terms_.push_back({alpha, g * dlog, g});
      }
      i += mult;
    }
  }

  int n() const { return n_; }

  // E|a|^{2k}
  double moment(double k) const { return std::exp(-log_harmonic_dim(n_, k)); }

  // density of X = |a|^2 on (0,1)
  double density_sq(double x) const {
    double f = 0.0;
    for (const auto& t : terms_) {
      const double base = std::pow(x, t.alpha - 1.0);
      f += t.simple * base;
      if (t.log_coef != 0.0) f += t.log_coef * base * (-std::log(x));
    }
    return f;
  }

  // density of A = |a| on (0,1)
  double density(double a) const { return a <= 0.0 ? (n_ == 2 ? 1.0 : 0.0) : 2.0 * a * density_sq(a * a); }

  // P(|a| <= a0)
  double cdf(double a0) const {
    if (a0 <= 0) return 0.0;
    if (a0 >= 1) return 1.0;
    const double x = a0 * a0;
    double F = 0.0;
    for (const auto& t : terms_) {
      const double xa = std::pow(x, t.alpha);
      F += t.simple * xa / t.alpha;
      if (t.log_coef != 0.0) F += t.log_coef * xa * (1.0 / (t.alpha * t.alpha) - std::log(x) / t.alpha);
    }
    return F;
  }

  // E[g(a)] for g smooth in the closed unit disc except for singular behaviour
  // near |a| = 1/rho; rho in [0,1) sets how finely the rim is resolved.
  template <class G>
  double expect(G&& g, double rho = 0.0) const {
    const double gap = std::max(1.0 - rho, 1e-9);
    std::vector<double> cuts{0.0};
    for (int j = 10; j >= 2; --j) cuts.push_back(std::ldexp(1.0, -j));
    const int deep = std::min(45, static_cast<int>(std::ceil(std::log2(8.0 / gap))));
    for (int j = 1; j <= deep; ++j) cuts.push_back(1.0 - std::ldexp(1.0, -j));
    cuts.push_back(1.0);
    const QuadratureRule base = gauss_jacobi01(16, 0.0, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double lo = cuts[i], hi = cuts[i + 1];
      for (std::size_t k = 0; k < base.nodes.size(); ++k) {
        const double A = lo + (hi - lo) * base.nodes[k];
        const double w = (hi - lo) * base.weights[k] * density(A);
        if (w == 0.0) continue;
        total += w * phase_average(g, A, rho);
      }
    }
    return total;
  }

  template <class G>
  static double phase_average(G&& g, double A, double rho) {
    const double delta = std::max(1.0 - rho * A, 1e-9);
    std::size_t m = 32;
    while (m < 65536 && m * delta < 40.0) m *= 2;
    double acc = 0.0;
    const double h = 2.0 * std::numbers::pi / static_cast<double>(m);
    for (std::size_t j = 0; j < m; ++j) acc += g(std::polar(A, h * static_cast<double>(j)));
    return acc / static_cast<double>(m);
  }

 private:
  struct Term {
    double alpha;
    double simple;
    double log_coef;
  };
  int n_;
  std::vector<Term> terms_;
};

// Closed-form orbit integrals for a cone point z with |z| = rho:
//   angular (radial == nullopt): int |z.conj(xi)|^{2d} |1 - z.conj(xi)|^{-gamma} dmu(xi)
//   volume  (radial == S):       int_M (1-|w|^2)^S |z.conj(w)|^{2d} |1 - z.conj(w)|^{-gamma} dm(w), without m_n
// both as rho^{2d} sum_k ((gamma/2)_k / k!)^2 rho^{2k} E|a|^{2(k+d)} [x radial Beta factor].
inline double orbit_series(int n, double rho, double gamma, int d, std::optional<double> radial) {
  if (!(rho >= 0.0 && rho < 1.0)) throw DomainError("series needs 0 <= |z| < 1");
  if (d < 0) throw DomainError("moment order must be non-negative");
  const double x = rho * rho;
  const double b = 0.5 * gamma;
  double coef = 1.0;
  double inv_dim = std::exp(-log_harmonic_dim(n, d));
  double radial_factor = 1.0;
  if (radial) {
    if (!(*radial > -1.0)) throw DomainError("radial weight exponent must exceed -1");
    radial_factor = 0.5 * beta_fn(d + n - 1.0, *radial + 1.0);
  }
  double total = 0.0, xp = 1.0;
  const long cap = 200000000L;
  for (long k = 0;; ++k) {
    const double term = coef * inv_dim * radial_factor * xp;
    total += term;
    if (k > 50 && std::abs(term) <= 1e-17 * std::abs(total)) break;
    if (k > cap) throw ConvergenceError("orbit series did not converge");
    if (coef == 0.0 || xp == 0.0) break;
    const double kd = static_cast<double>(k + d);
    const double ratio = (b + k) / (k + 1.0);
    coef *= ratio * ratio;
    inv_dim *= (2 * kd + n - 1) * (kd + 1) / ((2 * kd + n + 1) * (kd + n - 1));
    if (radial) radial_factor *= (kd + n - 1) / (kd + n + *radial);
    xp *= x;
  }
  return total * std::pow(rho, 2 * d);
}

} // namespace minball

#endif // MINBALL_ORBIT_HPP

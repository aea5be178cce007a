#ifndef MINBALL_KERNELS_HPP
#define MINBALL_KERNELS_HPP

#include <cmath>
#include <complex>

#include "errors.hpp"
#include "geometry.hpp"
#include "sampling.hpp"
#include "special.hpp"

namespace minball {

// LinearLead: bracket 2(n+s)X - (n+1+2s)(n+s-2k)/(n+s+1) (X^2-Y), which reproduces.
// ConstantLead: the same bracket with 2(n+s) in place of 2(n+s)X; does not reproduce.
enum class BracketForm { LinearLead, ConstantLead };

// Hermitian: denominator ((1 - z.conj(w))^2 - Y). Bilinear: ((1 - z.w)^2 - Y), does not reproduce.
enum class DenominatorForm { Hermitian, Bilinear };

struct KernelParams {
  int n = 2;
  double s = 0.0;
  // prefactor of the kernel on M
  double C = 1.0;
  // prefactor of the kernel on B*
  double ball_norm = 1.0;
  // relative standard error carried by a calibrated prefactor
  double norm_rel_error = 0.0;
  BracketForm bracket = BracketForm::LinearLead;
  DenominatorForm denominator = DenominatorForm::Hermitian;
};

inline void validate(const KernelParams& kp) {
  if (kp.n < 2) throw DomainError("n must be at least 2");
  if (!(kp.s > -1.0)) throw DomainError("weight exponent s must exceed -1");
}

inline Complex principal_pow(Complex base, double e, bool right_half = true) {
  if (right_half && !(base.real() > 0.0)) throw DomainError("principal branch requires Re(base) > 0");
  return std::exp(e * std::log(base));
}

// C (n-1 + (n+1+2s) x) / (1-x)^{n+1+s}, x = z . conj(w)
inline Complex kernel_M(const CPoint& z, const CPoint& w, const KernelParams& kp) {
  validate(kp);
  require_same_dim(z, w);
  if (z.dim() != kp.n + 1) throw DimensionMismatch("kernel on M expects points of C^{n+1}");
  const Complex x = hermitian(z, w);
  const Complex one_minus = 1.0 - x;
  if (std::abs(one_minus) < 1e-14) throw SingularityError("kernel evaluated at z.conj(w) = 1");
  const double n = kp.n, s = kp.s;
  return kp.C * (n - 1.0 + (n + 1.0 + 2.0 * s) * x) / principal_pow(one_minus, n + 1.0 + s);
}

// C making kernel_M reproducing for (1-|w|^2)^s dm
inline double exact_C_M(const Config& cfg, double s) {
  return 2.0 / (cfg.m_n * (cfg.n - 1.0) * beta_fn(cfg.n - 1.0, s + 1.0));
}

struct ASeriesResult {
  Complex value{};
  int terms = 0;
};

// A(X,Y) = sum_k binom(m, 2k+1) X^{m-2k-2} Y^k [2(n+s) X - kappa (m-1-2k)/m (X^2 - Y)],
// m = n+s+1, kappa = n+1+2s. Finite when m is an integer.
inline ASeriesResult a_series(Complex X, Complex Y, int n, double s, double tol = 1e-15,
                              BracketForm form = BracketForm::LinearLead) {
  if (!(s > -1.0)) throw DomainError("weight exponent s must exceed -1");
  if (std::abs(X) == 0.0) throw SingularityError("A(X,Y) at X = 0");
  const double m = n + s + 1.0;
  const double kappa = n + 1.0 + 2.0 * s;
  const bool finite = std::abs(m - std::round(m)) < 1e-12;
  const int last = finite ? static_cast<int>((std::lround(m) - 1) / 2) : -1;
  const Complex D = X * X - Y;
  const Complex logX = std::log(X);
  Complex sum{};
  double binom = m;  // binom(m, 1)
  Complex Yk = 1.0;
  int small_run = 0;
  for (int k = 0;; ++k) {
    if (finite && k > last) return {sum, k};
    const Complex Xpow = std::exp((m - 2.0 * k - 2.0) * logX);
    const Complex lead = form == BracketForm::LinearLead ? 2.0 * (n + s) * X : Complex(2.0 * (n + s));
    const Complex term = binom * Xpow * Yk * (lead - kappa * (m - 1.0 - 2.0 * k) / m * D);
    sum += term;
    if (!finite) {
      small_run = std::abs(term) <= tol * std::abs(sum) ? small_run + 1 : 0;
      if (small_run >= 3) return {sum, k + 1};
      if (k >= 499) throw ConvergenceError("A(X,Y) series did not converge");
    }
    // binom(m, 2k+3) from binom(m, 2k+1)
    binom *= (m - 2.0 * k - 1.0) * (m - 2.0 * k - 2.0) / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
    Yk *= Y;
  }
}

// A(1,0) = (n+s)(n+1)
inline double a_at_origin(int n, double s) { return (n + s) * (n + 1.0); }

// 1 / ((n+s)(n+1) v_s): makes kernel_ball reproducing for (1-N*^2)^s dv
inline double exact_ball_norm(int n, double s) { return 1.0 / (a_at_origin(n, s) * weighted_mass_ball(n, s)); }

inline double shifted_ball_norm(int n, double s) {
  return 1.0 / ((n * n + n - s) * weighted_mass_ball(n, s));
}

// ball_norm A(X,Y) / (X^2 - Y)^{n+1+s}, X = 1 - z.conj(w)
inline Complex kernel_ball(const CPoint& z, const CPoint& w, const KernelParams& kp) {
  validate(kp);
  require_same_dim(z, w);
  if (z.dim() != kp.n) throw DimensionMismatch("kernel on B* expects points of C^n");
  const Complex X = 1.0 - hermitian(z, w);
  const Complex Y = bilinear(z, z) * std::conj(bilinear(w, w));
  const Complex Xd = kp.denominator == DenominatorForm::Hermitian ? X : 1.0 - bilinear(z, w);
  const Complex D = Xd * Xd - Y;
  if (std::abs(D) < 1e-14) throw SingularityError("ball kernel evaluated on its singular set");
  const double e = kp.n + 1.0 + kp.s;
  const Complex A = a_series(X, Y, kp.n, kp.s, 1e-15, kp.bracket).value;
  return kp.ball_norm * A / principal_pow(D, e, kp.denominator == DenominatorForm::Hermitian);
}

// Fixes the prefactor so that the projection of 1 is 1 at the origin.
inline KernelParams calibrate(KernelParams kp, const SampleCloud& cloud) {
  validate(kp);
  if (cloud.weight_exponent != kp.s) throw DomainError("cloud weight exponent differs from kernel s");
  if (!(cloud.total_mass > 1e-300)) throw NumericError("degenerate cloud: projection of 1 vanishes");
  if (cloud.domain == Domain::M) {
    kp.C = 1.0 / ((kp.n - 1.0) * cloud.total_mass);
  } else {
    const double A0 = a_series(1.0, 0.0, kp.n, kp.s, 1e-15, kp.bracket).value.real();
    kp.ball_norm = 1.0 / (A0 * cloud.total_mass);
  }
  kp.norm_rel_error = cloud.mass_std_error / cloud.total_mass;
  return kp;
}

} // namespace minball

#endif // MINBALL_KERNELS_HPP

#ifndef MINBALL_OPERATORS_HPP
#define MINBALL_OPERATORS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "fr_integrals.hpp"
#include "geometry.hpp"
#include "kernels.hpp"
#include "orbit.hpp"
#include "quadrature.hpp"
#include "sampling.hpp"
#include "special.hpp"

namespace minball {

struct OperatorParams {
  int n = 2;
  double b1 = 0.0, b2 = 0.0, c = 0.0, s = 0.0, r = 0.0, p = 2.0, q = 2.0;

  void validate() const {
    if (n < 2) throw DomainError("n must be at least 2");
    if (!(s > -1.0)) throw DomainError("need s > -1");
    if (!(p >= 1.0 && p <= q && std::isfinite(q))) throw DomainError("need 1 <= p <= q < inf");
    if (!(r > std::max(-1.0, -1.0 - q * b1))) throw DomainError("need r > max(-1, -1 - q b1)");
  }
  // 1/p'
  double inv_conj() const { return conj_inv(p); }
  // Theorem-A/B boundary value of c
  double critical_c() const { return b1 + b2 - s + (n + 1.0 + r) / q + (n + 1.0 + s) * inv_conj(); }
};

// Holomorphic: (1 - z.conj(w))^{-c}, the operator S. Modulus: |1 - z.conj(w)|^{-c}, the operator T.
enum class KernelKind { Holomorphic, Modulus };

inline Complex operator_kernel(KernelKind kind, const CPoint& z, const CPoint& w, double c) {
  const Complex one_minus = 1.0 - hermitian(z, w);
  const double mod = std::abs(one_minus);
  if (mod < 1e-14) throw SingularityError("operator kernel singular at " + w.str());
  if (kind == KernelKind::Modulus) return std::pow(mod, -c);
  return principal_pow(one_minus, -c);
}

namespace detail {

inline void require_M_cloud(const SampleCloud& cloud, int n) {
  if (cloud.domain != Domain::M) throw DomainError("operator needs a cloud on M");
  if (cloud.n != n) throw DimensionMismatch("cloud dimension differs from operator n");
}

inline Estimate add_relative_error(Estimate e, double rel) {
  e.std_error = std::hypot(e.std_error, std::abs(e.value) * rel);
  return e;
}

} // namespace detail

// (1-|z|^2)^{b1} int f(w) k(z,w) (1-|w|^2)^{b2} dm(w); the cloud density is adjusted to b2.
template <class F>
Estimate apply_operator(KernelKind kind, F&& f, const CPoint& z, const OperatorParams& op, const SampleCloud& cloud) {
  op.validate();
  detail::require_M_cloud(cloud, op.n);
  const double outer = std::pow(1.0 - z.norm2(), op.b1);
  Estimate e = mc_integrate(
      [&](const CPoint& w) {
        return Complex(f(w)) * operator_kernel(kind, z, w, op.c) * cloud_density_factor(cloud, w, op.b2);
      },
      cloud);
  e.value *= outer;
  e.std_error *= outer;
  return e;
}

template <class F>
Estimate apply_S(F&& f, const CPoint& z, const OperatorParams& op, const SampleCloud& cloud) {
  return apply_operator(KernelKind::Holomorphic, f, z, op, cloud);
}

template <class F>
Estimate apply_T(F&& f, const CPoint& z, const OperatorParams& op, const SampleCloud& cloud) {
  return apply_operator(KernelKind::Modulus, f, z, op, cloud);
}

// Adjoint with respect to <f,g>_{nu1} and <f,g>_{nu2}:
// (1-|z|^2)^{b2-s} int (1-|w|^2)^{b1} conj(k(w,z)) g(w) (1-|w|^2)^r dm(w).
template <class G>
Estimate apply_adjoint(KernelKind kind, G&& g, const CPoint& z, const OperatorParams& op,
                       const SampleCloud& target_cloud) {
  op.validate();
  detail::require_M_cloud(target_cloud, op.n);
  const double outer = std::pow(1.0 - z.norm2(), op.b2 - op.s);
  Estimate e = mc_integrate(
      [&](const CPoint& w) {
        return Complex(g(w)) * operator_kernel(kind, z, w, op.c) * std::pow(1.0 - w.norm2(), op.b1) *
               cloud_density_factor(target_cloud, w, op.r);
      },
      target_cloud);
  e.value *= outer;
  e.std_error *= outer;
  return e;
}

template <class G>
Estimate apply_S_adjoint(G&& g, const CPoint& z, const OperatorParams& op, const SampleCloud& target_cloud) {
  return apply_adjoint(KernelKind::Holomorphic, g, z, op, target_cloud);
}

template <class G>
Estimate apply_T_adjoint(G&& g, const CPoint& z, const OperatorParams& op, const SampleCloud& target_cloud) {
  return apply_adjoint(KernelKind::Modulus, g, z, op, target_cloud);
}

// int K_{s,M}(z,w) f(w) (1-|w|^2)^s dm(w); the error includes the calibration error.
template <class F>
Estimate project_M(F&& f, const CPoint& z, double s, const SampleCloud& cloud, const KernelParams& kp) {
  detail::require_M_cloud(cloud, kp.n);
  if (kp.s != s) throw DomainError("kernel weight differs from projection weight");
  Estimate e = mc_integrate(
      [&](const CPoint& w) { return kernel_M(z, w, kp) * Complex(f(w)) * cloud_density_factor(cloud, w, s); }, cloud);
  return detail::add_relative_error(e, kp.norm_rel_error);
}

template <class F>
Estimate project_ball(F&& f, const CPoint& z, double s, const SampleCloud& cloud, const KernelParams& kp) {
  if (cloud.domain != Domain::BallStar) throw DomainError("ball projection needs a cloud on B*");
  if (kp.s != s) throw DomainError("kernel weight differs from projection weight");
  Estimate e = mc_integrate(
      [&](const CPoint& w) { return kernel_ball(z, w, kp) * Complex(f(w)) * cloud_density_factor(cloud, w, s); },
      cloud);
  return detail::add_relative_error(e, kp.norm_rel_error);
}

// (int |f|^p dsigma)^{1/p} with sigma = (1-|z|^2)^lambda dm on M and
// |z.z|^{(p-2)/2} (1-N*^2)^lambda dv on B*, from values f(z_i) on the cloud.
// p = inf gives the cloud supremum.
inline Estimate lp_norm_values(const std::vector<Complex>& values, double p, double lambda, const SampleCloud& cloud) {
  if (!(p >= 1.0)) throw DomainError("need p >= 1");
  if (values.size() != cloud.size()) throw DimensionMismatch("one value per cloud point expected");
  if (std::isinf(p)) {
    double sup = 0.0;
    for (const auto& v : values) sup = std::max(sup, std::abs(v));
    return {sup, 0.0};
  }
  const bool ball = cloud.domain == Domain::BallStar;
  const double N = static_cast<double>(cloud.size());
  MeanAccumulator acc;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const CPoint& z = cloud.points[i];
    double v = std::pow(std::abs(values[i]), p) * cloud_density_factor(cloud, z, lambda);
    if (ball && p != 2.0) v *= std::pow(std::abs(bilinear(z, z)), 0.5 * (p - 2.0));
    check_finite(v, z);
    acc.add(N * cloud.weights[i] * v);
  }
  const Estimate power = acc.result();
  const double I = power.real();
  if (I <= 0.0) return {0.0, power.std_error};
  const double norm = std::pow(I, 1.0 / p);
  return {norm, power.std_error * norm / (p * I)};
}

template <class F>
Estimate lp_norm(F&& f, double p, double lambda, const SampleCloud& cloud) {
  std::vector<Complex> values(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) values[i] = Complex(f(cloud.points[i]));
  return lp_norm_values(values, p, lambda, cloud);
}

// ---- test families ---------------------------------------------------------

struct TestFunction {
  enum class Kind { PowerN, Xi, Holomorphic, User };
  Kind kind = Kind::User;
  double N = 0.0;
  CPoint xi;
  double b2 = 0.0;
  CFunction user;

  Complex operator()(const CPoint& z) const {
    switch (kind) {
      case Kind::PowerN:
        return std::pow(1.0 - z.norm2(), N);
      case Kind::Xi: {
        const int n = xi.dim() - 1;
        const double m = n + 1.0 + b2;
        const Complex y = hermitian(z, xi);
        return std::pow(1.0 - xi.norm2(), m) * (n - 1.0 + (n + 1.0 + 2.0 * b2) * y) / principal_pow(1.0 - y, m);
      }
      default:
        return user(z);
    }
  }

  // (1-|z|^2)^N, admissible when N > max(-(1+r)/q', -1-r-b1)
  static TestFunction power(double N, const OperatorParams& op) {
    const double lower = std::max(-(1.0 + op.r) * conj_inv(op.q), -1.0 - op.r - op.b1);
    if (!(N > lower)) throw DomainError("power family exponent below its admissible range");
    TestFunction f;
    f.kind = Kind::PowerN;
    f.N = N;
    return f;
  }

  // (1-|xi|^2)^{n+1+b2} [n-1 + (n+1+2 b2) z.conj(xi)] / (1 - z.conj(xi))^{n+1+b2}
  static TestFunction xi_family(const CPoint& xi, double b2) {
    ManifoldPoint::make(xi);
    if (!(xi.norm2() < 1.0)) throw DomainError("xi must lie inside M");
    TestFunction f;
    f.kind = Kind::Xi;
    f.xi = xi;
    f.b2 = b2;
    return f;
  }

  static TestFunction from(CFunction g, Kind kind = Kind::User) {
    TestFunction f;
    f.kind = kind;
    f.user = std::move(g);
    return f;
  }
};

// S f_xi(z) by the reproducing property
inline Complex S_of_xi(const OperatorParams& op, const Config& cfg, const CPoint& xi, const CPoint& z) {
  const double m = op.n + 1.0 + op.b2;
  return std::pow(1.0 - z.norm2(), op.b1) * std::pow(1.0 - xi.norm2(), m) *
         principal_pow(1.0 - hermitian(z, xi), -op.c) / exact_C_M(cfg, op.b2);
}

// S* f_N(z) / (1-|z|^2)^{b2-s} = int (1-|w|^2)^{b1+N+r} dm
inline double S_adjoint_power_constant(const OperatorParams& op, const Config& cfg, double N) {
  return weighted_mass_M(cfg, op.b1 + N + op.r);
}

// ---- ratio probes ----------------------------------------------------------

struct RatioRow {
  double param = 0.0;
  double source_norm = 0.0;
  double target_norm = 0.0;
  std::optional<double> ratio;  // empty for 0/0
  double std_error = 0.0;
};

struct ProbeClouds {
  const SampleCloud* source;  // carries (1-|w|^2)^s or any exponent, adjusted
  const SampleCloud* inner;   // integration cloud for the operator, adjusted to b2
  const SampleCloud* target;  // evaluation cloud for the target norm, adjusted to r
};

// Monte Carlo ladder: rows (param, |f|_{p,s}, |S f|_{q,r}, ratio).
inline std::vector<RatioRow> ratio_probe(const OperatorParams& op, const std::vector<std::pair<double, TestFunction>>& ladder,
                                         const ProbeClouds& clouds, KernelKind kind = KernelKind::Holomorphic) {
  op.validate();
  std::vector<RatioRow> rows;
  for (const auto& [param, f] : ladder) {
    RatioRow row;
    row.param = param;
    const Estimate src = lp_norm(f, op.p, op.s, *clouds.source);
    std::vector<Complex> image(clouds.target->size());
    for (std::size_t j = 0; j < image.size(); ++j)
      image[j] = apply_operator(kind, f, clouds.target->points[j], op, *clouds.inner).value;
    const Estimate dst = lp_norm_values(image, op.q, op.r, *clouds.target);
    row.source_norm = src.real();
    row.target_norm = dst.real();
    if (row.source_norm > 0.0) {
      row.ratio = row.target_norm / row.source_norm;
      const double rel = std::hypot(src.std_error / row.source_norm,
                                    row.target_norm > 0 ? dst.std_error / row.target_norm : 0.0);
      row.std_error = *row.ratio * rel;
    }
    rows.push_back(row);
  }
  return rows;
}

// m_n/2 sum_k W_k E_a[g(rho sqrt(x_k) a)]: int_M g(z.conj(xi)) (1-|z|^2)^s dm for |xi| = rho,
// with Gauss-Jacobi radial nodes and the orbit law for the angle.
template <class G>
double orbit_volume_integral(const Config& cfg, double rho, double s, G&& g, int radial_nodes) {
  const OrbitLaw law(cfg.n);
  const QuadratureRule rule = gauss_jacobi01(radial_nodes, s, cfg.n - 2.0);
  double total = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double scale = rho * std::sqrt(rule.nodes[k]);
    total += rule.weights[k] * law.expect([&](Complex a) { return g(scale * a); }, scale);
  }
  return 0.5 * cfg.m_n * total;
}

// |f_xi|_{p,s} by deterministic quadrature
inline double xi_source_norm(const OperatorParams& op, const Config& cfg, double rho, int radial_nodes) {
  const double m = op.n + 1.0 + op.b2, kappa = op.n + 1.0 + 2.0 * op.b2;
  const double pre = std::pow(1.0 - rho * rho, m);
  const double I = orbit_volume_integral(
      cfg, rho, op.s,
      [&](Complex y) { return std::pow(pre * std::abs(op.n - 1.0 + kappa * y) * std::pow(std::abs(1.0 - y), -m), op.p); },
      radial_nodes);
  return std::pow(I, 1.0 / op.p);
}

// |S f_xi|_{q,r} from the closed form of S f_xi and the orbit series
inline double xi_target_norm(const OperatorParams& op, const Config& cfg, double rho) {
  const double m = op.n + 1.0 + op.b2;
  const double J = cfg.m_n * orbit_series(op.n, rho, op.q * op.c, 0, op.q * op.b1 + op.r);
  return std::pow(1.0 - rho * rho, m) / exact_C_M(cfg, op.b2) * std::pow(J, 1.0 / op.q);
}

// Ratio |S f_xi|_{q,r} / |f_xi|_{p,s} along |xi| = radii.
inline std::vector<RatioRow> xi_growth_probe(const OperatorParams& op, const Config& cfg, const std::vector<double>& radii,
                                             int radial_nodes = 64) {
  op.validate();
  std::vector<RatioRow> rows;
  for (double rho : radii) {
    if (!(rho > 0.0 && rho < 1.0)) throw DomainError("xi radius must lie in (0,1)");
    RatioRow row;
    row.param = rho;
    row.source_norm = xi_source_norm(op, cfg, rho, radial_nodes);
    row.target_norm = xi_target_norm(op, cfg, rho);
    row.ratio = row.target_norm / row.source_norm;
    rows.push_back(row);
  }
  return rows;
}

} // namespace minball

#endif // MINBALL_OPERATORS_HPP

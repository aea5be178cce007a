#ifndef MINBALL_TRANSFER_HPP
#define MINBALL_TRANSFER_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "kernels.hpp"
#include "operators.hpp"
#include "sampling.hpp"

namespace minball {

// (I f)(z) = z_{n+1} f(z_1..z_n) / (2(n+1))^{1/p}
struct LiftedFunction {
  CFunction base;
  double p = 2.0;
  int n = 2;

  Complex operator()(const CPoint& z) const {
    if (z.dim() != n + 1) throw DimensionMismatch("lifted function expects points of C^{n+1}");
    const CPoint w(Eigen::VectorXcd(z.coords().head(n)));
    return z[n] * base(w) / std::pow(2.0 * (n + 1.0), 1.0 / p);
  }
};

inline LiftedFunction lift(CFunction f, double p, int n) {
  if (!(p >= 1.0)) throw DomainError("need p >= 1");
  if (n < 2) throw DomainError("n must be at least 2");
  return {std::move(f), p, n};
}

struct IsometryReport {
  double p = 2.0, lambda = 0.0;
  Estimate norm_M, norm_ball;
  double rel_error = 0.0;
  // combined standard error relative to the ball norm
  double rel_sigma = 0.0;
  bool pass = false;
};

// Compares |I f|_{L^p_lambda(M)} with |f|_{L^p_lambda(B*)} on independent clouds.
inline IsometryReport verify_isometry(const LiftedFunction& f, double p, double lambda, const SampleCloud& cloud_M,
                                      const SampleCloud& cloud_ball) {
  if (f.p != p) throw DomainError("lifted function was built for a different p");
  if (cloud_M.domain != Domain::M || cloud_ball.domain != Domain::BallStar)
    throw DomainError("isometry needs one cloud on M and one on B*");
  IsometryReport rep;
  rep.p = p;
  rep.lambda = lambda;
  rep.norm_M = lp_norm(f, p, lambda, cloud_M);
  rep.norm_ball = lp_norm(f.base, p, lambda, cloud_ball);
  const double b = rep.norm_ball.real();
  if (!(b > 0.0)) throw NumericError("zero-norm function");
  rep.rel_error = std::abs(rep.norm_M.real() - b) / b;
  rep.rel_sigma = std::hypot(rep.norm_M.std_error, rep.norm_ball.std_error) / b;
  rep.pass = rep.rel_error < 3.0 * rep.rel_sigma;
  return rep;
}

struct IntertwineRow {
  CPoint z;
  Estimate lhs, rhs;
};

struct IntertwineReport {
  std::vector<IntertwineRow> rows;
  // max |lhs - rhs| / max |rhs|
  double max_rel_error = 0.0;
  // max |lhs - rhs| / combined standard error
  double max_sigma = 0.0;
  bool pass = false;
};

// P_{lambda,M}(I f)(z) against I(P_{lambda,B*} f)(z) at cone points z.
inline IntertwineReport verify_intertwine(const CFunction& f, double lambda, const std::vector<CPoint>& eval_points,
                                          const SampleCloud& cloud_M, const SampleCloud& cloud_ball,
                                          const KernelParams& kp_M, const KernelParams& kp_ball, double p = 2.0) {
  const int n = kp_M.n;
  const LiftedFunction If = lift(f, p, n);
  IntertwineReport rep;
  double scale = 0.0, worst = 0.0;
  for (const auto& z : eval_points) {
    ManifoldPoint::make(z);
    IntertwineRow row{z, project_M(If, z, lambda, cloud_M, kp_M), {}};
    const CPoint w = project_to_ball(z);
    Estimate pb = project_ball(f, w, lambda, cloud_ball, kp_ball);
    const Complex k = z[n] / std::pow(2.0 * (n + 1.0), 1.0 / p);
    row.rhs = {k * pb.value, std::abs(k) * pb.std_error};
    const double diff = std::abs(row.lhs.value - row.rhs.value);
    const double se = std::hypot(row.lhs.std_error, row.rhs.std_error);
    scale = std::max(scale, std::abs(row.rhs.value));
    worst = std::max(worst, diff);
    rep.max_sigma = std::max(rep.max_sigma, se > 0 ? diff / se : (diff > 0 ? INFINITY : 0.0));
    rep.rows.push_back(row);
  }
  rep.max_rel_error = scale > 0 ? worst / scale : worst;
  rep.pass = rep.max_sigma < 3.0;
  return rep;
}

} // namespace minball

#endif // MINBALL_TRANSFER_HPP

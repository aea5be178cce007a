#ifndef MINBALL_QUADRATURE_HPP
#define MINBALL_QUADRATURE_HPP

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "errors.hpp"
#include "special.hpp"

namespace minball {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  template <class F>
  auto apply(F&& f) const {
    decltype(f(nodes[0]) * weights[0]) acc{};
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
    return acc;
  }
};

// Golub-Welsch rule on [0,1] for the weight x^b (1-x)^a, exact for polynomials of degree < 2*count.
inline QuadratureRule gauss_jacobi01(int count, double a, double b) {
  if (count < 1) throw DomainError("quadrature needs at least one node");
  if (!(a > -1.0 && b > -1.0)) throw DomainError("Jacobi exponents must exceed -1");
  // Jacobi on [-1,1] with weight (1-y)^a (1+y)^b, y = 2x - 1
  const double ab = a + b;
  Eigen::VectorXd diag(count), sub(std::max(count - 1, 0));
  for (int k = 0; k < count; ++k) {
    const double s = 2.0 * k + ab;
    diag[k] = (k == 0) ? (b - a) / (ab + 2.0) : (b * b - a * a) / (s * (s + 2.0));
  }
  for (int k = 1; k < count; ++k) {
    const double s = 2.0 * k + ab;
    double b2;
    if (k == 1)
      b2 = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    else
      b2 = 4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    sub[k - 1] = std::sqrt(b2);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (eig.info() != Eigen::Success) throw ConvergenceError("Golub-Welsch eigensolver failed");
  // total mass of x^b (1-x)^a on [0,1]
  const double mu0 = beta_fn(a + 1.0, b + 1.0);
  QuadratureRule rule;
  rule.nodes.resize(count);
  rule.weights.resize(count);
  for (int i = 0; i < count; ++i) {
    rule.nodes[i] = 0.5 * (eig.eigenvalues()[i] + 1.0);
    const double v0 = eig.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

inline QuadratureRule gauss_legendre(int count, double lo, double hi) {
  QuadratureRule r = gauss_jacobi01(count, 0.0, 0.0);
  for (auto& x : r.nodes) x = lo + (hi - lo) * x;
  for (auto& w : r.weights) w *= (hi - lo);
  return r;
}

} // namespace minball

#endif // MINBALL_QUADRATURE_HPP

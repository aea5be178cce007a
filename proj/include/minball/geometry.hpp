#ifndef MINBALL_GEOMETRY_HPP
#define MINBALL_GEOMETRY_HPP

#include <cmath>
#include <complex>
#include <initializer_list>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "errors.hpp"

namespace minball {

using Complex = std::complex<double>;

inline constexpr double kFrameTolerance = 1e-12;
inline constexpr double kConeTolerance = 1e-12;

class CPoint {
 public:
  CPoint() = default;
  explicit CPoint(Eigen::VectorXcd coords) : coords_(std::move(coords)) {}
  CPoint(std::initializer_list<Complex> coords) : coords_(static_cast<Eigen::Index>(coords.size())) {
    Eigen::Index i = 0;
    for (const auto& c : coords) coords_[i++] = c;
  }

  static CPoint zero(int dim) { return CPoint(Eigen::VectorXcd::Zero(dim)); }

  int dim() const { return static_cast<int>(coords_.size()); }
  const Eigen::VectorXcd& coords() const { return coords_; }
  Complex operator[](int j) const { return coords_[j]; }
  Complex& operator[](int j) { return coords_[j]; }

  double norm2() const { return coords_.squaredNorm(); }
  double norm() const { return coords_.norm(); }

  bool finite() const { return coords_.allFinite(); }

  std::string str() const {
    std::ostringstream os;
    os.precision(17);
    os << "(";
    for (int j = 0; j < dim(); ++j) os << (j ? ", " : "") << coords_[j];
    os << ")";
    return os.str();
  }

  friend CPoint operator+(const CPoint& a, const CPoint& b) { return CPoint(a.coords_ + b.coords_); }
  friend CPoint operator-(const CPoint& a, const CPoint& b) { return CPoint(a.coords_ - b.coords_); }
  friend CPoint operator*(Complex k, const CPoint& a) { return CPoint(k * a.coords_); }
  friend CPoint operator*(double k, const CPoint& a) { return CPoint(k * a.coords_); }

 private:
  Eigen::VectorXcd coords_;
};

inline void require_same_dim(const CPoint& z, const CPoint& w) {
  if (z.dim() != w.dim())
    throw DimensionMismatch("dimension mismatch: " + std::to_string(z.dim()) + " vs " + std::to_string(w.dim()));
}

// z.w = sum z_j w_j
inline Complex bilinear(const CPoint& z, const CPoint& w) {
  require_same_dim(z, w);
  return (z.coords().array() * w.coords().array()).sum();
}

// z.conj(w)
inline Complex hermitian(const CPoint& z, const CPoint& w) {
  require_same_dim(z, w);
  return (z.coords().array() * w.coords().array().conjugate()).sum();
}

// N*(z)^2 = |z|^2 + |z.z|
inline double minimal_norm2(const CPoint& z) { return z.norm2() + std::abs(bilinear(z, z)); }

inline double minimal_norm(const CPoint& z) { return std::sqrt(minimal_norm2(z)); }

inline CPoint conj(const CPoint& z) { return CPoint(z.coords().conjugate()); }

class BoundaryFrame {
 public:
  static BoundaryFrame make(Eigen::VectorXd x, Eigen::VectorXd y) {
    if (x.size() != y.size()) throw DimensionMismatch("frame vectors differ in length");
    if (x.size() < 3) throw DomainError("frame needs at least 3 real coordinates");
    const double err = std::max({std::abs(x.squaredNorm() - 1.0), std::abs(y.squaredNorm() - 1.0), std::abs(x.dot(y))});
    if (!(err <= kFrameTolerance))
      throw DomainError("frame is not orthonormal (defect " + std::to_string(err) + ")");
    return BoundaryFrame(std::move(x), std::move(y));
  }

  const Eigen::VectorXd& x() const { return x_; }
  const Eigen::VectorXd& y() const { return y_; }
  int n() const { return static_cast<int>(x_.size()) - 1; }

  // (x + iy)/sqrt(2): unit vector with xi.xi = 0
  CPoint point() const {
    Eigen::VectorXcd v(x_.size());
    for (Eigen::Index j = 0; j < x_.size(); ++j) v[j] = Complex(x_[j], y_[j]) / std::sqrt(2.0);
    return CPoint(std::move(v));
  }

 private:
  BoundaryFrame(Eigen::VectorXd x, Eigen::VectorXd y) : x_(std::move(x)), y_(std::move(y)) {}
  Eigen::VectorXd x_, y_;
};

// A point of the cone {z.z = 0} with |z| <= 1.
class ManifoldPoint {
 public:
  static ManifoldPoint make(const CPoint& z) {
    if (z.dim() < 3) throw DomainError("cone points live in C^{n+1} with n >= 2");
    const double r2 = z.norm2();
    if (!(r2 <= 1.0 + 1e-15)) throw DomainError("point has |z| > 1: " + z.str());
    if (r2 > 0 && !(std::abs(bilinear(z, z)) <= kConeTolerance * r2))
      throw DomainError("point is not on the cone: " + z.str());
    return ManifoldPoint(z);
  }

  const CPoint& z() const { return z_; }
  double radius() const { return z_.norm(); }
  int n() const { return z_.dim() - 1; }

 private:
  explicit ManifoldPoint(CPoint z) : z_(std::move(z)) {}
  CPoint z_;
};

inline ManifoldPoint frame_to_point(const BoundaryFrame& f, double t) {
  if (!(t > 0.0 && t <= 1.0)) throw DomainError("radius must lie in (0, 1]");
  return ManifoldPoint::make(t * f.point());
}

// drops the last coordinate
inline CPoint project_to_ball(const ManifoldPoint& p) {
  const auto& c = p.z().coords();
  return CPoint(Eigen::VectorXcd(c.head(c.size() - 1)));
}

inline CPoint project_to_ball(const CPoint& z) { return project_to_ball(ManifoldPoint::make(z)); }

// one of the two lifts of a ball point to the cone, with last coordinate i*sqrt(z.z)
inline CPoint lift_to_cone(const CPoint& z) {
  Eigen::VectorXcd c(z.dim() + 1);
  c.head(z.dim()) = z.coords();
  c[z.dim()] = Complex(0, 1) * std::sqrt(bilinear(z, z));
  return CPoint(std::move(c));
}

} // namespace minball

#endif // MINBALL_GEOMETRY_HPP

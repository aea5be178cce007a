#ifndef MINBALL_SAMPLING_HPP
#define MINBALL_SAMPLING_HPP

#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "rng.hpp"
#include "special.hpp"

namespace minball {

// Dimension n and the normalizing constant m_n of dm = m_n t^{2n-3} dt dmu.
struct Config {
  int n = 2;
  double m_n = 1.0;

  // m_n = 4n(n+1)^2 makes the projection onto the ball measure preserving
  // when the ball volume is normalized to 1.
  static Config standard(int n) {
    if (n < 2) throw DomainError("n must be at least 2");
    return {n, 4.0 * n * (n + 1.0) * (n + 1.0)};
  }
  static Config with_mn(int n, double m_n) {
    if (n < 2) throw DomainError("n must be at least 2");
    if (!(m_n > 0)) throw DomainError("m_n must be positive");
    return {n, m_n};
  }
};

// int_M (1-|z|^2)^s dm
inline double weighted_mass_M(const Config& cfg, double s) {
  if (!(s > -1.0)) throw DomainError("weight exponent must exceed -1");
  return 0.5 * cfg.m_n * beta_fn(cfg.n - 1.0, s + 1.0);
}

// v_s(B*) = int (1 - N*^2)^s dv with v(B*) = 1
inline double weighted_mass_ball(int n, double s) {
  if (!(s > -1.0)) throw DomainError("weight exponent must exceed -1");
  return n * beta_fn(n, s + 1.0);
}

enum class Domain { M, BallStar };

inline const char* domain_name(Domain d) { return d == Domain::M ? "M" : "B*"; }

// Weighted point set standing in for (1-|z|^2)^weight_exponent dm on M, or
// (1 - N*^2)^weight_exponent dv on B*. Weights sum to total_mass.
struct SampleCloud {
  Domain domain = Domain::M;
  int n = 2;
  double weight_exponent = 0.0;
  std::vector<CPoint> points;
  std::vector<double> weights;
  double total_mass = 0.0;
  double mass_std_error = 0.0;
  // accepted / proposed, for rejection-sampled clouds
  double acceptance_ratio = 1.0;

  std::size_t size() const { return points.size(); }
};

struct Estimate {
  Complex value{};
  double std_error = 0.0;
  double real() const { return value.real(); }
};

// Haar-distributed orthonormal pair in R^{n+1}: Gram-Schmidt of two Gaussian
// columns, which is QR with a positive diagonal.
inline BoundaryFrame sample_haar_frame(int n, Engine& eng) {
  std::normal_distribution<double> gauss;
  const int N = n + 1;
  for (;;) {
    Eigen::VectorXd x(N), y(N);
    for (int j = 0; j < N; ++j) x[j] = gauss(eng);
    for (int j = 0; j < N; ++j) y[j] = gauss(eng);
    const double nx = x.norm();
    if (nx < 1e-8) continue;
    x /= nx;
    y -= x.dot(y) * x;
    y -= x.dot(y) * x;
    const double ny = y.norm();
    if (ny < 1e-8) continue;
    y /= ny;
    return BoundaryFrame::make(std::move(x), std::move(y));
  }
}

inline double sample_beta(double a, double b, Engine& eng) {
  std::gamma_distribution<double> ga(a, 1.0), gb(b, 1.0);
  const double u = ga(eng), v = gb(eng);
  return u / (u + v);
}

namespace detail {

template <class Fill>
void fill_blocks(std::size_t count, unsigned workers, const RngState& rng, std::vector<CPoint>& out, Fill&& fill) {
  out.assign(count, CPoint());
  const std::size_t blocks = (count + kBlockSize - 1) / kBlockSize;
  for_each_block(blocks, workers, [&](std::size_t b) {
    Engine eng = rng.engine(b);
    const std::size_t lo = b * kBlockSize, hi = std::min(count, lo + kBlockSize);
    for (std::size_t i = lo; i < hi; ++i) out[i] = fill(eng);
  });
}

} // namespace detail

// Points of M with law proportional to (1-|z|^2)^s dm, equal weights.
inline SampleCloud sample_M(const Config& cfg, const RngState& rng, double s, std::size_t count, unsigned workers = 1) {
  if (count == 0) throw DomainError("sample count must be positive");
  const double mass = weighted_mass_M(cfg, s);
  SampleCloud cloud;
  cloud.domain = Domain::M;
  cloud.n = cfg.n;
  cloud.weight_exponent = s;
  const int n = cfg.n;
  detail::fill_blocks(count, workers, rng, cloud.points, [&](Engine& eng) {
    const BoundaryFrame f = sample_haar_frame(n, eng);
    const double t = std::sqrt(sample_beta(n - 1.0, s + 1.0, eng));
    return t * f.point();
  });
  cloud.weights.assign(count, mass / static_cast<double>(count));
  cloud.total_mass = mass;
  return cloud;
}

// Uniform points of B* (normalized volume), by rejection from the Euclidean ball.
inline SampleCloud sample_ball_star(const Config& cfg, const RngState& rng, std::size_t count, unsigned workers = 1) {
  if (count == 0) throw DomainError("sample count must be positive");
  SampleCloud cloud;
  cloud.domain = Domain::BallStar;
  cloud.n = cfg.n;
  const int n = cfg.n;
  std::atomic<std::size_t> proposals{0};
  detail::fill_blocks(count, workers, rng, cloud.points, [&](Engine& eng) {
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif;
    for (;;) {
      Eigen::VectorXcd v(n);
      for (int j = 0; j < n; ++j) {
        const double re = gauss(eng);
        v[j] = Complex(re, gauss(eng));
      }
      const double radius = std::pow(unif(eng), 1.0 / (2.0 * n));
      CPoint z(v * (radius / v.norm()));
      proposals.fetch_add(1, std::memory_order_relaxed);
      if (minimal_norm2(z) < 1.0) return z;
    }
  });
  cloud.weights.assign(count, 1.0 / static_cast<double>(count));
  cloud.total_mass = 1.0;
  cloud.acceptance_ratio = static_cast<double>(count) / static_cast<double>(proposals.load());
  return cloud;
}

// Same points carrying the weight (1 - N*^2)^s; the mass becomes a Monte Carlo estimate.
inline SampleCloud reweight_ball(const SampleCloud& uniform, double s) {
  if (uniform.domain != Domain::BallStar || uniform.weight_exponent != 0.0)
    throw DomainError("reweighting expects a uniform ball cloud");
  if (!(s > -1.0)) throw DomainError("weight exponent must exceed -1");
  SampleCloud c = uniform;
  c.weight_exponent = s;
  const double N = static_cast<double>(c.size());
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double w = std::pow(1.0 - minimal_norm2(c.points[i]), s);
    c.weights[i] = w / N;
    sum += w;
    sum2 += w * w;
  }
  c.total_mass = sum / N;
  const double var = std::max(0.0, sum2 / N - c.total_mass * c.total_mass);
  c.mass_std_error = std::sqrt(var / (N - 1.0));
  return c;
}

inline double cloud_density_factor(const SampleCloud& cloud, const CPoint& z, double target_exponent) {
  if (target_exponent == cloud.weight_exponent) return 1.0;
  const double rho2 = cloud.domain == Domain::M ? z.norm2() : minimal_norm2(z);
  return std::pow(1.0 - rho2, target_exponent - cloud.weight_exponent);
}

inline void check_finite(Complex v, const CPoint& z) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw NumericError("integrand is not finite at " + z.str());
}

// Accumulates samples y_i with sum N w_i f_i / N as the estimate.
class MeanAccumulator {
 public:
  // Welford update
  void add(Complex y) {
    ++count_;
    const Complex delta = y - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += std::real(std::conj(delta) * (y - mean_));
  }
  Estimate result() const {
    const double N = static_cast<double>(count_);
    return {mean_, count_ > 1 ? std::sqrt(std::max(0.0, m2_) / ((N - 1.0) * N)) : 0.0};
  }

 private:
  std::size_t count_ = 0;
  Complex mean_{};
  double m2_ = 0.0;
};

using CFunction = std::function<Complex(const CPoint&)>;

// sum_i w_i f(z_i) with its standard error (complex modulus of the error).
template <class F>
Estimate mc_integrate(F&& f, const SampleCloud& cloud) {
  if (cloud.size() == 0) throw DomainError("empty sample cloud");
  const double N = static_cast<double>(cloud.size());
  MeanAccumulator acc;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Complex v = Complex(f(cloud.points[i]));
    check_finite(v, cloud.points[i]);
    acc.add(N * cloud.weights[i] * v);
  }
  return acc.result();
}

// int_M f (1-|z|^2)^s dm with Gauss-Jacobi in x = t^2 (weight x^{n-2}(1-x)^s)
// and Monte Carlo over Haar frames shared by all radial nodes.
template <class F>
Estimate radial_angular_integrate(const Config& cfg, F&& f, double s, int radial_nodes, std::size_t angular_count,
                                  const RngState& rng, unsigned workers = 1) {
  if (radial_nodes < 1) throw DomainError("radial node count must be positive");
  if (angular_count < 2) throw DomainError("angular sample count must be at least 2");
  if (!(s > -1.0)) throw DomainError("weight exponent must exceed -1");
  const QuadratureRule rule = gauss_jacobi01(radial_nodes, s, cfg.n - 2.0);
  std::vector<Complex> per_frame(angular_count);
  const std::size_t blocks = (angular_count + kBlockSize - 1) / kBlockSize;
  for_each_block(blocks, workers, [&](std::size_t b) {
    Engine eng = rng.engine(b);
    const std::size_t lo = b * kBlockSize, hi = std::min(angular_count, lo + kBlockSize);
    for (std::size_t i = lo; i < hi; ++i) {
      const CPoint xi = sample_haar_frame(cfg.n, eng).point();
      Complex acc{};
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const CPoint z = std::sqrt(rule.nodes[k]) * xi;
        const Complex v = Complex(f(z));
        check_finite(v, z);
        acc += rule.weights[k] * v;
      }
      per_frame[i] = 0.5 * cfg.m_n * acc;
    }
  });
  MeanAccumulator acc;
  for (const auto& v : per_frame) acc.add(v);
  return acc.result();
}

inline void export_csv(const SampleCloud& cloud, std::ostream& os) {
  const int dim = cloud.size() ? cloud.points[0].dim() : 0;
  for (int j = 1; j <= dim; ++j) os << "re" << j << ",im" << j << ",";
  os << "weight\n";
  os << std::setprecision(17);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (int j = 0; j < dim; ++j) os << cloud.points[i][j].real() << ',' << cloud.points[i][j].imag() << ',';
    os << cloud.weights[i] << '\n';
  }
}

inline SampleCloud import_csv(std::istream& is, Domain domain, int n, double weight_exponent) {
  SampleCloud cloud;
  cloud.domain = domain;
  cloud.n = n;
  cloud.weight_exponent = weight_exponent;
  const int dim = domain == Domain::M ? n + 1 : n;
  std::string line;
  if (!std::getline(is, line)) throw DomainError("empty CSV");
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
    if (static_cast<int>(vals.size()) != 2 * dim + 1)
      throw DimensionMismatch("CSV row " + std::to_string(row) + " has " + std::to_string(vals.size()) + " fields");
    Eigen::VectorXcd v(dim);
    for (int j = 0; j < dim; ++j) v[j] = Complex(vals[2 * j], vals[2 * j + 1]);
    cloud.points.emplace_back(std::move(v));
    cloud.weights.push_back(vals.back());
    cloud.total_mass += vals.back();
  }
  return cloud;
}

} // namespace minball

#endif // MINBALL_SAMPLING_HPP

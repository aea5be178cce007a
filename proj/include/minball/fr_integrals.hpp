#ifndef MINBALL_FR_INTEGRALS_HPP
#define MINBALL_FR_INTEGRALS_HPP

#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "orbit.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "sampling.hpp"

namespace minball {

// Hermitian: |z.conj(xi)|^{2d}. Bilinear: |z.xi|^{2d}, which vanishes at the
// singular point xi = z/|z| when z lies on the cone.
enum class MomentPairing { Hermitian, Bilinear };

inline std::vector<double> default_fr_radii() { return {0.99, 0.999, 0.9999}; }

struct FRQuery {
  double c = 0.0;
  double s = 0.0;
  int d = 0;
  std::vector<double> radii = default_fr_radii();
  MomentPairing pairing = MomentPairing::Hermitian;

  void validate() const {
    if (!(s > -1.0)) throw DomainError("s must exceed -1");
    if (d < 0) throw DomainError("d must be non-negative");
    for (std::size_t i = 0; i < radii.size(); ++i) {
      if (!(radii[i] > 0.0 && radii[i] < 1.0)) throw DomainError("probe radii must lie in (0,1)");
      if (i && !(radii[i] > radii[i - 1])) throw DomainError("probe radii must increase strictly");
    }
  }
};

// t (e1 + i e2)/sqrt(2) in C^{n+1}
inline CPoint probe_point(int n, double t) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n + 1), y = Eigen::VectorXd::Zero(n + 1);
  x[0] = 1.0;
  y[1] = 1.0;
  if (t == 0.0) return CPoint::zero(n + 1);
  return frame_to_point(BoundaryFrame::make(x, y), t).z();
}

inline double fr_moment(const CPoint& z, const CPoint& w, const FRQuery& q) {
  if (q.d == 0) return 1.0;
  const Complex m = q.pairing == MomentPairing::Hermitian ? hermitian(z, w) : bilinear(z, w);
  return std::pow(std::abs(m), 2.0 * q.d);
}

// int_{dM} |z.xi|^{2d} |1 - z.conj(xi)|^{-(n+c)} dmu(xi), Monte Carlo over Haar frames
inline Estimate estimate_I(const Config& cfg, const CPoint& z, const FRQuery& q, const RngState& rng,
                           std::size_t count, unsigned workers = 1) {
  q.validate();
  if (z.dim() != cfg.n + 1) throw DimensionMismatch("probe point must lie in C^{n+1}");
  if (!(z.norm2() < 1.0)) throw DomainError("estimate_I needs |z| < 1");
  if (count < 2) throw DomainError("sample count must be at least 2");
  const double gamma = cfg.n + q.c;
  std::vector<double> vals(count);
  const std::size_t blocks = (count + kBlockSize - 1) / kBlockSize;
  for_each_block(blocks, workers, [&](std::size_t b) {
    Engine eng = rng.engine(b);
    const std::size_t lo = b * kBlockSize, hi = std::min(count, lo + kBlockSize);
    for (std::size_t i = lo; i < hi; ++i) {
      const CPoint xi = sample_haar_frame(cfg.n, eng).point();
      vals[i] = fr_moment(z, xi, q) * std::pow(std::abs(1.0 - hermitian(z, xi)), -gamma);
      check_finite(vals[i], xi);
    }
  });
  MeanAccumulator acc;
  for (double v : vals) acc.add(v);
  return acc.result();
}

// int_M |z.w|^{2d} |1 - z.conj(w)|^{-(n+c+s+1)} (1-|w|^2)^s dm(w):
// Gauss-Jacobi in the radius, Monte Carlo over frames
inline Estimate estimate_J(const Config& cfg, const CPoint& z, const FRQuery& q, int radial_nodes,
                           std::size_t angular_count, const RngState& rng, unsigned workers = 1) {
  q.validate();
  if (z.dim() != cfg.n + 1) throw DimensionMismatch("probe point must lie in C^{n+1}");
  if (!(z.norm2() < 1.0)) throw DomainError("estimate_J needs |z| < 1");
  const double gamma = cfg.n + q.c + q.s + 1.0;
  auto f = [&](const CPoint& w) {
    return fr_moment(z, w, q) * std::pow(std::abs(1.0 - hermitian(z, w)), -gamma);
  };
  return radial_angular_integrate(cfg, f, q.s, radial_nodes, angular_count, rng, workers);
}

// Exact orbit-moment series for z on the cone with |z| = radius (Hermitian moment).
inline double series_I(const Config& cfg, double radius, const FRQuery& q) {
  q.validate();
  if (q.pairing != MomentPairing::Hermitian) throw DomainError("series estimator covers the Hermitian moment only");
  return orbit_series(cfg.n, radius, cfg.n + q.c, q.d, std::nullopt);
}

inline double series_J(const Config& cfg, double radius, const FRQuery& q) {
  q.validate();
  if (q.pairing != MomentPairing::Hermitian) throw DomainError("series estimator covers the Hermitian moment only");
  return cfg.m_n * orbit_series(cfg.n, radius, cfg.n + q.c + q.s + 1.0, q.d, q.s);
}

enum class Growth { Bounded, PowerGrowth, LogGrowth, Inconclusive };

inline std::string growth_name(Growth g) {
  switch (g) {
    case Growth::Bounded: return "Bounded";
    case Growth::PowerGrowth: return "PowerGrowth";
    case Growth::LogGrowth: return "LogGrowth";
    default: return "Inconclusive";
  }
}

struct ClassificationRow {
  double radius = 0.0;
  double value = 0.0;
  double std_error = 0.0;
  // value (1-r^2)^c for c > 0, value / log(1/(1-r^2)) for c = 0, value otherwise
  double compensated = 0.0;
};

struct Classification {
  Growth growth = Growth::Inconclusive;
  double exponent = 0.0;
  std::vector<ClassificationRow> rows;

  std::string label() const {
    if (growth == Growth::PowerGrowth) {
      std::ostringstream os;
      os << "PowerGrowth(" << exponent << ")";
      return os.str();
    }
    return growth_name(growth);
  }
};

inline constexpr double kStabilityThreshold = 0.25;

inline bool stable_pair(double prev, double last) {
  if (prev == 0.0) return last == 0.0;
  return std::abs(last / prev - 1.0) < kStabilityThreshold;
}

using RadialEstimator = std::function<Estimate(double radius)>;

// Candidates: Bounded (raw values) always; LogGrowth when c = 0; PowerGrowth(c)
// when c > 0. A candidate is stable when its sequence changes by less than 25%
// between the last two radii; a unique stable candidate is the answer.
inline Classification classify_asymptotics(const FRQuery& q, const RadialEstimator& estimator) {
  q.validate();
  if (q.radii.size() < 3) throw DomainError("classification needs at least 3 probe radii");
  Classification out;
  std::vector<double> raw, logc, powc;
  for (double r : q.radii) {
    const Estimate e = estimator(r);
    const double v = e.real();
    const double w = 1.0 - r * r;
    raw.push_back(v);
    logc.push_back(v / std::log(1.0 / w));
    powc.push_back(v * std::pow(w, q.c));
    ClassificationRow row{r, v, e.std_error, v};
    if (q.c > 0) row.compensated = powc.back();
    if (q.c == 0) row.compensated = logc.back();
    out.rows.push_back(row);
  }
  const std::size_t k = raw.size() - 1;
  std::vector<std::pair<Growth, double>> stable;
  if (stable_pair(raw[k - 1], raw[k])) stable.push_back({Growth::Bounded, 0.0});
  if (q.c == 0 && stable_pair(logc[k - 1], logc[k])) stable.push_back({Growth::LogGrowth, 0.0});
  if (q.c > 0 && stable_pair(powc[k - 1], powc[k])) stable.push_back({Growth::PowerGrowth, q.c});
  if (stable.size() == 1) {
    out.growth = stable[0].first;
    out.exponent = stable[0].second;
  }
  return out;
}

enum class FRIntegral { I, J };

inline RadialEstimator series_estimator(const Config& cfg, const FRQuery& q, FRIntegral which) {
  return [cfg, q, which](double r) {
    return Estimate{which == FRIntegral::I ? series_I(cfg, r, q) : series_J(cfg, r, q), 0.0};
  };
}

inline RadialEstimator mc_estimator(const Config& cfg, const FRQuery& q, FRIntegral which, const RngState& rng,
                                    std::size_t count, int radial_nodes, unsigned workers = 1) {
  return [=](double r) {
    const CPoint z = probe_point(cfg.n, r);
    return which == FRIntegral::I ? estimate_I(cfg, z, q, rng, count, workers)
                                  : estimate_J(cfg, z, q, radial_nodes, count, rng, workers);
  };
}

} // namespace minball

#endif // MINBALL_FR_INTEGRALS_HPP

#include <gtest/gtest.h>

#include <minball/kernels.hpp>
#include <minball/operators.hpp>
#include <minball/sampling.hpp>

using namespace minball;

namespace {

// [(2(n+s) - k X + k u)(X+u)^m - (2(n+s) - k X - k u)(X-u)^m] / (2u), u^2 = Y
Complex a_closed(Complex X, Complex Y, int n, double s) {
  const double m = n + s + 1.0, kappa = n + 1.0 + 2.0 * s, lead = 2.0 * (n + s);
  const Complex u = std::sqrt(Y);
  if (std::abs(u) < 1e-12) return m * std::pow(X, m - 1.0) * (lead - kappa * X) + kappa * std::pow(X, m);
  return ((lead - kappa * X + kappa * u) * std::pow(X + u, m) - (lead - kappa * X - kappa * u) * std::pow(X - u, m)) /
         (2.0 * u);
}

CPoint ball_point(Engine& eng, double radius) {
  std::normal_distribution<double> g;
  for (;;) {
    Eigen::VectorXcd v(2);
    v << Complex(g(eng), g(eng)), Complex(g(eng), g(eng));
    CPoint z(v * (radius / v.norm()));
    if (minimal_norm(z) < 0.8) return z;
  }
}

} // namespace

TEST(ASeries, PolynomialCasesMatchExpansions) {
  const std::vector<std::pair<Complex, Complex>> pts{{1.0, 0.0}, {0.7, 0.2}, {Complex(0.9, 0.1), Complex(0.1, -0.3)}};
  for (auto [X, Y] : pts) {
    const Complex c20 = 12.0 * X * X - 6.0 * X * X * X + 6.0 * X * Y + 4.0 * Y;
    const Complex c21 = -15.0 * std::pow(X, 4) + 24.0 * std::pow(X, 3) + 10.0 * X * X * Y + 24.0 * X * Y + 5.0 * Y * Y;
    const Complex p20 = 12.0 * X - 6.0 * X * X * X + 6.0 * X * Y + 4.0 * Y / X;
    EXPECT_NEAR(std::abs(a_series(X, Y, 2, 0.0).value - c20), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(a_series(X, Y, 2, 1.0).value - c21), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(a_series(X, Y, 2, 0.0, 1e-15, BracketForm::ConstantLead).value - p20), 0.0, 1e-13);
  }
  EXPECT_EQ(a_series(0.8, 0.1, 2, 0.0).terms, 2);
  EXPECT_EQ(a_series(0.8, 0.1, 3, 1.0).terms, 3);
}

TEST(ASeries, NonIntegerOrderMatchesClosedForm) {
  for (int n : {2, 3}) {
    for (double s : {0.5, -0.3, 1.7}) {
      for (auto [X, Y] : std::vector<std::pair<Complex, Complex>>{{0.9, 0.2}, {Complex(0.6, 0.2), Complex(0.05, 0.1)}}) {
        const Complex got = a_series(X, Y, n, s).value;
        EXPECT_NEAR(std::abs(got - a_closed(X, Y, n, s)) / std::abs(got), 0.0, 1e-12) << n << " " << s;
      }
    }
  }
}

TEST(ASeries, ValueAtOrigin) {
  for (int n : {2, 3, 4})
    for (double s : {0.0, 0.5, 2.0}) {
      EXPECT_NEAR(a_series(1.0, 0.0, n, s).value.real(), a_at_origin(n, s), 1e-12);
      EXPECT_NEAR(a_series(1.0, 0.0, n, s, 1e-15, BracketForm::ConstantLead).value.real(), a_at_origin(n, s), 1e-12);
    }
}

TEST(ASeries, SlowSeriesReportsNonConvergence) {
  EXPECT_THROW(a_series(1.0, 0.9999, 2, 0.5), ConvergenceError);
  EXPECT_THROW(a_series(0.0, 0.1, 2, 0.5), SingularityError);
}

TEST(Kernels, PrincipalPowerRejectsLeftHalfPlane) {
  EXPECT_THROW(principal_pow(Complex(-0.1, 0.2), 1.5), DomainError);
  EXPECT_NO_THROW(principal_pow(Complex(-0.1, 0.2), 1.5, false));
  EXPECT_NEAR(std::abs(principal_pow(Complex(4.0, 0.0), 0.5) - 2.0), 0.0, 1e-15);
}

TEST(Kernels, ManifoldKernelIsHermitianAndPositiveOnDiagonal) {
  const Config cfg = Config::standard(3);
  KernelParams kp;
  kp.n = 3;
  kp.s = 0.5;
  kp.C = exact_C_M(cfg, kp.s);
  Engine eng = RngState{3, 0}.engine();
  for (int i = 0; i < 20; ++i) {
    const CPoint z = 0.8 * sample_haar_frame(3, eng).point();
    const CPoint w = 0.7 * sample_haar_frame(3, eng).point();
    EXPECT_NEAR(std::abs(kernel_M(z, w, kp) - std::conj(kernel_M(w, z, kp))), 0.0, 1e-12);
    const Complex d = kernel_M(z, z, kp);
    EXPECT_GT(d.real(), 0.0);
    EXPECT_NEAR(d.imag(), 0.0, 1e-12);
  }
  const CPoint u = sample_haar_frame(3, eng).point();
  EXPECT_THROW(kernel_M(u, u, kp), SingularityError);
}

// The orbit quadrature integrates functions of z.conj(w) over M deterministically.
TEST(Kernels, ManifoldKernelReproducesMonomialsByQuadrature) {
  for (int n : {2, 3}) {
    const Config cfg = Config::standard(n);
    for (double s : {0.0, 1.0, 0.5}) {
      KernelParams kp;
      kp.n = n;
      kp.s = s;
      kp.C = exact_C_M(cfg, s);
      const double e = n + 1.0 + s, kappa = n + 1.0 + 2.0 * s;
      for (double rho : {0.3, 0.7}) {
        for (int k : {0, 1, 3}) {
          const double got = orbit_volume_integral(
              cfg, rho, s,
              [&](Complex y) {
                const Complex K = kp.C * (n - 1.0 + kappa * y) / std::pow(1.0 - y, e);
                return (K * std::pow(std::conj(y), k)).real();
              },
              64);
          EXPECT_NEAR(got, std::pow(rho, 2 * k), 1e-9) << n << " " << s << " " << rho << " " << k;
        }
      }
    }
  }
}

TEST(Kernels, CalibrationOnManifoldIsExact) {
  for (int n : {2, 3}) {
    const Config cfg = Config::standard(n);
    KernelParams kp;
    kp.n = n;
    kp.s = 1.0;
    kp = calibrate(kp, sample_M(cfg, {1, 0}, 1.0, 1000));
    EXPECT_NEAR(kp.C / exact_C_M(cfg, 1.0), 1.0, 1e-12);
    EXPECT_EQ(kp.norm_rel_error, 0.0);
  }
}

TEST(Kernels, BallKernelHermitianSymmetry) {
  KernelParams kp;
  kp.n = 2;
  kp.s = 0.5;
  kp.ball_norm = exact_ball_norm(2, 0.5);
  Engine eng = RngState{5, 0}.engine();
  for (int i = 0; i < 20; ++i) {
    const CPoint z = ball_point(eng, 0.7), w = ball_point(eng, 0.6);
    EXPECT_NEAR(std::abs(kernel_ball(z, w, kp) - std::conj(kernel_ball(w, z, kp))), 0.0, 1e-12);
    EXPECT_GT(kernel_ball(z, z, kp).real(), 0.0);
  }
}

TEST(Kernels, BallKernelIsHolomorphicInFirstArgument) {
  KernelParams kp;
  kp.n = 2;
  kp.s = 1.0;
  kp.ball_norm = exact_ball_norm(2, 1.0);
  Engine eng = RngState{6, 0}.engine();
  const double h = 1e-6;
  for (int i = 0; i < 10; ++i) {
    const CPoint z = ball_point(eng, 0.5), w = ball_point(eng, 0.5);
    for (int j = 0; j < 2; ++j) {
      Eigen::VectorXcd e = Eigen::VectorXcd::Zero(2);
      e[j] = h;
      const CPoint zr(z.coords() + e), zl(z.coords() - e);
      const CPoint zu(z.coords() + Complex(0, 1) * e), zd(z.coords() - Complex(0, 1) * e);
      const Complex dx = (kernel_ball(zr, w, kp) - kernel_ball(zl, w, kp)) / (2 * h);
      const Complex dy = (kernel_ball(zu, w, kp) - kernel_ball(zd, w, kp)) / (2 * h);
      // d/dzbar = (d/dx + i d/dy) / 2
      EXPECT_LT(std::abs(dx + Complex(0, 1) * dy), 1e-6 * std::max(1.0, std::abs(dx)));
    }
  }
}

TEST(Kernels, BallNormalizationReproducesConstants) {
  for (int n : {2, 3})
    for (double s : {0.0, 1.0, 2.5}) {
      KernelParams kp;
      kp.n = n;
      kp.s = s;
      kp.ball_norm = exact_ball_norm(n, s);
      const CPoint zero = CPoint::zero(n);
      // K(0, w) is constant, so P1(0) = K(0,0) * mass
      EXPECT_NEAR(kernel_ball(zero, zero, kp).real() * weighted_mass_ball(n, s), 1.0, 1e-12);
    }
  // the alternative normalization only agrees when s = 0
  EXPECT_NEAR(shifted_ball_norm(2, 0.0) / exact_ball_norm(2, 0.0), 1.0, 1e-14);
  EXPECT_GT(std::abs(shifted_ball_norm(2, 1.0) / exact_ball_norm(2, 1.0) - 1.0), 0.5);
}

namespace {

struct BallFixture {
  SampleCloud cloud;
  KernelParams kp;
};

BallFixture ball_fixture(int n, double s, std::size_t count) {
  BallFixture f;
  f.cloud = reweight_ball(sample_ball_star(Config::standard(n), {31, 1}, count), s);
  f.kp.n = n;
  f.kp.s = s;
  f.kp = calibrate(f.kp, f.cloud);
  return f;
}

double worst_sigma(const BallFixture& fx, const KernelParams& kp, const CFunction& f, const std::vector<CPoint>& pts) {
  double worst = 0.0;
  for (const auto& z : pts) {
    const Estimate e = project_ball(f, z, kp.s, fx.cloud, kp);
    worst = std::max(worst, std::abs(e.value - f(z)) / e.std_error);
  }
  return worst;
}

} // namespace

TEST(Kernels, BallKernelReproducesHolomorphicFunctions) {
  for (double s : {0.0, 1.0}) {
    const BallFixture fx = ball_fixture(2, s, 60000);
    EXPECT_NEAR(fx.kp.ball_norm / exact_ball_norm(2, s), 1.0, 5.0 * fx.kp.norm_rel_error + 1e-12);
    Engine eng = RngState{8, 0}.engine();
    std::vector<CPoint> pts;
    for (int i = 0; i < 5; ++i) pts.push_back(ball_point(eng, 0.4));
    for (const CFunction& f : std::vector<CFunction>{[](const CPoint& z) { return z[0]; },
                                                     [](const CPoint& z) { return z[0] * z[1]; },
                                                     [](const CPoint& z) { return z[1] * z[1]; }})
      EXPECT_LT(worst_sigma(fx, fx.kp, f, pts), 4.0) << "s=" << s;
  }
}

TEST(Kernels, AlternativeBallKernelsDoNotReproduce) {
  const BallFixture fx = ball_fixture(2, 0.0, 60000);
  Engine eng = RngState{8, 0}.engine();
  std::vector<CPoint> pts;
  for (int i = 0; i < 5; ++i) pts.push_back(ball_point(eng, 0.5));
  const CFunction f = [](const CPoint& z) { return z[0] * z[0]; };
  KernelParams constant_lead = fx.kp;
  constant_lead.bracket = BracketForm::ConstantLead;
  EXPECT_GT(worst_sigma(fx, constant_lead, f, pts), 8.0);
  KernelParams bilinear_den = fx.kp;
  bilinear_den.denominator = DenominatorForm::Bilinear;
  EXPECT_GT(worst_sigma(fx, bilinear_den, f, pts), 8.0);
}

TEST(Kernels, ManifoldReproducingByMonteCarlo) {
  const Config cfg = Config::standard(2);
  const SampleCloud cloud = sample_M(cfg, {41, 0}, 1.0, 50000);
  KernelParams kp;
  kp.n = 2;
  kp.s = 1.0;
  kp = calibrate(kp, cloud);
  Engine eng = RngState{9, 0}.engine();
  for (int i = 0; i < 5; ++i) {
    const CPoint z = 0.5 * sample_haar_frame(2, eng).point();
    for (const CFunction& f : std::vector<CFunction>{[](const CPoint& w) { return w[0] * w[1]; },
                                                     [](const CPoint& w) { return w[2]; }}) {
      const Estimate e = project_M(f, z, 1.0, cloud, kp);
      EXPECT_LT(std::abs(e.value - f(z)), 4.0 * e.std_error);
    }
  }
}

TEST(Kernels, ValidationErrors) {
  KernelParams kp;
  kp.n = 2;
  kp.s = -1.5;
  EXPECT_THROW(validate(kp), DomainError);
  kp.s = 0.0;
  const SampleCloud cloud = sample_M(Config::standard(2), {1, 0}, 1.0, 100);
  EXPECT_THROW(calibrate(kp, cloud), DomainError);
  EXPECT_THROW(kernel_M(CPoint::zero(3), CPoint::zero(4), kp), DimensionMismatch);
}

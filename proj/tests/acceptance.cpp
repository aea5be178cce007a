#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <minball/minball.hpp>

#include "operator_support.hpp"
#include "random_tuples.hpp"

using namespace minball;

namespace {

constexpr std::uint64_t kSeed = 42;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double v, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

// Integral of (1-|z|^2)^s dm with |z| = t drawn uniformly and weighted by the
// polar density m_n t^{2n-3}; the sampled cone point supplies |z|.
Outcome beta_identity() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  bool ok = true;
  for (int n : {2, 3}) {
    const Config cfg = Config::standard(n);
    for (double s : {0.0, 1.0, 2.5}) {
      const double expected = 0.5 * cfg.m_n * std::tgamma(n - 1.0) * std::tgamma(s + 1.0) / std::tgamma(n + s);
      Engine eng = RngState{kSeed, 1}.substream(static_cast<std::uint64_t>(10 * n + 2 * s)).engine();
      std::uniform_real_distribution<double> unif;
      MeanAccumulator acc;
      for (int i = 0; i < 100000; ++i) {
        const double t = unif(eng);
        const CPoint z = frame_to_point(sample_haar_frame(n, eng), std::max(t, 1e-300)).z();
        acc.add(cfg.m_n * std::pow(t, 2 * n - 3) * std::pow(1.0 - z.norm2(), s));
      }
      const double rel = std::abs(acc.result().real() / expected - 1.0);
      // same integral over the library's radial sampler
      const SampleCloud flat = sample_M(cfg, {kSeed, 2}, 0.0, 100000);
      const double rel2 = std::abs(
          mc_integrate([&](const CPoint& z) { return std::pow(1.0 - z.norm2(), s); }, flat).real() / expected - 1.0);
      worst = std::max({worst, rel, rel2});
      ok = ok && rel < 0.02 && rel2 < 0.02;
    }
  }
  const double secs = seconds_since(t0);
  return {ok && secs < 10.0, "max relative error " + num(worst) + " (< 0.02), " + num(secs, 3) + " s (< 10 s)"};
}

Outcome mu_invariance() {
  bool ok = true;
  double worst = 0.0;
  for (int n : {2, 3}) {
    Engine eng = RngState{kSeed, 3}.substream(n).engine();
    const CPoint z = 0.7 * sample_haar_frame(n, eng).point();
    MeanAccumulator m1, m2;
    for (int i = 0; i < 100000; ++i) {
      const Complex a = hermitian(z, sample_haar_frame(n, eng).point());
      m1.add(a);
      m2.add(a * a);
    }
    for (const Estimate& e : {m1.result(), m2.result()}) {
      const double sig = std::abs(e.value) / e.std_error;
      worst = std::max(worst, sig);
      ok = ok && sig < 3.0;
    }
  }
  return {ok, "max |mean|/stderr " + num(worst) + " (< 3), k = 1, 2, n = 2, 3"};
}

Outcome fr_classification() {
  const auto t0 = std::chrono::steady_clock::now();
  int cells = 0, wrong = 0;
  std::string first_wrong;
  for (int n : {2, 3}) {
    const Config cfg = Config::standard(n);
    for (double c : {-1.0, -0.5, 0.0, 0.5, 1.0, 2.0})
      for (double s : {0.0, 1.0})
        for (int d : {0, 1}) {
          ++cells;
          FRQuery q;
          q.c = c;
          q.s = s;
          q.d = d;
          const Growth expected = c < 0 ? Growth::Bounded : (c == 0 ? Growth::LogGrowth : Growth::PowerGrowth);
          for (auto which : {FRIntegral::I, FRIntegral::J}) {
            const Classification cl = classify_asymptotics(q, series_estimator(cfg, q, which));
            const bool right = cl.growth == expected && (expected != Growth::PowerGrowth || cl.exponent == c);
            if (!right) {
              ++wrong;
              if (first_wrong.empty())
                first_wrong = "; first: n=" + std::to_string(n) + " c=" + num(c) + " s=" + num(s) + " d=" +
                              std::to_string(d) + " -> " + cl.label();
            }
          }
        }
  }
  const double secs = seconds_since(t0);
  return {wrong == 0 && secs < 300.0, std::to_string(cells) + " cells, I and J, " + std::to_string(wrong) +
                                          " misclassified" + first_wrong + ", " + num(secs, 3) + " s (< 300 s)"};
}

CPoint random_cone_point(int n, double max_radius, Engine& eng) {
  std::uniform_real_distribution<double> unif;
  return (max_radius * std::sqrt(unif(eng))) * sample_haar_frame(n, eng).point();
}

Outcome reproducing() {
  const std::vector<CFunction> fs{[](const CPoint&) { return Complex(1.0); },
                                  [](const CPoint& z) { return z[0]; },
                                  [](const CPoint& z) { return z[0] * z[1]; },
                                  [](const CPoint& z) { return z[0] * z[0]; }};
  bool ok = true;
  double worst = 0.0;
  int checks = 0;
  std::uint64_t stream = 10;
  for (int n : {2, 3})
    for (bool ball : {false, true})
      for (double s : {0.0, 1.0}) {
        const Config cfg = Config::standard(n);
        const SampleCloud cloud = ball ? reweight_ball(sample_ball_star(cfg, {kSeed, stream}, 100000), s)
                                       : sample_M(cfg, {kSeed, stream}, s, 100000);
        KernelParams kp;
        kp.n = n;
        kp.s = s;
        kp = calibrate(kp, cloud);
        Engine eng = RngState{kSeed, stream + 1}.engine();
        stream += 2;
        for (int i = 0; i < 20; ++i) {
          const CPoint z = random_cone_point(n, 0.6, eng);
          const CPoint x = ball ? project_to_ball(z) : z;
          for (const auto& f : fs) {
            const Estimate e = ball ? project_ball(f, x, s, cloud, kp) : project_M(f, x, s, cloud, kp);
            const double sig = std::abs(e.value - f(x)) / e.std_error;
            worst = std::max(worst, sig);
            ok = ok && sig < 3.0;
            ++checks;
          }
        }
      }
  return {ok, std::to_string(checks) + " checks on M and B*, s = 0, 1, n = 2, 3; max |Pf - f|/stderr " + num(worst) +
                  " (< 3)"};
}

Outcome certificates() {
  std::mt19937_64 eng(kSeed);
  int disagreements = 0, feasible = 0, unsound = 0, oracle_checked = 0, oracle_mismatch = 0;
  for (int i = 0; i < 500; ++i) {
    const ConditionInput in = testing::random_boundary_tuple(eng);
    const bool expected = check_theorem_A(in);
    const CertificateResult res = synthesize_certificate(in);
    const auto* cert = std::get_if<Certificate>(&res);
    if ((cert != nullptr) != expected) ++disagreements;
    if (cert) {
      ++feasible;
      if (!schur_feasible(in, cert->t, cert->u, cert->v, cert->gamma)) ++unsound;
    }
    if (oracle_checked < 100) {
      ++oracle_checked;
      if (grid_oracle(in).feasible != expected) ++oracle_mismatch;
    }
  }
  return {disagreements == 0 && unsound == 0 && oracle_mismatch == 0,
          "500 tuples (" + std::to_string(feasible) + " bounded), " + std::to_string(disagreements) +
              " disagreements, " + std::to_string(unsound) + " unsound certificates; grid oracle " +
              std::to_string(oracle_checked - oracle_mismatch) + "/" + std::to_string(oracle_checked) + " confirmed"};
}

CFunction random_polynomial(int n, std::mt19937_64& eng) {
  std::uniform_int_distribution<int> idx(0, n);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const Complex a0(coef(eng), coef(eng)), a1(coef(eng), coef(eng)), a2(coef(eng), coef(eng)), a3(coef(eng), coef(eng));
  const int j = idx(eng), k = idx(eng), l = idx(eng), m = idx(eng);
  return [=](const CPoint& z) { return a0 + a1 * z[j] + a2 * z[k] * z[l] + a3 * std::norm(z[m]); };
}

Outcome adjoints() {
  OperatorParams op;
  op.n = 2;
  op.b1 = 0.5;
  op.b2 = 0.5;
  op.c = 1.0;
  const Config cfg = Config::standard(2);
  std::mt19937_64 eng(kSeed);
  double worst = 0.0;
  bool ok = true;
  for (int i = 0; i < 10; ++i) {
    const CFunction f = random_polynomial(2, eng), g = random_polynomial(2, eng);
    const auto cmp = testing::compare_pairings(KernelKind::Modulus, f, g, op, cfg, kSeed + 1 + i, 40, 100, 1000);
    worst = std::max(worst, cmp.sigma);
    ok = ok && cmp.sigma < 3.0;
  }
  // adjoint of (1-|w|^2)^N, divided by (1-|z|^2)^{b2-s}, is the constant mass of (1-|w|^2)^{b1+N+r}
  const double N = 1.0;
  const double constant = S_adjoint_power_constant(op, cfg, N);
  const SampleCloud target = sample_M(cfg, {kSeed, 40}, op.r, 100000);
  Engine pe = RngState{kSeed, 41}.engine();
  double worst_const = 0.0;
  for (int i = 0; i < 10; ++i) {
    const CPoint z = random_cone_point(2, 0.9, pe);
    const double scale = std::pow(1.0 - z.norm2(), op.b2 - op.s);
    const Estimate e = apply_S_adjoint(TestFunction::power(N, op), z, op, target);
    const double sig = std::abs(e.value / scale - constant) / (e.std_error / scale);
    worst_const = std::max(worst_const, sig);
    ok = ok && sig < 3.0;
  }
  return {ok, "10 pairs, max |<Tf,g> - <f,T*g>|/stderr " + num(worst) + "; constancy at 10 points, max deviation " +
                  num(worst_const) + " stderr (both < 3)"};
}

OperatorParams to_params(const ConditionInput& in) {
  return {in.n, to_double(in.b1), to_double(in.b2), to_double(in.c), to_double(in.s), to_double(in.r),
          to_double(in.p), to_double(in.q)};
}

Outcome growth_probe() {
  const std::vector<double> radii{0.5, 0.9, 0.99};
  std::mt19937_64 eng(kSeed);
  std::vector<double> sat_growth, vio_growth;
  int sat_ok = 0, vio_ok = 0, vio_large = 0, vio_monotone = 0;
  std::string first_bad;
  while (sat_growth.size() < 10) {
    const ConditionInput in = testing::random_boundary_tuple(eng);
    if (!check_theorem_A(in)) continue;
    OperatorParams op = to_params(in);
    const Config cfg = Config::standard(in.n);
    const auto s = xi_growth_probe(op, cfg, radii);
    const double s0 = *s[0].ratio, s1 = *s[1].ratio, s2 = *s[2].ratio;
    sat_growth.push_back(s2 / s0);
    sat_ok += std::abs(s2 / s1 - 1.0) < 0.5;
    ConditionInput bad = in;
    bad.c = in.c + Rational(1) / 2;
    op.c = to_double(bad.c);
    const auto v = xi_growth_probe(op, cfg, radii);
    const double v0 = *v[0].ratio, v1 = *v[1].ratio, v2 = *v[2].ratio;
    vio_growth.push_back(v2 / v0);
    const bool large = v2 / v0 > 2.0, monotone = v1 > v0 && v2 > v1;
    vio_large += large;
    vio_monotone += monotone;
    vio_ok += large && monotone;
    if (!(large && monotone) && first_bad.empty())
      first_bad = "; e.g. " + describe(bad) + " ratios " + num(v0) + ", " + num(v1) + ", " + num(v2);
  }
  const double max_sat = *std::max_element(sat_growth.begin(), sat_growth.end());
  const double min_vio = *std::min_element(vio_growth.begin(), vio_growth.end());
  const bool separated = max_sat < min_vio;
  return {sat_ok == 10 && vio_ok == 10 && separated,
          "satisfying within 50% over last two rungs: " + std::to_string(sat_ok) +
              "/10; violating strictly increasing: " + std::to_string(vio_monotone) + "/10, last/first > 2: " +
              std::to_string(vio_large) + "/10; max satisfying last/first " + num(max_sat) +
              " vs min violating " + num(min_vio) + first_bad};
}

Outcome transfer() {
  bool ok = true;
  double worst_iso = 0.0;
  const Config cfg = Config::standard(2);
  const CFunction f = [](const CPoint& w) { return w[0] * w[1] + 0.3; };
  const SampleCloud uniform = sample_ball_star(cfg, {kSeed, 50}, 100000);
  for (double lambda : {0.0, 1.0}) {
    const SampleCloud cm = sample_M(cfg, {kSeed, 51 + static_cast<std::uint64_t>(lambda)}, lambda, 100000);
    const SampleCloud cb = reweight_ball(uniform, lambda);
    for (double p : {1.0, 2.0, 3.0}) {
      const IsometryReport r = verify_isometry(lift(f, p, 2), p, lambda, cm, cb);
      worst_iso = std::max(worst_iso, r.rel_error / r.rel_sigma);
      ok = ok && r.pass;
    }
  }
  const CFunction g = [](const CPoint& w) { return std::norm(w[0]) * w[1]; };
  Engine eng = RngState{kSeed, 60}.engine();
  std::vector<CPoint> pts;
  for (int i = 0; i < 5; ++i) pts.push_back(0.5 * sample_haar_frame(2, eng).point());
  double worst_sigma = 0.0;
  std::string errs;
  for (double lambda : {0.0, 1.0}) {
    std::vector<double> max_err;
    for (std::size_t count : {25000u, 100000u}) {
      const std::uint64_t st = 70 + count / 1000 + static_cast<std::uint64_t>(10 * lambda);
      const SampleCloud cm = sample_M(cfg, {kSeed, st}, lambda, count);
      const SampleCloud cb = reweight_ball(sample_ball_star(cfg, {kSeed, st + 1}, count), lambda);
      KernelParams km, kb;
      km.n = kb.n = 2;
      km.s = kb.s = lambda;
      km = calibrate(km, cm);
      kb = calibrate(kb, cb);
      const IntertwineReport rep = verify_intertwine(g, lambda, pts, cm, cb, km, kb);
      double e = 0.0;
      for (const auto& row : rep.rows) e = std::max(e, std::abs(row.lhs.value - row.rhs.value));
      max_err.push_back(e);
      worst_sigma = std::max(worst_sigma, rep.max_sigma);
      ok = ok && rep.pass;
    }
    ok = ok && max_err[1] < max_err[0];
    errs += " " + num(max_err[0], 3) + " -> " + num(max_err[1], 3);
  }
  return {ok, "isometry max rel error/sigma " + num(worst_iso) + " (< 3); intertwining max sigma " + num(worst_sigma) +
                  " (< 3), max error at 25k -> 100k samples:" + errs};
}

Outcome reduction() {
  const std::vector<std::string> ps{"1", "5/4", "3/2", "2", "3"};
  const std::vector<std::string> dq{"0", "1/2", "1", "2"};
  const std::vector<std::string> lam{"-3/4", "-1/2", "-1/4", "0", "1/3", "1", "2", "7/2"};
  const std::vector<std::string> ss{"-1/2", "0", "1/2", "2"};
  int cells = 0, mismatches = 0;
  for (int n : {2, 3})
    for (const auto& p : ps)
      for (const auto& d : dq)
        for (const auto& l : lam)
          for (const auto& lt : lam)
            for (const auto& s : ss) {
              ProjectionInput in;
              in.n = n;
              in.p = parse_rational(p);
              in.q = in.p + parse_rational(d);
              in.lambda = parse_rational(l);
              in.lambda_tilde = parse_rational(lt);
              in.s = parse_rational(s);
              ++cells;
              if (check_theorem_C(in) != check_bounded(reduce_C_to_A(in))) ++mismatches;
            }
  return {mismatches == 0 && cells >= 10000,
          std::to_string(cells) + " rational cells, " + std::to_string(mismatches) + " mismatches"};
}

} // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"beta identity for the weighted mass of M", beta_identity},
      {"invariance of the boundary measure", mu_invariance},
      {"Forelli-Rudin growth classification", fr_classification},
      {"reproducing property after calibration", reproducing},
      {"certificate synthesis matches the characterization", certificates},
      {"adjoint identity and constancy of the adjoint on radial powers", adjoints},
      {"necessity growth probe", growth_probe},
      {"transfer isometry and intertwining", transfer},
      {"projection criterion matches its reduction", reduction},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << " | " << criteria[i].first << " | "
              << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}

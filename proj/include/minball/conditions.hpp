#ifndef MINBALL_CONDITIONS_HPP
#define MINBALL_CONDITIONS_HPP

#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "fr_integrals.hpp"
#include "rational.hpp"
#include "sampling.hpp"

namespace minball {

// Parameters of S f(z) = (1-|z|^2)^{b1} int f(w) (1 - z.conj(w))^{-c} (1-|w|^2)^{b2} dm(w)
// acting L^p((1-|w|^2)^s dm) -> L^q((1-|z|^2)^r dm).
struct ConditionInput {
  int n = 2;
  Rational p{2}, q{2};
  Rational b1{0}, b2{0}, c{0}, s{0}, r{0};
};

// Parameters of the projection P_s : L^p_lambda -> L^q_lambda_tilde.
struct ProjectionInput {
  int n = 2;
  Rational p{2}, q{2};
  Rational lambda{0}, lambda_tilde{0}, s{0};
};

// 1/p', zero at p = 1
inline std::string describe(const ConditionInput& in) {
  return "n=" + std::to_string(in.n) + " p=" + to_string(in.p) + " q=" + to_string(in.q) + " b1=" + to_string(in.b1) +
         " b2=" + to_string(in.b2) + " c=" + to_string(in.c) + " s=" + to_string(in.s) + " r=" + to_string(in.r);
}

inline std::string describe(const ProjectionInput& in) {
  return "n=" + std::to_string(in.n) + " p=" + to_string(in.p) + " q=" + to_string(in.q) + " lambda=" +
         to_string(in.lambda) + " lambda~=" + to_string(in.lambda_tilde) + " s=" + to_string(in.s);
}

inline Rational inv_conj(const Rational& p) { return p == 1 ? Rational(0) : 1 - 1 / p; }

inline void validate(const ConditionInput& in) {
  if (in.n < 2) throw HypothesisError("n must be at least 2");
  if (!(in.p >= 1 && in.p <= in.q)) throw HypothesisError("need 1 <= p <= q");
  if (!(in.s > -1)) throw HypothesisError("need s > -1");
  if (!(in.r > -1 && in.r > -1 - in.q * in.b1)) throw HypothesisError("need r > max(-1, -1 - q b1)");
}

inline void validate(const ProjectionInput& in) {
  if (in.n < 2) throw HypothesisError("n must be at least 2");
  if (!(in.p >= 1 && in.p <= in.q)) throw HypothesisError("need 1 <= p <= q");
  if (!(in.s > -1)) throw HypothesisError("need s > -1");
  if (!(in.lambda > -1 && in.lambda_tilde > -1)) throw HypothesisError("need lambda, lambda_tilde > -1");
}

inline Rational tau(const ConditionInput& in) {
  return (in.n + 1 + in.s) * inv_conj(in.p) + (in.n + 1 + in.r) / in.q;
}

// b1 + b2 - s + (n+1+r)/q + (n+1+s)/p'
inline Rational critical_c(const ConditionInput& in) { return in.b1 + in.b2 - in.s + tau(in); }

inline bool check_theorem_A(const ConditionInput& in) {
  validate(in);
  if (in.p == 1) throw HypothesisError("the p > 1 characterization needs p > 1");
  return in.s + 1 < in.p * (in.b2 + 1) && in.c <= critical_c(in);
}

inline bool check_theorem_B(const ConditionInput& in) {
  validate(in);
  if (in.p != 1) throw HypothesisError("the p = 1 characterization needs p = 1");
  const Rational bound = critical_c(in);
  return (in.s < in.b2 && in.c == bound) || (in.s <= in.b2 && in.c < bound);
}

inline bool check_bounded(const ConditionInput& in) {
  validate(in);
  return in.p == 1 ? check_theorem_B(in) : check_theorem_A(in);
}

// p > 1: lambda+1 < p(s+1) and (n+1+lambda)/p <= (n+1+lambda_tilde)/q.
// p = 1: (lambda < s and (n+1+lambda_tilde)/q >= n+1+lambda) or (lambda <= s and ... > ...).
inline bool check_theorem_C(const ProjectionInput& in) {
  validate(in);
  const Rational target = (in.n + 1 + in.lambda_tilde) / in.q;
  if (in.p == 1) {
    const Rational source = in.n + 1 + in.lambda;
    return (in.lambda < in.s && target >= source) || (in.lambda <= in.s && target > source);
  }
  return in.lambda + 1 < in.p * (in.s + 1) && (in.n + 1 + in.lambda) / in.p <= target;
}

// The p > 1 branch with the second inequality s >= (n+1+lambda)/p - (n+1+lambda_tilde)/q.
inline bool check_theorem_C_difference(const ProjectionInput& in) {
  validate(in);
  if (in.p == 1) return check_theorem_C(in);
  return in.lambda + 1 < in.p * (in.s + 1) &&
         in.s >= (in.n + 1 + in.lambda) / in.p - (in.n + 1 + in.lambda_tilde) / in.q;
}

// P_s is S with b1 = 0, b2 = s and c = n+1+s, acting from lambda to lambda_tilde.
inline ConditionInput reduce_C_to_A(const ProjectionInput& in) {
  ConditionInput out;
  out.n = in.n;
  out.p = in.p;
  out.q = in.q;
  out.b1 = 0;
  out.b2 = in.s;
  out.c = in.n + 1 + in.s;
  out.s = in.lambda;
  out.r = in.lambda_tilde;
  return out;
}

// Same substitution with c = n+1+lambda.
inline ConditionInput reduce_C_to_A_lambda_exponent(const ProjectionInput& in) {
  ConditionInput out = reduce_C_to_A(in);
  out.c = in.n + 1 + in.lambda;
  return out;
}

// ---- Schur test exponents ------------------------------------------------
//
// Kernel K(z,w) = (1-|z|^2)^{b1} (1-|w|^2)^{b2-s} |1 - z.conj(w)|^{-gamma}, measures
// nu1 = (1-|w|^2)^s dm, nu2 = (1-|z|^2)^r dm, test functions h1(w) = (1-|w|^2)^{-u},
// h2(z) = (1-|z|^2)^{-v}, split K^t, K^{1-t}.
//
// First test (p > 1): int h1^{p'} K^{t p'} dnu1 <= C h2(z)^{p'}. The w-integral has
//   radial exponent S1 = s - u p' + (b2-s) t p' and growth exponent C1 = gamma t p' - n - 1 - S1;
//   the z-factor left over is (1-|z|^2)^{b1 t p'}, so domination needs E1 = b1 t p' + v p' vs C1.
// First test (p = 1): sup_w h1 K^t <= C h2(z). With ew = (b2-s) t - u and ez = b1 t this
//   holds iff ew >= 0 and v + ez + min(0, ew - gamma t) >= 0 (the min only when gamma t > 0).
// Second test: int h2^q K^{(1-t)q} dnu2 <= C h1(w)^q with
//   S2 = r - v q + b1 (1-t) q, C2 = gamma (1-t) q - n - 1 - S2, E2 = (b2-s)(1-t) q + u q.
// An integral int (1-|z|^2)^S |1 - z.conj(w)|^{-(n+1+S+C)} dm is finite iff S > -1 and then
// behaves like (1-|w|^2)^{-C} (C > 0), log (C = 0) or 1 (C < 0).

template <class Num>
struct SchurExponents {
  Num s1, c1, e1;  // p > 1
  Num ew, ez, gt;  // p = 1
  Num s2, c2, e2;
};

template <class Num>
SchurExponents<Num> schur_exponents(const ConditionInput& in, const Num& t, const Num& u, const Num& v,
                                    const Rational& gamma) {
  SchurExponents<Num> x;
  const Rational beta = in.b2 - in.s;
  const Rational q = in.q;
  const Num one_minus_t = Num(Rational(1)) - t;
  if (in.p > 1) {
    const Rational pc = in.p / (in.p - 1);
    x.s1 = Num(in.s) - u * pc + t * (beta * pc);
    x.c1 = t * (gamma * pc) - Num(Rational(in.n + 1)) - x.s1;
    x.e1 = t * (in.b1 * pc) + v * pc;
  }
  x.ew = t * beta - u;
  x.ez = t * in.b1;
  x.gt = t * gamma;
  x.s2 = Num(in.r) - v * q + one_minus_t * (in.b1 * q);
  x.c2 = one_minus_t * (gamma * q) - Num(Rational(in.n + 1)) - x.s2;
  x.e2 = one_minus_t * (beta * q) + u * q;
  return x;
}

template <class Num>
bool growth_dominated(const Num& C, const Num& E) {
  const Num zero{};
  if (C > zero) return !(E < C);
  if (C == zero) return E > zero;
  return !(E < zero);
}

struct SchurCheck {
  std::string name;
  bool holds = false;
};

// Exact evaluation of the two Schur tests for a given (t, u, v) and kernel exponent gamma.
inline std::vector<SchurCheck> schur_conditions(const ConditionInput& in, const Rational& t, const Rational& u,
                                                const Rational& v, const Rational& gamma) {
  const auto x = schur_exponents<Rational>(in, t, u, v, gamma);
  std::vector<SchurCheck> out;
  if (in.p > 1) {
    out.push_back({"first test integral converges (S1 > -1)", x.s1 > -1});
    out.push_back({"first test dominated by h2^p'", x.s1 > -1 && growth_dominated(x.c1, x.e1)});
  } else {
    out.push_back({"sup test bounded in w (ew >= 0)", x.ew >= 0});
    const Rational lead = v + x.ez + (x.gt > 0 ? rmin(Rational(0), x.ew - x.gt) : Rational(0));
    out.push_back({"sup test dominated by h2", lead >= 0});
  }
  out.push_back({"second test integral converges (S2 > -1)", x.s2 > -1});
  out.push_back({"second test dominated by h1^q", x.s2 > -1 && growth_dominated(x.c2, x.e2)});
  return out;
}

inline bool schur_feasible(const ConditionInput& in, const Rational& t, const Rational& u, const Rational& v,
                           const Rational& gamma) {
  for (const auto& c : schur_conditions(in, t, u, v, gamma))
    if (!c.holds) return false;
  return true;
}

// ---- certificates ----------------------------------------------------------

enum class Recipe {
  // Chebyshev centre of the two slabs, at kernel exponent c*
  Slab,
  // p = 1, s = b2: h1 = 1, t = v/(c - b1)
  UnitWeight,
  // p = 1, s = b2, c <= 0: t = 0, kernel bounded by 2^{-c}
  Product
};

inline const char* recipe_name(Recipe r) {
  switch (r) {
    case Recipe::Slab: return "slab-center";
    case Recipe::UnitWeight: return "unit-weight";
    default: return "product";
  }
}

struct MarginItem {
  std::string name;
  Rational slack;  // > 0 required
};

struct Certificate {
  Recipe recipe = Recipe::Slab;
  Rational t, u, v;
  // exponent gamma used in the Schur tests; |1-z.conj(w)|^{-c} <= 2^{gamma-c} |1-z.conj(w)|^{-gamma}
  Rational gamma;
  Rational domination_exponent;
  std::vector<std::pair<std::string, Rational>> exponents;
  std::vector<MarginItem> margins;
  Rational margin;
};

struct Infeasible {
  std::string violated;
};

using CertificateResult = std::variant<Certificate, Infeasible>;

inline void record_margins(const ConditionInput& in, Certificate& cert) {
  const auto x = schur_exponents<Rational>(in, cert.t, cert.u, cert.v, cert.gamma);
  if (in.p > 1) {
    cert.exponents = {{"S1", x.s1}, {"C1", x.c1}, {"E1", x.e1}, {"S2", x.s2}, {"C2", x.c2}, {"E2", x.e2}};
  } else {
    cert.exponents = {{"ew", x.ew}, {"ez", x.ez}, {"gamma_t", x.gt}, {"S2", x.s2}, {"C2", x.c2}, {"E2", x.e2}};
  }
  switch (cert.recipe) {
    case Recipe::Slab:
      if (in.p > 1) {
        cert.margins = {{"S1 + 1 > 0", x.s1 + 1}, {"C1 > 0", x.c1}, {"S2 + 1 > 0", x.s2 + 1}, {"C2 > 0", x.c2}};
      } else {
        cert.margins = {{"ew > 0", x.ew}, {"v + b1 t > 0", cert.v + x.ez}, {"S2 + 1 > 0", x.s2 + 1}, {"C2 > 0", x.c2}};
      }
      break;
    case Recipe::UnitWeight:
      cert.margins = {{"t > 0", cert.t}, {"S2 + 1 > 0", x.s2 + 1}, {"-C2 > 0", -x.c2}};
      break;
    case Recipe::Product:
      cert.margins = {{"S2 + 1 > 0", x.s2 + 1}};
      break;
  }
  cert.margin = cert.margins.front().slack;
  for (const auto& m : cert.margins) cert.margin = rmin(cert.margin, m.slack);
}

// Centre of the parallelogram cut out by
//   L1 < tau v + (tau + beta) D < U1  and  L2 < tau v - b1 D < U2,  D = u - v,
// the strict conditions S1 > -1, C2 > 0 (first slab) and C1 > 0, S2 > -1 (second slab) at gamma = c*.
inline std::optional<Certificate> slab_certificate(const ConditionInput& in) {
  const Rational T = tau(in), pc = inv_conj(in.p), beta = in.b2 - in.s;
  const Rational a = (in.n + 1 + in.s) * pc, bq = (in.n + 1 + in.r) / in.q;
  const Rational L1 = -beta * bq, U1 = (1 + in.s) * T * pc + beta * a;
  const Rational L2 = -in.b1 * a, U2 = in.b1 * bq + T * (1 + in.r) / in.q;
  const Rational cstar = critical_c(in);
  if (!(U1 > L1) || !(U2 > L2) || !(cstar > 0)) return std::nullopt;
  const Rational M1 = (L1 + U1) / 2, M2 = (L2 + U2) / 2;
  const Rational D = (M1 - M2) / cstar;
  Certificate cert;
  cert.recipe = Recipe::Slab;
  cert.v = (M2 + in.b1 * D) / T;
  cert.u = cert.v + D;
  cert.t = (a + cert.v - cert.u) / T;
  cert.gamma = cstar;
  cert.domination_exponent = cstar - in.c;
  record_margins(in, cert);
  return cert;
}

inline CertificateResult synthesize_certificate(const ConditionInput& in) {
  validate(in);
  const Rational cstar = critical_c(in);
  if (in.p > 1) {
    if (!(in.s + 1 < in.p * (in.b2 + 1))) return Infeasible{"first inequality s + 1 < p (b2 + 1)"};
    if (in.c > cstar) return Infeasible{"second inequality c <= b1 + b2 - s + (n+1+r)/q + (n+1+s)/p'"};
    auto cert = slab_certificate(in);
    if (!cert) return Infeasible{"slab system empty"};
    return *cert;
  }
  if (in.s > in.b2) return Infeasible{"first inequality s <= b2"};
  if (in.s < in.b2) {
    if (in.c > cstar) return Infeasible{"second inequality c <= b1 + b2 - s + (n+1+r)/q"};
    auto cert = slab_certificate(in);
    if (!cert) return Infeasible{"slab system empty"};
    return *cert;
  }
  if (!(in.c < cstar)) return Infeasible{"second inequality c < b1 + (n+1+r)/q when s = b2"};
  Certificate cert;
  cert.u = 0;
  if (in.c > 0) {
    cert.recipe = Recipe::UnitWeight;
    // S2 > -1 reads t < (1 + r + q b1)/(q c); take the midpoint of (0, that)
    cert.t = (1 + in.r + in.q * in.b1) / (2 * in.q * in.c);
    cert.v = cert.t * (in.c - in.b1);
    cert.gamma = in.c;
  } else {
    cert.recipe = Recipe::Product;
    cert.t = 0;
    cert.v = ((1 + in.r) / in.q + in.b1) / 2;
    cert.gamma = 0;
  }
  cert.domination_exponent = cert.gamma - in.c;
  record_margins(in, cert);
  return cert;
}

// ---- grid oracle -----------------------------------------------------------

// a0 + au u + av v
struct Affine {
  Rational a0, au, av;
  Affine() = default;
  explicit Affine(const Rational& k) : a0(k) {}
  Affine(Rational k, Rational ku, Rational kv) : a0(std::move(k)), au(std::move(ku)), av(std::move(kv)) {}
  friend Affine operator+(const Affine& x, const Affine& y) { return {x.a0 + y.a0, x.au + y.au, x.av + y.av}; }
  friend Affine operator-(const Affine& x, const Affine& y) { return {x.a0 - y.a0, x.au - y.au, x.av - y.av}; }
  friend Affine operator*(const Affine& x, const Rational& k) { return {x.a0 * k, x.au * k, x.av * k}; }
};

namespace detail {

inline BigInt lcm_big(const BigInt& a, const BigInt& b) { return a / boost::multiprecision::gcd(a, b) * b; }

// Integer form of an affine map over a shared denominator, evaluated at (i/64, j/64).
struct ScaledAffine {
  __int128 k0, ku, kv;
  __int128 at(long i, long j) const { return 64 * k0 + ku * i + kv * j; }
};

inline __int128 to_i128(const BigInt& x) {
  const BigInt m = boost::multiprecision::abs(x);
  if (m >= (BigInt(1) << 100)) throw NumericError("grid oracle coefficients overflow");
  const BigInt mask = (BigInt(1) << 64) - 1;
  const auto lo = static_cast<unsigned long long>(m & mask);
  const auto hi = static_cast<unsigned long long>(m >> 64);
  const __int128 v = static_cast<__int128>((static_cast<unsigned __int128>(hi) << 64) | lo);
  return x < 0 ? -v : v;
}

} // namespace detail

struct GridOracleResult {
  bool feasible = false;
  Rational u, v;  // first feasible grid point found
};

// Exhaustive search of (u,v) in [-10,10]^2 with step 1/64 for a point satisfying both
// Schur tests (p > 1) at gamma = c*, t = ((n+1+s)/p' + v - u)/tau.
inline GridOracleResult grid_oracle(const ConditionInput& in) {
  validate(in);
  if (in.p == 1) throw HypothesisError("grid oracle covers p > 1");
  GridOracleResult res;
  const Rational T = tau(in);
  const Rational cstar = critical_c(in);
  if (T == 0) return res;
  const Rational a = (in.n + 1 + in.s) * inv_conj(in.p);
  const Affine u{0, 1, 0}, v{0, 0, 1};
  const Affine t{a / T, Rational(-1) / T, Rational(1) / T};
  const auto x = schur_exponents<Affine>(in, t, u, v, cstar);
  const std::vector<Affine> forms{x.s1 + Affine(Rational(1)), x.c1, x.e1, x.s2 + Affine(Rational(1)), x.c2, x.e2};
  BigInt L = 1;
  for (const auto& f : forms)
    for (const Rational* k : {&f.a0, &f.au, &f.av}) L = detail::lcm_big(L, boost::multiprecision::denominator(*k));
  std::vector<detail::ScaledAffine> sc;
  for (const auto& f : forms) {
    auto conv = [&](const Rational& k) {
      return detail::to_i128(BigInt(boost::multiprecision::numerator(k) * (L / boost::multiprecision::denominator(k))));
    };
    sc.push_back({conv(f.a0), conv(f.au), conv(f.av)});
  }
  for (long i = -640; i <= 640; ++i) {
    for (long j = -640; j <= 640; ++j) {
      const __int128 s1p = sc[0].at(i, j), c1 = sc[1].at(i, j), e1 = sc[2].at(i, j);
      const __int128 s2p = sc[3].at(i, j), c2 = sc[4].at(i, j), e2 = sc[5].at(i, j);
      if (s1p > 0 && growth_dominated(c1, e1) && s2p > 0 && growth_dominated(c2, e2)) {
        res.feasible = true;
        res.u = Rational(i) / 64;
        res.v = Rational(j) / 64;
        return res;
      }
    }
  }
  return res;
}

// ---- verification ----------------------------------------------------------

struct IntegralCheck {
  std::string name;
  Rational growth_exponent;  // C of the test integral
  Rational radial_exponent;  // S of the test integral
  Rational allowed_exponent; // E: the power of the test function it must stay below
  std::vector<ClassificationRow> rows;
  bool stabilized = false;
};

struct VerificationReport {
  std::vector<SchurCheck> exact;
  std::optional<std::string> first_failure;
  std::vector<IntegralCheck> integrals;
  bool pass = false;
};

struct VerifyNumerics {
  Config cfg = Config::standard(2);
  std::vector<double> radii = default_fr_radii();
};

// Exact re-check of both Schur tests, then the test integrals evaluated along a
// cone ray: their compensated values must settle at the predicted growth.
inline VerificationReport verify_certificate(const Certificate& cert, const ConditionInput& in,
                                             const VerifyNumerics& numerics = {}) {
  validate(in);
  VerificationReport rep;
  rep.exact = schur_conditions(in, cert.t, cert.u, cert.v, cert.gamma);
  for (const auto& c : rep.exact) {
    if (!c.holds) {
      rep.first_failure = c.name;
      break;
    }
  }
  if (rep.first_failure) return rep;
  const auto x = schur_exponents<Rational>(in, cert.t, cert.u, cert.v, cert.gamma);
  std::vector<std::tuple<std::string, Rational, Rational, Rational>> tests;
  if (in.p > 1) tests.emplace_back("first test integral", x.c1, x.s1, x.e1);
  tests.emplace_back("second test integral", x.c2, x.s2, x.e2);
  const Config cfg = numerics.cfg.n == in.n ? numerics.cfg : Config::standard(in.n);
  rep.pass = true;
  for (const auto& [name, C, S, E] : tests) {
    IntegralCheck ic{name, C, S, E, {}, false};
    FRQuery q;
    q.c = to_double(C);
    q.s = to_double(S);
    q.radii = numerics.radii;
    for (double r : q.radii) {
      const double v = series_J(cfg, r, q);
      const double w = 1.0 - r * r;
      double comp = v;
      if (C > 0) comp = v * std::pow(w, q.c);
      if (C == 0) comp = v / std::log(1.0 / w);
      ic.rows.push_back({r, v, 0.0, comp});
    }
    const std::size_t k = ic.rows.size() - 1;
    ic.stabilized = k >= 1 && stable_pair(ic.rows[k - 1].compensated, ic.rows[k].compensated);
    rep.pass = rep.pass && ic.stabilized;
    rep.integrals.push_back(ic);
  }
  return rep;
}

} // namespace minball

#endif // MINBALL_CONDITIONS_HPP

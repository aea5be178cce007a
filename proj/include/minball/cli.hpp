#ifndef MINBALL_CLI_HPP
#define MINBALL_CLI_HPP

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "conditions.hpp"
#include "fr_integrals.hpp"
#include "kernels.hpp"
#include "operators.hpp"
#include "rational.hpp"
#include "sampling.hpp"
#include "transfer.hpp"

namespace minball::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kOutputDirEnv = "MINBALL_OUTPUT_DIR";

enum class Format { Csv, Json };

struct RunConfig {
  int n = 2;
  std::uint64_t seed = 42;
  std::size_t samples = 100000;
  int radial_nodes = 64;
  double tol = 1e-15;
  std::string format;
  std::string output;
  unsigned workers = 1;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// failed verification: report written, exit status 1
struct VerificationFailed {};

inline std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::filesystem::path resolve_output(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) p = std::filesystem::path(dir) / p;
  }
  return p;
}

class Sink {
 public:
  Sink(const RunConfig& cfg, std::ostream& fallback) : out_(&fallback) {
    if (!cfg.output.empty()) {
      const auto path = resolve_output(cfg.output);
      if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
      file_.open(path);
      if (!file_) throw UsageError("cannot open output file " + path.string());
      out_ = &file_;
    }
  }
  std::ostream& stream() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

inline Format table_format(const RunConfig& cfg) {
  if (cfg.format.empty() || cfg.format == "csv") return Format::Csv;
  if (cfg.format == "json") return Format::Json;
  throw UsageError("--format must be csv or json");
}

inline void require_report_format(const RunConfig& cfg) {
  if (!cfg.format.empty() && cfg.format != "json") throw UsageError("this command writes JSON reports only");
}

// header + rows, as CSV or as a JSON array of objects
inline void write_table(std::ostream& os, Format f, const std::vector<std::string>& header,
                        const std::vector<std::vector<std::string>>& rows) {
  if (f == Format::Csv) {
    for (std::size_t j = 0; j < header.size(); ++j) os << (j ? "," : "") << header[j];
    os << '\n';
    for (const auto& r : rows) {
      for (std::size_t j = 0; j < r.size(); ++j) os << (j ? "," : "") << r[j];
      os << '\n';
    }
    return;
  }
  Json arr = Json::array();
  for (const auto& r : rows) {
    Json o;
    for (std::size_t j = 0; j < header.size(); ++j) o[header[j]] = r[j];
    arr.push_back(o);
  }
  os << arr.dump(2) << '\n';
}

inline void check_samples(const RunConfig& cfg) {
  if (cfg.samples < 1000) throw UsageError("--samples must be at least 1000");
  if (cfg.radial_nodes < 1) throw UsageError("--radial-nodes must be positive");
  if (!(cfg.tol > 0)) throw UsageError("--tol must be positive");
}

inline Json estimate_json(const Estimate& e) {
  Json j;
  j["re"] = e.value.real();
  j["im"] = e.value.imag();
  j["std_error"] = e.std_error;
  return j;
}

// ---- parameter bundles -----------------------------------------------------

struct RationalArgs {
  std::string p = "2", q = "2", b1 = "0", b2 = "0", c, s = "0", r = "0";
  std::string lambda, lambda_tilde;
};

inline ConditionInput condition_input(int n, const RationalArgs& a) {
  ConditionInput in;
  in.n = n;
  in.p = parse_rational(a.p);
  in.q = parse_rational(a.q);
  in.b1 = parse_rational(a.b1);
  in.b2 = parse_rational(a.b2);
  in.c = parse_rational(a.c);
  in.s = parse_rational(a.s);
  in.r = parse_rational(a.r);
  return in;
}

inline ProjectionInput projection_input(int n, const RationalArgs& a) {
  ProjectionInput in;
  in.n = n;
  in.p = parse_rational(a.p);
  in.q = parse_rational(a.q);
  in.lambda = parse_rational(a.lambda);
  in.lambda_tilde = parse_rational(a.lambda_tilde);
  in.s = parse_rational(a.s);
  return in;
}

inline Json input_json(const ConditionInput& in) {
  Json j;
  j["n"] = in.n;
  for (const auto& [k, v] : std::vector<std::pair<std::string, Rational>>{
           {"p", in.p}, {"q", in.q}, {"b1", in.b1}, {"b2", in.b2}, {"c", in.c}, {"s", in.s}, {"r", in.r}})
    j[k] = to_string(v);
  return j;
}

inline Json input_json(const ProjectionInput& in) {
  Json j;
  j["n"] = in.n;
  for (const auto& [k, v] : std::vector<std::pair<std::string, Rational>>{
           {"p", in.p}, {"q", in.q}, {"lambda", in.lambda}, {"lambda_tilde", in.lambda_tilde}, {"s", in.s}})
    j[k] = to_string(v);
  return j;
}

// ---- commands --------------------------------------------------------------

inline int cmd_check(const RunConfig& cfg, const RationalArgs& a, std::ostream& out) {
  require_report_format(cfg);
  Json rep;
  rep["command"] = "check";
  if (!a.lambda.empty() || !a.lambda_tilde.empty()) {
    if (a.lambda.empty() || a.lambda_tilde.empty()) throw UsageError("--lambda and --lambda-tilde go together");
    const ProjectionInput in = projection_input(cfg.n, a);
    const bool verdict = check_theorem_C(in);
    const ConditionInput red = reduce_C_to_A(in);
    rep["theorem"] = "C";
    rep["input"] = input_json(in);
    rep["verdict"] = verdict;
    rep["difference_form_verdict"] = check_theorem_C_difference(in);
    rep["reduction"] = input_json(red);
    rep["reduction_verdict"] = check_bounded(red);
  } else {
    if (a.c.empty()) throw UsageError("--c is required (or --lambda/--lambda-tilde for the projection)");
    const ConditionInput in = condition_input(cfg.n, a);
    const bool verdict = check_bounded(in);
    rep["theorem"] = in.p == 1 ? "B" : "A";
    rep["input"] = input_json(in);
    rep["verdict"] = verdict;
    rep["critical_c"] = to_string(critical_c(in));
    if (in.c == critical_c(in)) rep["caveat"] = "boundary case per printed statement";
  }
  out << rep.dump(2) << '\n';
  return 0;
}

inline Json certificate_json(const Certificate& c) {
  Json j;
  j["recipe"] = recipe_name(c.recipe);
  j["t"] = to_string(c.t);
  j["u"] = to_string(c.u);
  j["v"] = to_string(c.v);
  j["h1"] = "(1-|w|^2)^(-u)";
  j["h2"] = "(1-|z|^2)^(-v)";
  j["gamma"] = to_string(c.gamma);
  j["domination_exponent"] = to_string(c.domination_exponent);
  Json ex;
  for (const auto& [k, v] : c.exponents) ex[k] = to_string(v);
  j["exponents"] = ex;
  return j;
}

inline int cmd_certificate(const RunConfig& cfg, const RationalArgs& a, bool verify, std::ostream& out) {
  require_report_format(cfg);
  if (a.c.empty()) throw UsageError("--c is required");
  const ConditionInput in = condition_input(cfg.n, a);
  const bool verdict = check_bounded(in);
  const CertificateResult res = synthesize_certificate(in);
  Json rep;
  rep["command"] = "certificate";
  rep["input"] = input_json(in);
  rep["verdict"] = verdict;
  bool ok = true;
  if (const auto* cert = std::get_if<Certificate>(&res)) {
    rep["certificate"] = certificate_json(*cert);
    Json m;
    for (const auto& item : cert->margins) m[item.name] = to_string(item.slack);
    rep["margins"] = m;
    rep["margin"] = to_string(cert->margin);
    ok = verdict;
    if (verify) {
      VerifyNumerics num;
      num.cfg = Config::standard(cfg.n);
      const VerificationReport vr = verify_certificate(*cert, in, num);
      Json v;
      Json exact = Json::array();
      for (const auto& c : vr.exact) exact.push_back({{"condition", c.name}, {"holds", c.holds}});
      v["exact"] = exact;
      if (vr.first_failure) v["first_failure"] = *vr.first_failure;
      Json ints = Json::array();
      for (const auto& ic : vr.integrals) {
        Json ij;
        ij["name"] = ic.name;
        ij["growth_exponent"] = to_string(ic.growth_exponent);
        ij["radial_exponent"] = to_string(ic.radial_exponent);
        ij["allowed_exponent"] = to_string(ic.allowed_exponent);
        Json rows = Json::array();
        for (const auto& r : ic.rows) rows.push_back({{"radius", r.radius}, {"value", r.value}, {"compensated", r.compensated}});
        ij["rows"] = rows;
        ij["stabilized"] = ic.stabilized;
        ints.push_back(ij);
      }
      v["integrals"] = ints;
      v["pass"] = vr.pass;
      rep["verification"] = v;
      ok = ok && vr.pass;
    }
  } else {
    rep["infeasible"] = std::get<Infeasible>(res).violated;
    ok = !verdict;
  }
  rep["consistent"] = ok;
  out << rep.dump(2) << '\n';
  return ok ? 0 : 1;
}

inline int cmd_fr_scan(const RunConfig& cfg, const std::vector<double>& cs, const std::vector<double>& ss,
                       const std::vector<int>& ds, const std::vector<double>& radii, const std::string& integral,
                       const std::string& method, std::ostream& out) {
  const Format f = table_format(cfg);
  if (integral != "I" && integral != "J") throw UsageError("--integral must be I or J");
  if (method != "series" && method != "mc") throw UsageError("--method must be series or mc");
  if (method == "mc") check_samples(cfg);
  const Config conf = Config::standard(cfg.n);
  const FRIntegral which = integral == "I" ? FRIntegral::I : FRIntegral::J;
  std::vector<std::vector<std::string>> rows;
  std::uint64_t cell = 0;
  for (double c : cs)
    for (double s : ss)
      for (int d : ds) {
        FRQuery q;
        q.c = c;
        q.s = s;
        q.d = d;
        q.radii = radii;
        q.validate();
        const RadialEstimator est =
            method == "series" ? series_estimator(conf, q, which)
                               : mc_estimator(conf, q, which, RngState{cfg.seed, 100 + cell}, cfg.samples,
                                              cfg.radial_nodes, cfg.workers);
        ++cell;
        const Classification cl = classify_asymptotics(q, est);
        for (const auto& r : cl.rows)
          rows.push_back({std::to_string(cfg.n), fmt(c), fmt(s), std::to_string(d), fmt(r.radius), fmt(r.value),
                          fmt(r.std_error), fmt(r.compensated), cl.label()});
      }
  write_table(out, f, {"n", "c", "s", "d", "radius", "estimate", "stderr", "compensated_value", "class"}, rows);
  return 0;
}

struct OperatorArgs {
  RationalArgs rat;
  std::string c_offset = "0";
  std::string family = "xi";
  std::vector<double> ladder;
};

inline OperatorParams operator_params(int n, const OperatorArgs& a) {
  OperatorParams op;
  op.n = n;
  op.p = to_double(parse_rational(a.rat.p));
  op.q = to_double(parse_rational(a.rat.q));
  op.b1 = to_double(parse_rational(a.rat.b1));
  op.b2 = to_double(parse_rational(a.rat.b2));
  op.s = to_double(parse_rational(a.rat.s));
  op.r = to_double(parse_rational(a.rat.r));
  op.validate();
  op.c = a.rat.c.empty() ? op.critical_c() + to_double(parse_rational(a.c_offset)) : to_double(parse_rational(a.rat.c));
  return op;
}

inline int cmd_norm_probe(const RunConfig& cfg, const OperatorArgs& a, std::ostream& out) {
  const Format f = table_format(cfg);
  const OperatorParams op = operator_params(cfg.n, a);
  const Config conf = Config::standard(cfg.n);
  std::vector<RatioRow> rows;
  if (a.family == "xi") {
    const std::vector<double> radii = a.ladder.empty() ? std::vector<double>{0.5, 0.9, 0.99} : a.ladder;
    rows = xi_growth_probe(op, conf, radii, cfg.radial_nodes);
  } else if (a.family == "power") {
    check_samples(cfg);
    const std::vector<double> Ns = a.ladder.empty() ? std::vector<double>{0, 1, 2, 4} : a.ladder;
    std::vector<std::pair<double, TestFunction>> ladder;
    for (double N : Ns) ladder.push_back({N, TestFunction::power(N, op)});
    const SampleCloud src = sample_M(conf, {cfg.seed, 1}, op.s, cfg.samples, cfg.workers);
    const SampleCloud inner = sample_M(conf, {cfg.seed, 2}, op.b2, cfg.samples, cfg.workers);
    const std::size_t outer_count = std::max<std::size_t>(1000, cfg.samples / 100);
    const SampleCloud target = sample_M(conf, {cfg.seed, 3}, op.r, outer_count, cfg.workers);
    rows = ratio_probe(op, ladder, {&src, &inner, &target});
  } else {
    throw UsageError("--family must be xi or power");
  }
  std::vector<std::vector<std::string>> table;
  for (const auto& r : rows)
    table.push_back({fmt(r.param), fmt(r.source_norm), fmt(r.target_norm), r.ratio ? fmt(*r.ratio) : "undefined",
                     fmt(r.std_error)});
  write_table(out, f, {"family_param", "source_norm", "target_norm", "ratio", "stderr"}, table);
  return 0;
}

inline std::vector<std::pair<std::string, CFunction>> holomorphic_battery() {
  return {{"1", [](const CPoint&) { return Complex(1.0); }},
          {"z1", [](const CPoint& z) { return z[0]; }},
          {"z1*z2", [](const CPoint& z) { return z[0] * z[1]; }},
          {"z1^2", [](const CPoint& z) { return z[0] * z[0]; }}};
}

inline CPoint random_cone_point(int n, double max_radius, Engine& eng) {
  std::uniform_real_distribution<double> unif;
  const double t = max_radius * std::sqrt(unif(eng));
  return t * sample_haar_frame(n, eng).point();
}

inline int cmd_reproduce(const RunConfig& cfg, const std::string& domain, double s, int points, std::ostream& out) {
  require_report_format(cfg);
  check_samples(cfg);
  if (domain != "M" && domain != "ball") throw UsageError("--domain must be M or ball");
  if (points < 1) throw UsageError("--points must be positive");
  if (!(s > -1)) throw UsageError("--s must exceed -1");
  const Config conf = Config::standard(cfg.n);
  KernelParams kp;
  kp.n = cfg.n;
  kp.s = s;
  SampleCloud cloud;
  if (domain == "M") {
    cloud = sample_M(conf, {cfg.seed, 1}, s, cfg.samples, cfg.workers);
  } else {
    cloud = reweight_ball(sample_ball_star(conf, {cfg.seed, 1}, cfg.samples, cfg.workers), s);
  }
  kp = calibrate(kp, cloud);
  Engine eng = RngState{cfg.seed, 2}.engine();
  std::vector<CPoint> eval;
  for (int i = 0; i < points; ++i) {
    const CPoint z = random_cone_point(cfg.n, 0.6, eng);
    eval.push_back(domain == "M" ? z : project_to_ball(z));
  }
  Json rep;
  rep["command"] = "reproduce";
  rep["domain"] = domain;
  rep["n"] = cfg.n;
  rep["s"] = s;
  rep["samples"] = cfg.samples;
  rep["seed"] = cfg.seed;
  if (domain == "M") {
    rep["C"] = {{"value", kp.C}, {"std_error", kp.C * kp.norm_rel_error}, {"closed_form", exact_C_M(conf, s)}};
  } else {
    rep["ball_norm"] = {{"value", kp.ball_norm},
                        {"std_error", kp.ball_norm * kp.norm_rel_error},
                        {"closed_form", exact_ball_norm(cfg.n, s)}};
  }
  bool all = true;
  Json fns = Json::array();
  for (const auto& [name, f] : holomorphic_battery()) {
    double worst = 0.0;
    Json pts = Json::array();
    for (const auto& z : eval) {
      const Estimate e = domain == "M" ? project_M(f, z, s, cloud, kp) : project_ball(f, z, s, cloud, kp);
      const double sig = e.std_error > 0 ? std::abs(e.value - f(z)) / e.std_error : 0.0;
      worst = std::max(worst, sig);
      Json pj = estimate_json(e);
      pj["exact_re"] = f(z).real();
      pj["exact_im"] = f(z).imag();
      pts.push_back(pj);
    }
    const bool pass = worst < 3.0;
    all = all && pass;
    fns.push_back({{"function", name}, {"max_sigma", worst}, {"pass", pass}, {"points", pts}});
  }
  rep["functions"] = fns;
  rep["pass"] = all;
  out << rep.dump(2) << '\n';
  return all ? 0 : 1;
}

inline CFunction named_ball_function(const std::string& name) {
  if (name == "1") return [](const CPoint&) { return Complex(1.0); };
  if (name == "z1") return [](const CPoint& z) { return z[0]; };
  if (name == "z1*z2") return [](const CPoint& z) { return z[0] * z[1]; };
  if (name == "z1^2") return [](const CPoint& z) { return z[0] * z[0]; };
  if (name == "|z1|^2") return [](const CPoint& z) { return Complex(std::norm(z[0])); };
  if (name == "conj(z1)") return [](const CPoint& z) { return std::conj(z[0]); };
  throw UsageError("unknown --function '" + name + "'");
}

inline int cmd_isometry(const RunConfig& cfg, double p, double lambda, const std::string& fname, std::ostream& out) {
  require_report_format(cfg);
  check_samples(cfg);
  if (!(p >= 1)) throw UsageError("--p must be at least 1");
  if (!(lambda > -1)) throw UsageError("--lambda must exceed -1");
  const Config conf = Config::standard(cfg.n);
  const CFunction f = named_ball_function(fname);
  const SampleCloud cm = sample_M(conf, {cfg.seed, 1}, lambda, cfg.samples, cfg.workers);
  const SampleCloud cb = reweight_ball(sample_ball_star(conf, {cfg.seed, 2}, cfg.samples, cfg.workers), lambda);
  const IsometryReport r = verify_isometry(lift(f, p, cfg.n), p, lambda, cm, cb);
  Json rep;
  rep["command"] = "isometry";
  rep["n"] = cfg.n;
  rep["function"] = fname;
  rep["p"] = p;
  rep["lambda"] = lambda;
  rep["m_n"] = conf.m_n;
  rep["norm_M"] = {{"value", r.norm_M.real()}, {"std_error", r.norm_M.std_error}};
  rep["norm_ball"] = {{"value", r.norm_ball.real()}, {"std_error", r.norm_ball.std_error}};
  rep["rel_error"] = r.rel_error;
  rep["rel_std_error"] = r.rel_sigma;
  rep["pass"] = r.pass;
  out << rep.dump(2) << '\n';
  return r.pass ? 0 : 1;
}

struct Range {
  Rational lo, hi;
  int steps = 1;
};

inline Range parse_range(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw UsageError("ranges are written lo:hi:steps");
  Range r{parse_rational(parts[0]), parse_rational(parts[1]), std::stoi(parts[2])};
  if (r.steps < 1) throw UsageError("range needs at least one step");
  return r;
}

inline int cmd_region_scan(const RunConfig& cfg, RationalArgs a, const std::string& mode, const std::string& xp,
                           const std::string& xr, const std::string& yp, const std::string& yr, std::ostream& out) {
  const Format f = table_format(cfg);
  if (mode != "A" && mode != "C") throw UsageError("--mode must be A or C");
  if (mode == "C") {
    if (a.lambda.empty()) a.lambda = "0";
    if (a.lambda_tilde.empty()) a.lambda_tilde = "0";
  } else if (a.c.empty()) {
    a.c = "0";
  }
  auto slot = [&](const std::string& name) -> std::string& {
    static const std::vector<std::string> ab{"p", "q", "b1", "b2", "c", "s", "r"};
    static const std::vector<std::string> cc{"p", "q", "lambda", "lambda-tilde", "s"};
    const auto& allowed = mode == "A" ? ab : cc;
    if (std::find(allowed.begin(), allowed.end(), name) == allowed.end())
      throw UsageError("parameter '" + name + "' is not scanned in mode " + mode);
    if (name == "p") return a.p;
    if (name == "q") return a.q;
    if (name == "b1") return a.b1;
    if (name == "b2") return a.b2;
    if (name == "c") return a.c;
    if (name == "s") return a.s;
    if (name == "r") return a.r;
    if (name == "lambda") return a.lambda;
    return a.lambda_tilde;
  };
  if (xp == yp) throw UsageError("scan two different parameters");
  const Range rx = parse_range(xr), ry = parse_range(yr);
  std::vector<std::vector<std::string>> rows;
  for (int i = 0; i <= rx.steps; ++i) {
    const Rational x = rx.lo + (rx.hi - rx.lo) * i / rx.steps;
    for (int j = 0; j <= ry.steps; ++j) {
      const Rational y = ry.lo + (ry.hi - ry.lo) * j / ry.steps;
      slot(xp) = to_string(x);
      slot(yp) = to_string(y);
      std::string verdict;
      try {
        const bool v = mode == "A" ? check_bounded(condition_input(cfg.n, a)) : check_theorem_C(projection_input(cfg.n, a));
        verdict = v ? "1" : "0";
      } catch (const HypothesisError&) {
        verdict = "n/a";
      }
      rows.push_back({to_string(x), to_string(y), verdict});
    }
  }
  write_table(out, f, {xp, yp, "verdict"}, rows);
  return 0;
}

// ---- entry point -----------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Numerical and exact checks for weighted Bergman-type operators on the minimal ball"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  app.add_option("--n", cfg.n, "complex dimension n of the ball (default 2)")->check(CLI::Range(2, 64));
  app.add_option("--seed", cfg.seed, "64-bit seed (default 42)");
  app.add_option("--samples", cfg.samples, "Monte Carlo sample count, at least 1000 (default 100000)");
  app.add_option("--radial-nodes", cfg.radial_nodes, "Gauss-Jacobi radial nodes (default 64)");
  app.add_option("--tol", cfg.tol, "series tolerance (default 1e-15)");
  app.add_option("--format", cfg.format, "csv or json (tables); reports are always json");
  app.add_option("--output", cfg.output,
                 std::string("output file; relative paths resolve against $") + kOutputDirEnv + " when set");
  app.add_option("--workers", cfg.workers, "worker threads; results do not depend on it (default 1)");

  RationalArgs rat;
  auto add_ab = [&](CLI::App* sub) {
    sub->add_option("--p", rat.p, "source exponent p >= 1, rational like 3/2");
    sub->add_option("--q", rat.q, "target exponent q >= p");
    sub->add_option("--b1", rat.b1, "outer weight exponent b1");
    sub->add_option("--b2", rat.b2, "inner weight exponent b2");
    sub->add_option("--c", rat.c, "kernel exponent c");
    sub->add_option("--s", rat.s, "source weight s > -1");
    sub->add_option("--r", rat.r, "target weight r");
  };

  auto* check = app.add_subcommand("check", "exact boundedness verdict; JSON {input, theorem, verdict, ...}");
  add_ab(check);
  check->add_option("--lambda", rat.lambda, "projection: source weight lambda (selects the projection check)");
  check->add_option("--lambda-tilde", rat.lambda_tilde, "projection: target weight");
  check->footer("Either --c (operator S) or --lambda/--lambda-tilde (projection P_s) is required.");

  bool verify = false;
  auto* certificate = app.add_subcommand("certificate", "Schur-test certificate; JSON {input, verdict, certificate, margins}");
  add_ab(certificate);
  certificate->add_flag("--verify", verify, "also re-check exactly and evaluate the test integrals");

  std::vector<double> cs, ss{0.0}, radii = default_fr_radii();
  std::vector<int> ds{0};
  std::string integral = "J", method = "series";
  auto* fr = app.add_subcommand("fr-scan", "classify Forelli-Rudin growth");
  fr->add_option("--c", cs, "comma-separated c values")->required()->delimiter(',');
  fr->add_option("--s", ss, "comma-separated s values (default 0)")->delimiter(',');
  fr->add_option("--d", ds, "comma-separated moment orders d (default 0)")->delimiter(',');
  fr->add_option("--radii", radii, "increasing probe radii (default 0.99,0.999,0.9999)")->delimiter(',');
  fr->add_option("--integral", integral, "I (boundary) or J (volume), default J");
  fr->add_option("--method", method, "series (exact orbit series) or mc, default series");
  fr->footer("CSV columns: n,c,s,d,radius,estimate,stderr,compensated_value,class");

  OperatorArgs opa;
  auto* probe = app.add_subcommand("norm-probe", "ratio |S f|_{q,r} / |f|_{p,s} along a test family");
  probe->add_option("--p", opa.rat.p, "source exponent");
  probe->add_option("--q", opa.rat.q, "target exponent");
  probe->add_option("--b1", opa.rat.b1, "b1");
  probe->add_option("--b2", opa.rat.b2, "b2");
  probe->add_option("--c", opa.rat.c, "kernel exponent (default: boundary value plus --c-offset)");
  probe->add_option("--c-offset", opa.c_offset, "offset added to the boundary value of c");
  probe->add_option("--s", opa.rat.s, "source weight");
  probe->add_option("--r", opa.rat.r, "target weight");
  probe->add_option("--family", opa.family, "xi (deterministic) or power (Monte Carlo)");
  probe->add_option("--ladder", opa.ladder, "|xi| values or exponents N")->delimiter(',');
  probe->footer("CSV columns: family_param,source_norm,target_norm,ratio,stderr");

  std::string domain = "M";
  double rs = 0.0;
  int points = 20;
  auto* repro = app.add_subcommand("reproduce", "reproducing property of the calibrated kernel; JSON report");
  repro->add_option("--domain", domain, "M or ball");
  repro->add_option("--s", rs, "weight exponent s > -1");
  repro->add_option("--points", points, "evaluation points (default 20)");

  double ip = 2.0, il = 0.0;
  std::string fname = "z1";
  auto* iso = app.add_subcommand("isometry", "norm of the lifted function on M against the ball norm; JSON report");
  iso->add_option("--p", ip, "exponent p >= 1");
  iso->add_option("--lambda", il, "weight lambda > -1");
  iso->add_option("--function", fname, "1, z1, z1*z2, z1^2, |z1|^2 or conj(z1)");

  std::string mode = "C", xp, xr, yp, yr;
  auto* region = app.add_subcommand("region-scan", "verdict over a grid of two parameters");
  add_ab(region);
  region->add_option("--lambda", rat.lambda, "projection source weight");
  region->add_option("--lambda-tilde", rat.lambda_tilde, "projection target weight");
  region->add_option("--mode", mode, "A (operator S, p=1 uses the p=1 test) or C (projection), default C");
  region->add_option("--x-param", xp, "first parameter name")->required();
  region->add_option("--x-range", xr, "lo:hi:steps")->required();
  region->add_option("--y-param", yp, "second parameter name")->required();
  region->add_option("--y-range", yr, "lo:hi:steps")->required();
  region->footer("CSV columns: <x-param>,<y-param>,verdict (1, 0, or n/a outside the hypotheses)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (cfg.workers < 1) throw UsageError("--workers must be positive");
    Sink sink(cfg, out);
    std::ostream& os = sink.stream();
    if (check->parsed()) return cmd_check(cfg, rat, os);
    if (certificate->parsed()) return cmd_certificate(cfg, rat, verify, os);
    if (fr->parsed()) return cmd_fr_scan(cfg, cs, ss, ds, radii, integral, method, os);
    if (probe->parsed()) return cmd_norm_probe(cfg, opa, os);
    if (repro->parsed()) return cmd_reproduce(cfg, domain, rs, points, os);
    if (iso->parsed()) return cmd_isometry(cfg, ip, il, fname, os);
    if (region->parsed()) return cmd_region_scan(cfg, rat, mode, xp, xr, yp, yr, os);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const HypothesisError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"minball"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace minball::cli

#endif // MINBALL_CLI_HPP

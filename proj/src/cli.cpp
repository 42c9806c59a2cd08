#include "ral/cli.hpp"

#include "ral/additivity.hpp"
#include "ral/derivcalc.hpp"
#include "ral/entropy.hpp"
#include "ral/hadamard.hpp"
#include "ral/matspace.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace ral::cli {

namespace {

using io::json;
using entropy::AlphaParam;
using Clock = std::chrono::steady_clock;

constexpr const char* command_names[] = {
    "minimize",         "hessian",      "verify-tensor", "check-phi-psi",
    "scan-proposition", "taylor-probe", "channel-min-entropy"};

bool known_command(const std::string& cmd) {
  for (const char* name : command_names)
    if (cmd == name) return true;
  return false;
}

bool scan_capable(const std::string& cmd) {
  return cmd == "check-phi-psi" || cmd == "scan-proposition";
}

bool needs_input(const std::string& cmd) {
  return cmd == "minimize" || cmd == "hessian" || cmd == "verify-tensor" ||
         cmd == "channel-min-entropy";
}

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int resolve_threads(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("RAL_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return 1;
}

// Runs body(i) for i in [0, count) split over `threads` workers; each index
// writes only its own slot, so the merge order is the caller's.
template <typename F>
void parallel_chunks(long count, int threads, F&& body) {
  threads = static_cast<int>(std::min<long>(threads, count));
  if (threads <= 1) {
    for (long i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&body, t, threads, count] {
      for (long i = t; i < count; i += threads) body(i);
    });
  for (std::thread& th : pool) th.join();
}

struct ScanRow {
  double alpha = 0.0, param1 = 0.0, param2 = 0.0;
  double lhs = 0.0, rhs = 0.0, slack = 0.0;
};

constexpr const char* csv_header = "alpha,param1,param2,lhs,rhs,slack";

std::string csv_line(const ScanRow& r) {
  return fmt17(r.alpha) + "," + fmt17(r.param1) + "," + fmt17(r.param2) + "," +
         fmt17(r.lhs) + "," + fmt17(r.rhs) + "," + fmt17(r.slack);
}

json config_echo(const RunConfig& cfg, int threads) {
  json out;
  out["alpha"] = cfg.alpha;
  out["seed"] = cfg.seed;
  out["restarts"] = cfg.restarts;
  out["tol_eig"] = cfg.tol_eig;
  out["tol_grad"] = cfg.tol_grad;
  out["grid"] = cfg.grid;
  out["input"] = cfg.input_path;
  out["output"] = cfg.output_path;
  out["threads"] = threads;
  return out;
}

Report finalize(const RunConfig& cfg, int threads, json results,
                int exit_code, Clock::time_point t0) {
  Report rep;
  rep.doc["command"] = cfg.command;
  rep.doc["config"] = config_echo(cfg, threads);
  rep.doc["results"] = std::move(results);
  rep.doc["wall_time_ms"] =
      std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  rep.doc["version"] = version;
  rep.exit_code = exit_code;
  return rep;
}

struct InnerOutcome {
  json summary;
  ScanRow row;
  int exit_code = 0;
};

// The default grid: p = (u, 1-u), q = (v, 1-v) for u, v in {0, 0.1, ..., 1},
// both Hadamard tables checked entrywise at tolerance 1e-12.
InnerOutcome run_phi_psi(double alpha_value, int threads) {
  const AlphaParam alpha(alpha_value);
  std::vector<std::pair<double, double>> uv;
  for (int ui = 0; ui <= 10; ++ui)
    for (int vi = 0; vi <= 10; ++vi) uv.emplace_back(0.1 * ui, 0.1 * vi);

  struct Cell {
    hadamard::InequalityReport rep;
    double u = 0.0, v = 0.0;
  };
  std::vector<Cell> cells(uv.size());
  parallel_chunks(static_cast<long>(uv.size()), threads, [&](long i) {
    const auto [u, v] = uv[static_cast<std::size_t>(i)];
    RealVector p(2), q(2);
    p << u, 1.0 - u;
    q << v, 1.0 - v;
    cells[static_cast<std::size_t>(i)] = {
        hadamard::check_phi_le_psi(p, q, alpha, 1e-12), u, v};
  });

  long entries = 0, violations = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  Cell worst;
  for (const Cell& c : cells) {
    entries += c.rep.entries_checked;
    violations += c.rep.violation_count;
    if (c.rep.min_slack < min_slack) {
      min_slack = c.rep.min_slack;
      worst = c;
    }
  }

  const bool exploratory = !alpha.main_regime();
  InnerOutcome out;
  out.summary["alpha"] = alpha_value;
  out.summary["grid"] = "p=(u,1-u), q=(v,1-v), u,v in {0,0.1,...,1}";
  out.summary["entries_checked"] = entries;
  out.summary["violation_count"] = violations;
  out.summary["min_slack"] = min_slack;
  out.summary["worst"] = {{"u", worst.u},
                          {"v", worst.v},
                          {"sign", std::string(1, worst.rep.worst.sign)},
                          {"phi", worst.rep.worst.phi},
                          {"psi", worst.rep.worst.psi}};
  out.summary["exploratory"] = exploratory;
  out.row = {alpha_value, worst.u,          worst.v,
             worst.rep.worst.phi, worst.rep.worst.psi, min_slack};
  out.exit_code = (!exploratory && violations > 0) ? 1 : 0;
  return out;
}

// 10^4 deterministic Weyl samples (s, t) = 10 ({i sqrt2}, {i sqrt3}) of the
// difference-quotient product inequality, plus an h''-sign sweep of the
// log-substituted bound. For alpha < 1 the run is informational: the
// inequality is only claimed in the main regime.
InnerOutcome run_proposition(double alpha_value, int threads) {
  const AlphaParam alpha(alpha_value);
  const long samples = 10000;

  struct Cell {
    double s = 0.0, t = 0.0, lhs = 0.0, rhs = 0.0, slack = 0.0;
    bool strict = false;
  };
  std::vector<Cell> cells(static_cast<std::size_t>(samples));
  parallel_chunks(samples, threads, [&](long i) {
    const double k = static_cast<double>(i + 1);
    const double s = 10.0 * std::fmod(k * std::sqrt(2.0), 1.0);
    const double t = 10.0 * std::fmod(k * std::sqrt(3.0), 1.0);
    const auto res = hadamard::proposition_con(s, t, alpha);
    cells[static_cast<std::size_t>(i)] = {s,       t,
                                          res.lhs, res.rhs,
                                          res.rhs - res.lhs, res.strict};
  });

  long violations = 0, nonstrict = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  Cell worst;
  for (const Cell& c : cells) {
    if (c.slack < -1e-12) ++violations;
    if (!c.strict) ++nonstrict;
    if (c.slack < min_slack) {
      min_slack = c.slack;
      worst = c;
    }
  }

  double h2_min = std::numeric_limits<double>::infinity();
  double h2_max = -std::numeric_limits<double>::infinity();
  double xi_at_max = 0.0;
  long positive = 0;
  for (int k = 1; k <= 100; ++k) {
    const double xi = 0.05 * k;
    const double h2 = hadamard::convexity_witness(xi, alpha).h_second;
    if (h2 > 0.0) ++positive;
    h2_min = std::min(h2_min, h2);
    if (h2 > h2_max) {
      h2_max = h2;
      xi_at_max = xi;
    }
  }

  const bool exploratory = !alpha.main_regime();
  InnerOutcome out;
  out.summary["alpha"] = alpha_value;
  out.summary["samples"] = samples;
  out.summary["violation_count"] = violations;
  out.summary["nonstrict_count"] = nonstrict;
  out.summary["min_slack"] = min_slack;
  out.summary["worst"] = {
      {"s", worst.s}, {"t", worst.t}, {"lhs", worst.lhs}, {"rhs", worst.rhs}};
  out.summary["convexity"] = {{"xi_samples", 100},
                              {"h_second_min", h2_min},
                              {"h_second_max", h2_max},
                              {"positive_count", positive}};
  out.summary["exploratory"] = exploratory;
  if (exploratory) {
    out.row = {alpha_value, xi_at_max, 0.0, h2_max, 0.0, -h2_max};
    out.exit_code = 0;
  } else {
    out.row = {alpha_value, worst.s, worst.t, worst.lhs, worst.rhs, min_slack};
    out.exit_code = (violations > 0 || !(h2_min > 0.0)) ? 1 : 0;
  }
  return out;
}

std::string attach_csv(json& results, const std::vector<ScanRow>& rows) {
  std::string csv = csv_header;
  for (const ScanRow& r : rows) csv += "\n" + csv_line(r);
  csv += "\n";
  results["csv"] = csv;
  return csv;
}

json point_to_results(const additivity::CriticalPoint& cp, double alpha,
                      const matspace::SubspaceBasis& k) {
  json out;
  out["n"] = k.rows;
  out["m"] = k.cols;
  out["dim"] = k.dim();
  out["q_value"] = cp.q_value;
  out["entropy"] = std::log(cp.q_value) / (1.0 - alpha);
  out["residual"] = cp.residual;
  out["restarts_certified"] = cp.restarts_used;
  out["x"] = io::matrix_to_json(cp.x);
  return out;
}

json run_minimize(const RunConfig& cfg) {
  const matspace::SubspaceBasis k =
      io::subspace_from_json(io::load_json_file(cfg.input_path));
  const AlphaParam alpha(cfg.alpha);
  const additivity::CriticalPoint cp = additivity::maximize_q(
      k, alpha, cfg.seed, cfg.restarts, opt::max_iters, cfg.tol_grad);
  return point_to_results(cp, cfg.alpha, k);
}

json run_hessian(const RunConfig& cfg) {
  const json in = io::load_json_file(cfg.input_path);
  const matspace::SubspaceBasis k = io::subspace_from_json(in);
  const AlphaParam alpha(cfg.alpha);

  Matrix x;
  bool optimized = false;
  if (in.contains("x")) {
    x = io::matrix_from_json(in.at("x"));
    if (x.rows() != k.rows || x.cols() != k.cols)
      throw parse_error("hessian: \"x\" has the wrong shape");
    if (matspace::membership_residual(k, x) > tol::membership)
      throw membership_error("hessian: \"x\" lies outside the subspace");
  } else {
    x = additivity::maximize_q(k, alpha, cfg.seed, cfg.restarts,
                               opt::max_iters, cfg.tol_grad)
            .x;
    optimized = true;
  }

  const additivity::HessianSpectrum spec =
      additivity::hessian_form(x, k, alpha);
  const additivity::MaxClass cls = additivity::classify(spec, cfg.tol_eig);

  json out;
  out["optimized"] = optimized;
  out["q_value"] = entropy::q_alpha(x, alpha);
  out["residual"] = derivcalc::is_critical(x, k, alpha).residual;
  out["classification"] = additivity::to_string(cls);
  out["spectrum"] = io::spectrum_to_json(spec);
  out["x"] = io::matrix_to_json(x);
  return out;
}

struct VerifyOutcome {
  json results;
  int exit_code = 0;
};

VerifyOutcome run_verify_tensor(const RunConfig& cfg) {
  const io::PairInput pair =
      io::pair_from_json(io::load_json_file(cfg.input_path));
  const AlphaParam alpha(cfg.alpha);

  // Factor B's optimizer seeds must not overlap A's (restart r uses seed+r).
  const auto point = [&](const matspace::SubspaceBasis& k,
                         const std::optional<Matrix>& given,
                         std::uint64_t seed) {
    if (given) return *given;
    return additivity::maximize_q(k, alpha, seed, cfg.restarts,
                                  opt::max_iters, cfg.tol_grad)
        .x;
  };
  const Matrix xa = point(pair.ka, pair.xa, cfg.seed);
  const Matrix xb = point(pair.kb, pair.xb,
                          cfg.seed + static_cast<std::uint64_t>(cfg.restarts));

  const additivity::AdditivityCertificate cert =
      additivity::verify_tensor_local_min(xa, pair.ka, xb, pair.kb, alpha,
                                          cfg.tol_eig);

  VerifyOutcome out;
  out.results = io::certificate_to_json(cert);
  out.results["optimized_a"] = !pair.xa.has_value();
  out.results["optimized_b"] = !pair.xb.has_value();
  out.results["x_a"] = io::matrix_to_json(xa);
  out.results["x_b"] = io::matrix_to_json(xb);
  out.exit_code = cert.verdict == "FAILED" ? 1 : 0;
  return out;
}

// Probes the remainder order of t -> Tr f(A + tB) against the analytic
// Taylor coefficients, with f = |.|^(2 alpha) and A carrying a zero
// eigenvalue (the Holder case); reports the fitted log-log slope.
struct TaylorOutcome {
  json results;
  int exit_code = 0;
};

TaylorOutcome run_taylor_probe(const RunConfig& cfg) {
  const AlphaParam alpha(cfg.alpha);

  Matrix a, b;
  if (!cfg.input_path.empty()) {
    const json in = io::load_json_file(cfg.input_path);
    if (!in.is_object() || !in.contains("a") || !in.contains("b"))
      throw parse_error("taylor-probe: input must contain \"a\" and \"b\"");
    a = io::matrix_from_json(in.at("a"));
    b = io::matrix_from_json(in.at("b"));
  } else {
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const Index n = 3;
    // A carries the zero eigenvalue that drives the Holder remainder. B is
    // positive-diagonal-dominant, so every remainder contribution is
    // positive and no sign cancellation can corrupt the slope fit inside
    // the probe window.
    a = Matrix::Zero(n, n);
    for (Index i = 0; i + 1 < n; ++i) a(i, i) = std::abs(normal(rng)) + 0.5;
    b = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) b(i, i) = std::abs(normal(rng)) + 0.5;
    Matrix g(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index jx = 0; jx < n; ++jx) {
        const double re = normal(rng);
        const double im = normal(rng);
        g(i, jx) = Complex(re, im);
      }
    b += 0.1 * (g + g.adjoint()) / 2.0;
    b /= matspace::hs_norm(b);
  }

  const derivcalc::ScalarC2 f = derivcalc::g_alpha_function(alpha);
  const derivcalc::TaylorCoeffs coeffs =
      derivcalc::trace_taylor_coeffs(a, b, f);

  const auto trace_f = [&](const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    double acc = 0.0;
    for (Index i = 0; i < es.eigenvalues().size(); ++i)
      acc += f.f(es.eigenvalues()(i));
    return acc;
  };

  const int points = 25;
  std::vector<double> lt, lr;
  for (int k = 0; k < points; ++k) {
    const double t = std::pow(10.0, -3.0 + 2.0 * k / (points - 1.0));
    const double rem = std::abs(trace_f(a + t * b) -
                                (coeffs.c0 + coeffs.c1 * t +
                                 coeffs.c2 * t * t));
    if (rem > 1e-14) {  // below this the remainder is fp noise
      lt.push_back(std::log(t));
      lr.push_back(std::log(rem));
    }
  }

  double slope = 0.0;
  bool below_floor = lt.size() < 5;
  if (!below_floor) {
    const double n = static_cast<double>(lt.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lt.size(); ++i) {
      sx += lt[i];
      sy += lr[i];
      sxx += lt[i] * lt[i];
      sxy += lt[i] * lr[i];
    }
    slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }

  const double expected =
      2.0 + std::min(1.0, 2.0 * (cfg.alpha - 1.0)) - 0.2;
  const bool exploratory = !alpha.main_regime();
  const bool pass = below_floor || slope >= expected;

  TaylorOutcome out;
  out.results["alpha"] = cfg.alpha;
  json aeig = json::array();
  for (Index i = 0; i < a.rows(); ++i) aeig.push_back(a(i, i).real());
  out.results["a_diagonal"] = std::move(aeig);
  out.results["taylor"] = {{"c0", coeffs.c0},
                           {"c1", coeffs.c1},
                           {"c2", coeffs.c2},
                           {"holder_eps", coeffs.holder_eps}};
  out.results["t_range"] = {1e-3, 1e-1};
  out.results["points_used"] = lt.size();
  out.results["remainder_below_fp_floor"] = below_floor;
  out.results["slope"] = slope;
  out.results["expected_min_slope"] = expected;
  out.results["exploratory"] = exploratory;
  out.results["pass"] = exploratory || pass;
  out.exit_code = (!exploratory && !pass) ? 1 : 0;
  return out;
}

json run_channel(const RunConfig& cfg) {
  const entropy::Channel ch =
      io::channel_from_json(io::load_json_file(cfg.input_path));
  const AlphaParam alpha(cfg.alpha);
  const entropy::MinEntropyEstimate est =
      entropy::min_output_entropy_estimate(ch, alpha, cfg.restarts, cfg.seed);

  json out;
  out["d_in"] = ch.d_in();
  out["d_out"] = ch.d_out();
  out["env_dim"] = ch.env_dim();
  const long bound = entropy::upb_dimension_bound(ch.d_out(), ch.env_dim());
  out["product_state_bound"] = bound;
  out["bound_forces_zero"] = ch.d_in() > bound;
  out["estimate"] = est.estimate;
  out["q_value"] = est.q_value;
  out["residual"] = est.residual;
  out["restarts_certified"] = est.restarts_used;
  out["x"] = io::matrix_to_json(est.x);
  return out;
}

struct GridSpec {
  double lo = 0.0, hi = 0.0, step = 0.0;
};

GridSpec parse_grid(const std::string& text) {
  GridSpec g;
  char trailing = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &g.lo, &g.hi, &g.step,
                  &trailing) != 3)
    throw usage_error("--grid expects lo:hi:step, got \"" + text + "\"");
  return g;
}

std::vector<double> grid_values(const GridSpec& g) {
  if (!(g.lo > 0.0) || !(g.step > 0.0) || g.hi < g.lo - 1e-12)
    throw usage_error("--grid range must satisfy 0 < lo <= hi, step > 0");
  std::vector<double> values;
  for (double v = g.lo; v <= g.hi + 1e-12; v += g.step) {
    if (std::abs(v - 1.0) < 1e-9)
      throw usage_error("--grid must not contain alpha = 1");
    values.push_back(v);
    if (values.size() > 100000)
      throw usage_error("--grid produces too many samples");
  }
  if (values.empty()) throw usage_error("--grid range is empty");
  return values;
}

void validate_inputs(const RunConfig& cfg) {
  if (needs_input(cfg.command) && cfg.input_path.empty())
    throw usage_error(cfg.command + " requires --input");
  if (!cfg.grid.empty() && !scan_capable(cfg.command))
    throw usage_error("--grid only applies to check-phi-psi and "
                      "scan-proposition");
}

}  // namespace

std::optional<RunConfig> parse_config(int argc, const char* const* argv) {
  RunConfig cfg;
  std::string config_path;

  CLI::App app{"Renyi-entropy subspace toolkit: optimization, Hessian "
               "certificates, tensor-product verification, and scalar "
               "inequality scans."};
  app.name("ral_cli");
  auto* o_cmd = app.add_option(
      "command", cfg.command,
      "minimize | hessian | verify-tensor | check-phi-psi | "
      "scan-proposition | taylor-probe | channel-min-entropy");
  auto* o_alpha = app.add_option("--alpha", cfg.alpha, "Renyi order (> 0, != 1)")
                      ->capture_default_str();
  auto* o_seed =
      app.add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  auto* o_restarts =
      app.add_option("--restarts", cfg.restarts, "optimizer restarts")
          ->capture_default_str();
  auto* o_tol_eig =
      app.add_option("--tol-eig", cfg.tol_eig,
                     "Hessian eigenvalue classification tolerance")
          ->capture_default_str();
  auto* o_tol_grad =
      app.add_option("--tol-grad", cfg.tol_grad,
                     "criticality residual tolerance")
          ->capture_default_str();
  auto* o_grid = app.add_option(
      "--grid", cfg.grid, "alpha scan lo:hi:step (scan-capable commands)");
  auto* o_input = app.add_option("--input,-i", cfg.input_path, "input JSON");
  auto* o_output = app.add_option("--output,-o", cfg.output_path,
                                  "report path (default: stdout); scans also "
                                  "write <output>.csv");
  auto* o_threads =
      app.add_option("--threads", cfg.threads,
                     "worker threads (0: RAL_THREADS env var, else 1)")
          ->capture_default_str();
  app.add_option("--config", config_path,
                 "JSON file with defaults; explicit flags win");
  app.set_version_flag("--version", std::string(version));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return std::nullopt;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw usage_error(std::string("argument error: ") + e.what());
  }

  if (!config_path.empty()) {
    const json j = io::load_json_file(config_path);
    if (!j.is_object()) throw usage_error("--config must hold a JSON object");
    const auto take = [&](const char* key, const CLI::Option* opt,
                          auto& dst) {
      if (j.contains(key) && opt->count() == 0) {
        try {
          dst = j.at(key).get<std::decay_t<decltype(dst)>>();
        } catch (const nlohmann::json::exception&) {
          throw usage_error(std::string("--config field \"") + key +
                            "\" has the wrong type");
        }
      }
    };
    take("command", o_cmd, cfg.command);
    take("alpha", o_alpha, cfg.alpha);
    take("seed", o_seed, cfg.seed);
    take("restarts", o_restarts, cfg.restarts);
    take("tol_eig", o_tol_eig, cfg.tol_eig);
    take("tol_grad", o_tol_grad, cfg.tol_grad);
    take("grid", o_grid, cfg.grid);
    take("input", o_input, cfg.input_path);
    take("output", o_output, cfg.output_path);
    take("threads", o_threads, cfg.threads);
  }

  if (cfg.command.empty()) throw usage_error("missing command");
  if (!known_command(cfg.command))
    throw usage_error("unknown command: " + cfg.command);
  if (!(cfg.alpha > 0.0) || std::abs(cfg.alpha - 1.0) < 1e-12)
    throw usage_error("alpha must be > 0 and != 1");
  if (cfg.restarts < 1) throw usage_error("--restarts must be >= 1");
  if (!(cfg.tol_eig > 0.0) || !(cfg.tol_grad > 0.0))
    throw usage_error("tolerances must be positive");
  if (cfg.threads < 0) throw usage_error("--threads must be >= 0");
  if (!cfg.input_path.empty() &&
      !std::filesystem::exists(cfg.input_path))
    throw usage_error("input file not found: " + cfg.input_path);

  return cfg;
}

Report run(const RunConfig& cfg) {
  validate_inputs(cfg);
  if (!cfg.grid.empty()) {
    const GridSpec g = parse_grid(cfg.grid);
    return scan_alpha(cfg, g.lo, g.hi, g.step);
  }

  const auto t0 = Clock::now();
  const int threads = resolve_threads(cfg.threads);
  json results;
  int code = 0;

  if (cfg.command == "minimize") {
    results = run_minimize(cfg);
  } else if (cfg.command == "hessian") {
    results = run_hessian(cfg);
  } else if (cfg.command == "verify-tensor") {
    VerifyOutcome out = run_verify_tensor(cfg);
    results = std::move(out.results);
    code = out.exit_code;
  } else if (cfg.command == "check-phi-psi") {
    InnerOutcome out = run_phi_psi(cfg.alpha, threads);
    results = std::move(out.summary);
    attach_csv(results, {out.row});
    code = out.exit_code;
  } else if (cfg.command == "scan-proposition") {
    InnerOutcome out = run_proposition(cfg.alpha, threads);
    results = std::move(out.summary);
    attach_csv(results, {out.row});
    code = out.exit_code;
  } else if (cfg.command == "taylor-probe") {
    TaylorOutcome out = run_taylor_probe(cfg);
    results = std::move(out.results);
    code = out.exit_code;
  } else {  // channel-min-entropy (validated upstream)
    results = run_channel(cfg);
  }

  return finalize(cfg, threads, std::move(results), code, t0);
}

Report scan_alpha(const RunConfig& cfg, double lo, double hi, double step) {
  if (!scan_capable(cfg.command))
    throw usage_error("alpha scans only apply to check-phi-psi and "
                      "scan-proposition");
  const std::vector<double> alphas = grid_values({lo, hi, step});

  const auto t0 = Clock::now();
  const int threads = resolve_threads(cfg.threads);
  json per_alpha = json::array();
  std::vector<ScanRow> rows;
  rows.reserve(alphas.size());
  int code = 0;
  for (double av : alphas) {
    InnerOutcome out = cfg.command == "check-phi-psi"
                           ? run_phi_psi(av, threads)
                           : run_proposition(av, threads);
    per_alpha.push_back(std::move(out.summary));
    rows.push_back(out.row);
    code = std::max(code, out.exit_code);
  }

  json results;
  results["alpha_grid"] = {{"lo", lo}, {"hi", hi}, {"step", step}};
  results["alpha_count"] = alphas.size();
  results["per_alpha"] = std::move(per_alpha);
  attach_csv(results, rows);
  return finalize(cfg, threads, std::move(results), code, t0);
}

int main_impl(int argc, const char* const* argv) {
  try {
    const std::optional<RunConfig> cfg = parse_config(argc, argv);
    if (!cfg) return 0;
    const Report rep = run(*cfg);

    const std::string text = rep.doc.dump(2) + "\n";
    if (cfg->output_path.empty()) {
      std::fputs(text.c_str(), stdout);
    } else {
      std::ofstream out(cfg->output_path);
      if (!out) throw usage_error("cannot write output: " + cfg->output_path);
      out << text;
      if (rep.doc["results"].contains("csv")) {
        std::ofstream csv(cfg->output_path + ".csv");
        if (!csv)
          throw usage_error("cannot write output: " + cfg->output_path +
                            ".csv");
        csv << rep.doc["results"]["csv"].get<std::string>();
      }
    }
    return rep.exit_code;
  } catch (const convergence_error& e) {
    std::fprintf(stderr, "ral_cli: non-convergence: %s\n", e.what());
    return 3;
  } catch (const usage_error& e) {
    std::fprintf(stderr, "ral_cli: usage error: %s\n", e.what());
    return 2;
  } catch (const error& e) {
    std::fprintf(stderr, "ral_cli: error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "ral_cli: error: %s\n", e.what());
    return 2;
  }
}

}  // namespace ral::cli

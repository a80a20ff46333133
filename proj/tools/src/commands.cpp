#include "gfalm_app/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <gfalm/error.hpp>
#include <gfalm/field_io.hpp>
#include <gfalm/flow.hpp>
#include <gfalm/geometry.hpp>
#include <gfalm/random_fields.hpp>
#include <gfalm/reference.hpp>
#include <gfalm/solver.hpp>
#include <gfalm/spectral.hpp>

#include "gfalm_app/records_io.hpp"
#include "gfalm_app/run_config.hpp"
#include "gfalm_app/suites.hpp"

namespace gfalm::app {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

ordered_json optional_json(const std::optional<double>& v) {
  return v && std::isfinite(*v) ? ordered_json(*v) : ordered_json(nullptr);
}

struct SolveRun {
  int status = kOk;
  std::string message;
  std::optional<SolveOutcome> outcome;
  std::vector<double> n;
  std::vector<double> err;
};

SolveRun solve_into(const RunConfig& cfg, const fs::path& dir) {
  fs::create_directories(dir);
  SolveRun run;
  const auto t0 = Clock::now();
  ordered_json summary{{"config_hash", cfg.hash()}, {"tau", cfg.tau}};
  try {
    const Problem problem = cfg.problem();
    SolverConfig sc = cfg.solver_config();
    sc.reference = cfg.load_reference(problem);
    if (sc.reference) sc.ground_energy = quadratic_energy(*sc.reference, problem);
    const GfalmSolver solver(problem, sc);
    IterationCsv csv(dir / "iterations.csv");
    const GridField u0 = make_initial(cfg.initial, problem.grid(), problem.p());
    run.outcome = solver.run(u0, [&](const IterationRecord& r) {
      csv.write(r);
      if (r.err_h1) {
        run.n.push_back(static_cast<double>(r.n));
        run.err.push_back(*r.err_h1);
      }
    });
    const SolveOutcome& out = *run.outcome;
    write_field(dir / "final.field", out.final_state);
    run.status = out.converged ? kOk : kNotConverged;
    summary["alpha"] = out.alpha;
    summary["converged"] = out.converged;
    summary["iterations_used"] = out.iterations_used;
    summary["Q_final"] = out.Q_final;
    summary["lambda_final"] = out.lambda_final;
    summary["residual_linf_final"] = out.records.back().residual_linf;
    summary["err_h1_final"] = optional_json(out.records.back().err_h1);
    summary["max_certificate"] = out.max_certificate;
    summary["max_q_increase"] = out.max_q_increase;
    summary["min_u_tilde_lp1"] = out.min_u_tilde_lp1;
  } catch (const NumericalError& e) {
    run.status = kNumericalError;
    run.message = e.what();
  } catch (const DomainError& e) {
    run.status = kConfigError;
    run.message = e.what();
  }
  if (!run.outcome) {
    summary["converged"] = false;
    summary["iterations_used"] = nullptr;
    summary["Q_final"] = nullptr;
    summary["lambda_final"] = nullptr;
  }
  summary["status"] = run.status;
  summary["message"] = run.message;
  summary["wall_time_s"] = seconds_since(t0);
  write_json(dir / "summary.json", summary);
  return run;
}

RunConfig with_tau(RunConfig cfg, double tau) {
  cfg.tau = tau;
  cfg.canonical["tau"] = tau;
  return cfg;
}

std::string tau_label(double tau) {
  std::ostringstream s;
  s << "tau_" << tau;
  return s.str();
}

std::size_t worker_count(std::size_t jobs) {
  const char* env = std::getenv("GFALM_THREADS");
  if (!env) return 1;
  const long n = std::strtol(env, nullptr, 10);
  return std::clamp<std::size_t>(n > 0 ? static_cast<std::size_t>(n) : 1, 1, std::max<std::size_t>(jobs, 1));
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

LinearFit fit_error_sequence(std::span<const double> n, std::span<const double> err, double lo,
                             double hi) {
  return fit_log_window(n, err, lo, hi);
}

std::vector<double> parse_tau_list(const std::string& csv) {
  std::vector<double> taus;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size() || !(v > 0.0)) throw std::invalid_argument(item);
      taus.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("taus: '" + item + "' is not a positive number");
    }
  }
  return taus;
}

int cmd_solve(const fs::path& config, const fs::path& out_dir, std::ostream& log) {
  try {
    const RunConfig cfg = load_run_config(config);
    const SolveRun run = solve_into(cfg, out_dir);
    if (run.outcome)
      log << (run.outcome->converged ? "converged" : "not converged") << " after "
          << run.outcome->iterations_used << " iterations, Q = " << format_double(run.outcome->Q_final)
          << '\n';
    else
      log << "error: " << run.message << '\n';
    return run.status;
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

RateReport run_rate(const fs::path& config, std::span<const double> taus, const fs::path& out_dir,
                    std::ostream& log) {
  if (taus.size() < 2) throw ConfigError("rate: need at least two tau values");
  const RunConfig base = load_run_config(config);
  if (base.reference == "none") throw ConfigError("rate: the config must name a reference");
  fs::create_directories(out_dir);

  RateReport report;
  report.runs.resize(taus.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < taus.size(); i = next++) {
      const SolveRun run = solve_into(with_tau(base, taus[i]), out_dir / tau_label(taus[i]));
      RateEntry& e = report.runs[i];
      e.tau = taus[i];
      e.message = run.message;
      e.status = run.status == kOk ? "converged" : run.status == kNotConverged ? "not_converged" : "failed";
      if (run.outcome) {
        e.iterations = run.outcome->iterations_used;
        e.Q_final = run.outcome->Q_final;
      }
      try {
        e.fit = fit_error_sequence(run.n, run.err, report.window_lo, report.window_hi);
      } catch (const DomainError& err) {
        if (e.message.empty()) e.message = err.what();
      }
      std::lock_guard lock(log_mutex);
      log << "tau = " << taus[i] << ": " << e.status;
      if (e.fit) log << ", slope " << format_double(e.fit->slope) << ", R^2 " << e.fit->r_squared;
      log << '\n';
    }
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < worker_count(taus.size()); ++t) pool.emplace_back(worker);
    worker();
  }

  std::vector<const RateEntry*> fitted;
  for (const auto& e : report.runs)
    if (e.fit) fitted.push_back(&e);
  std::sort(fitted.begin(), fitted.end(), [](auto* a, auto* b) { return a->tau < b->tau; });
  report.ordering_consistent = fitted.size() >= 2;
  for (std::size_t i = 1; i < fitted.size(); ++i)
    if (fitted[i]->fit->slope > fitted[i - 1]->fit->slope) report.ordering_consistent = false;

  ordered_json runs = ordered_json::array();
  for (const auto& e : report.runs) {
    ordered_json j{{"tau", e.tau},
                   {"status", e.status},
                   {"iterations", e.iterations},
                   {"Q_final", e.Q_final}};
    j["slope"] = e.fit ? ordered_json(e.fit->slope) : ordered_json(nullptr);
    j["intercept"] = e.fit ? ordered_json(e.fit->intercept) : ordered_json(nullptr);
    j["r_squared"] = e.fit ? ordered_json(e.fit->r_squared) : ordered_json(nullptr);
    j["fit_points"] = e.fit ? e.fit->points : 0;
    j["message"] = e.message;
    runs.push_back(std::move(j));
  }
  write_json(out_dir / "rate_report.json",
             ordered_json{{"config_hash", base.hash()},
                          {"error_window", {report.window_lo, report.window_hi}},
                          {"runs", runs},
                          {"slopes_ordered_by_tau_over_1_plus_tau", report.ordering_consistent}});
  return report;
}

int cmd_rate(const fs::path& config, std::span<const double> taus, const fs::path& out_dir,
             std::ostream& log) {
  try {
    const RateReport report = run_rate(config, taus, out_dir, log);
    int status = kOk;
    for (const auto& e : report.runs) {
      if (e.status == "failed") return kNumericalError;
      if (e.status != "converged" || !e.fit || !(e.fit->slope < 0.0)) status = kNotConverged;
    }
    return status;
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

int cmd_flow(const fs::path& config, double dt, double t_final, const fs::path& out_dir,
             std::ostream& log) {
  const auto t0 = Clock::now();
  try {
    const RunConfig cfg = load_run_config(config);
    const Problem problem = cfg.problem();
    FlowConfig fc;
    fc.dt = dt;
    fc.t_final = t_final;
    fc.record_every = cfg.record_every;
    fc.reference = cfg.load_reference(problem);
    fs::create_directories(out_dir);
    ordered_json summary{{"config_hash", cfg.hash()}, {"dt", dt}, {"t_final", t_final}};
    int status = kOk;
    try {
      const GridField u0 = make_initial(cfg.initial, problem.grid(), problem.p());
      const FlowOutcome out = rk4_integrate(u0, problem, fc);
      FlowCsv csv(out_dir / "flow.csv");
      for (const auto& r : out.records) csv.write(r);
      for (const auto& w : out.warnings) log << "warning: " << w << '\n';
      summary["steps"] = out.steps;
      summary["Q_final"] = out.records.back().Q;
      summary["drift_final"] = out.records.back().drift;
      summary["err_h1_final"] = optional_json(out.records.back().err_h1);
      summary["max_q_increase"] = out.max_q_increase;
      summary["warnings"] = out.warnings;
      summary["decay_rate"] = nullptr;
      if (fc.reference) {
        try {
          const auto rate =
              decay_rate_estimate(out.records, quadratic_energy(*fc.reference, problem));
          summary["decay_rate"] = {{"slope", rate.fit.slope}, {"r_squared", rate.fit.r_squared},
                                   {"points", rate.fit.points}};
        } catch (const DomainError&) {
        }
      }
      log << "t = " << t_final << ", Q = " << format_double(out.records.back().Q) << '\n';
    } catch (const NumericalError& e) {
      status = kNumericalError;
      summary["message"] = e.what();
      log << "error: " << e.what() << '\n';
    }
    summary["status"] = status;
    summary["wall_time_s"] = seconds_since(t0);
    write_json(out_dir / "summary.json", summary);
    return status;
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << '\n';
  } catch (const DomainError& e) {
    log << "error: " << e.what() << '\n';
  }
  return kConfigError;
}

int cmd_probe(const fs::path& config, const fs::path& ground_state, const fs::path& out_dir,
              std::ostream& log) {
  try {
    const RunConfig cfg = load_run_config(config);
    const Problem problem = cfg.problem();
    const auto ctx = GroundStateContext::certify(read_field(ground_state), problem);
    fs::create_directories(out_dir);

    const CoercivityReport coer = coercivity_check(ctx);
    const std::vector<double> scales{1e-1, 1e-2, 1e-3};
    const GrowthReport growth = quadratic_growth_probe(ctx, 16, scales, cfg.seed);
    const RSweep sweep =
        r_quadratic_sweep(ctx, sample_tangent(ctx, derive_seed(cfg.seed, 1), 0.5));

    SolverConfig sc = cfg.solver_config();
    sc.ground_energy = ctx.lambda();
    sc.assert_decay = false;
    const SolveOutcome traj =
        GfalmSolver(problem, sc).run(make_initial(cfg.initial, problem.grid(), problem.p()));
    std::vector<double> quotients;
    for (const auto& r : traj.records)
      if (r.lojasiewicz_q && *r.lojasiewicz_q > 0.0 && std::isfinite(*r.lojasiewicz_q))
        quotients.push_back(*r.lojasiewicz_q);

    bool ok = coer.passes;
    ordered_json gj = ordered_json::array();
    for (const auto& s : growth.scales) {
      const auto [mn, mx] = std::minmax_element(s.ratios.begin(), s.ratios.end());
      const bool positive = !s.ratios.empty() && *mn > 0.0;
      ok = ok && positive;
      gj.push_back({{"scale", s.scale},
                    {"ratios", s.ratios},
                    {"predicted", s.predicted},
                    {"seeds", s.seeds},
                    {"skipped", s.skipped},
                    {"min", s.ratios.empty() ? ordered_json(nullptr) : ordered_json(*mn)},
                    {"max", s.ratios.empty() ? ordered_json(nullptr) : ordered_json(*mx)}});
    }
    const double qmax = quotients.empty() ? 0.0 : *std::max_element(quotients.begin(), quotients.end());
    write_json(out_dir / "probe.json",
               ordered_json{{"config_hash", cfg.hash()},
                            {"lambda_g", ctx.lambda()},
                            {"residual_linf", ctx.residual_linf()},
                            {"coercivity",
                             {{"min_eig", coer.min_eig},
                              {"passes", coer.passes},
                              {"dimension", coer.dimension},
                              {"real_subspace", coer.real_subspace},
                              {"restricted", coer.restricted},
                              {"phase_mode_residual", coer.phase_mode_residual},
                              {"phase_mode_rayleigh", coer.phase_mode_rayleigh}}},
                            {"quadratic_growth", {{"seed", growth.master_seed},
                                                  {"max_mode", growth.max_mode},
                                                  {"scales", gj}}},
                            {"r_sweep", {{"xi_lp", sweep.xi_lp},
                                         {"r", sweep.r},
                                         {"quotient", sweep.quotient},
                                         {"tail_spread", sweep.tail_spread}}},
                            {"lojasiewicz", {{"samples", quotients.size()},
                                             {"max", qmax},
                                             {"median", quotients.empty() ? ordered_json(nullptr)
                                                                          : ordered_json(median(quotients))}}}});
    log << "min_eig = " << format_double(coer.min_eig) << (ok ? ", probes passed" : ", probes FAILED")
        << '\n';
    return ok ? kOk : kNotConverged;
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    log << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::runtime_error& e) {
    log << "error: " << e.what() << '\n';
    return kNumericalError;
  }
}

int cmd_verify(const std::string& suite, std::ostream& log) {
  std::vector<Check> checks;
  if (suite == "soliton")
    checks = suite_soliton();
  else if (suite == "2d")
    checks = suite_2d();
  else if (suite == "norms")
    checks = suite_norms();
  else if (suite == "geometry")
    checks = suite_geometry();
  else if (suite == "flow")
    checks = suite_flow();
  else {
    log << "error: unknown suite '" << suite << "' (soliton, 2d, norms, geometry, flow)\n";
    return kConfigError;
  }
  print_checks(checks, log);
  std::vector<std::string> failed;
  for (const auto& c : checks)
    if (!c.passed) failed.push_back(c.name);
  if (failed.empty()) return kOk;
  log << "failed:";
  for (const auto& f : failed) log << ' ' << f;
  log << '\n';
  return kNotConverged;
}

}  // namespace gfalm::app

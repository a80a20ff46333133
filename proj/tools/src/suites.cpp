#include "gfalm_app/suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>

#include <gfalm/flow.hpp>
#include <gfalm/geometry.hpp>
#include <gfalm/random_fields.hpp>
#include <gfalm/reference.hpp>
#include <gfalm/solver.hpp>
#include <gfalm/spectral.hpp>

namespace gfalm::app {
namespace {

Check at_most(std::string name, double value, double bound) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "<= %.3g", bound);
  return {std::move(name), value, buf, value <= bound};
}

Check at_least(std::string name, double value, double bound) {
  char buf[32];
  std::snprintf(buf, sizeof buf, ">= %.3g", bound);
  return {std::move(name), value, buf, value >= bound};
}

Check positive(std::string name, double value) { return {std::move(name), value, "> 0", value > 0.0}; }

Check within(std::string name, double value, double lo, double hi) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "in [%.3g, %.3g]", lo, hi);
  return {std::move(name), value, buf, value >= lo && value <= hi};
}

GridSpec soliton_grid(int m) { return GridSpec::line(Axis{-32.0, 64.0, m}); }

Problem soliton_problem(int m) { return Problem(soliton_grid(m), ProblemParams{}); }

Problem trap_problem() {
  ProblemParams params;
  params.potential = PotentialSpec::harmonic({1.0, 1.0});
  return Problem(GridSpec::plane(Axis{-4.0, 8.0, 128}, Axis{-4.0, 8.0, 128}), params);
}

SolveOutcome solve(const Problem& problem, double tau, double tol, std::int64_t max_iters,
                   const GridField& u0, std::optional<GridField> reference = std::nullopt) {
  SolverConfig c;
  c.tau = tau;
  c.tol_linf = tol;
  c.max_iters = max_iters;
  c.reference = std::move(reference);
  return GfalmSolver(problem, c).run(u0);
}

double aligned_distance(const GridField& a, const GridField& b) {
  return h1_norm(phase_align(a, b) - b);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

void print_checks(const std::vector<Check>& checks, std::ostream& os) {
  std::size_t width = 5;
  for (const auto& c : checks) width = std::max(width, c.name.size());
  for (const auto& c : checks) {
    char line[256];
    std::snprintf(line, sizeof line, "%-*s  %-14.6g %-20s %s\n", static_cast<int>(width),
                  c.name.c_str(), c.value, c.bound.c_str(), c.passed ? "PASS" : "FAIL");
    os << line;
  }
}

std::vector<Check> suite_soliton() {
  std::vector<Check> checks;
  const Problem problem = soliton_problem(512);
  const GridField ref = exact_soliton(1.0, problem.grid());
  // ||phi*||_{L^4}^4 = (4/3) (2 omega)^{3/2} for the sech profile.
  const double l4 = std::pow(8.0 * std::numbers::sqrt2 / 3.0, 0.25);
  checks.push_back(at_most("peak value u*(0)", std::abs(ref[256].real() - std::numbers::sqrt2 / l4), 1e-12));
  checks.push_back(at_most("| ||I_h u*||_{h,4} - 1 |", std::abs(lp_norm(ref, 4.0) - 1.0), 1e-10));
  checks.push_back(at_most("| Q(I_h u*) - Q* |", std::abs(quadratic_energy(ref, problem) - l4 * l4), 1e-8));
  checks.push_back(at_most("boundary |u*(-32)|", std::abs(ref[0]), 1e-12));
  const GridField u0 = make_initial(initial::Gaussian{}, problem.grid(), problem.p());
  for (double tau : {1.0, 0.5, 0.2, 0.1}) {
    const SolveOutcome out = solve(problem, tau, 1e-11, 100000, u0, ref);
    char name[64];
    std::snprintf(name, sizeof name, "tau=%g converged", tau);
    checks.push_back({name, static_cast<double>(out.iterations_used), "converged", out.converged});
    std::snprintf(name, sizeof name, "tau=%g ||u - I_h u*||_{1,h}", tau);
    checks.push_back(at_most(name, *out.records.back().err_h1, 1e-8));
  }
  return checks;
}

std::vector<Check> suite_2d() {
  std::vector<Check> checks;
  const Problem problem = trap_problem();
  const Reference ref = make_reference_2d(problem);
  checks.push_back(at_most("reference residual", ref.certificate.residual_linf, 1e-10));
  const SolveOutcome fixed = solve(problem, 0.01, 1e-300, 1, ref.field);
  checks.push_back(at_most("reference fixed point", h1_norm(fixed.final_state - ref.field), 1e-9));

  const GridSpec& grid = problem.grid();
  const std::vector<GridField> starts{
      make_initial(initial::Gaussian{}, grid, 3.0),
      make_initial(initial::ShiftedGaussian{{1.0, 0.0}}, grid, 3.0),
      make_initial(initial::Vortex{}, grid, 3.0)};
  const char* names[] = {"phi_a", "phi_b", "phi_c"};
  std::vector<GridField> finals;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const SolveOutcome out = solve(problem, 0.1, 1e-10, 20000, starts[i]);
    checks.push_back({std::string(names[i]) + " converged", static_cast<double>(out.iterations_used),
                      "converged", out.converged});
    checks.push_back(at_most(std::string(names[i]) + " vs reference",
                             aligned_distance(out.final_state, ref.field), 1e-5));
    finals.push_back(out.final_state);
  }
  for (std::size_t i = 0; i < finals.size(); ++i)
    for (std::size_t j = i + 1; j < finals.size(); ++j)
      checks.push_back(at_most(std::string(names[i]) + " vs " + names[j],
                               aligned_distance(finals[i], finals[j]), 1e-5));
  return checks;
}

std::vector<Check> suite_norms() {
  std::vector<Check> checks;
  std::mt19937_64 rng(20240601);
  for (int m : {16, 64, 256}) {
    const GridSpec grid = GridSpec::line(Axis{-1.0, 2.0, m});
    double lower = 0.0;
    double upper = 0.0;
    double dual = 0.0;
    double attained = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const GridField u = random_field(grid, rng);
      const GridField v = random_field(grid, rng);
      const double fd = forward_difference_seminorm(u);
      const double sp = h1_seminorm(u);
      lower = std::max(lower, (fd - sp) / sp);
      upper = std::max(upper, (sp - 0.5 * std::numbers::pi * fd) / sp);
      const double hm1 = hm1_norm(u);
      dual = std::max(dual, std::abs(inner(u, v)) / (hm1 * h1_norm(v)) - 1.0);
      const GridField w = resolvent_solve(u, 1.0, 1.0);
      attained = std::max(attained, std::abs(std::abs(inner(u, w)) / (hm1 * h1_norm(w)) - 1.0));
    }
    const std::string tag = "M=" + std::to_string(m) + " ";
    checks.push_back(at_most(tag + "fwd <= spectral (rel excess)", lower, 1e-12));
    checks.push_back(at_most(tag + "spectral <= pi/2 fwd (rel excess)", upper, 1e-12));
    checks.push_back(at_most(tag + "H^-1 dual bound (rel excess)", dual, 1e-10));
    checks.push_back(at_most(tag + "H^-1 sup attained (rel gap)", attained, 1e-10));
  }
  return checks;
}

std::vector<Check> suite_geometry() {
  std::vector<Check> checks;
  const Problem problem = soliton_problem(128);
  const GridField u0 = make_initial(initial::Gaussian{}, problem.grid(), problem.p());
  const SolveOutcome gs = solve(problem, 1.0, 1e-12, 100000, u0);
  const auto ctx = GroundStateContext::certify(gs.final_state, problem);

  const CoercivityReport coer = coercivity_check(ctx);
  checks.push_back(positive("coercivity min_eig", coer.min_eig));
  checks.push_back(at_most("phase mode ||L(i u_g)||", coer.phase_mode_residual, 1e-8));

  const RSweep sweep = r_quadratic_sweep(ctx, sample_tangent(ctx, derive_seed(7, 1), 0.5));
  checks.push_back(at_most("r(xi) tail max/min", sweep.tail_spread, 4.0));

  const double scale[] = {1e-3};
  const GrowthReport growth = quadratic_growth_probe(ctx, 16, scale, 7);
  const auto& ratios = growth.scales.front().ratios;
  const auto [mn, mx] = std::minmax_element(ratios.begin(), ratios.end());
  checks.push_back(at_least("growth samples", static_cast<double>(ratios.size()), 16));
  checks.push_back(positive("growth min ratio", ratios.empty() ? 0.0 : *mn));
  checks.push_back(at_most("growth max/min", ratios.empty() ? INFINITY : *mx / *mn, 10.0));

  SolverConfig c;
  c.tau = 0.5;
  c.ground_energy = ctx.lambda();
  const SolveOutcome traj = GfalmSolver(problem, c).run(u0);
  std::vector<double> q;
  for (const auto& r : traj.records)
    if (r.lojasiewicz_q && *r.lojasiewicz_q > 0.0 && std::isfinite(*r.lojasiewicz_q))
      q.push_back(*r.lojasiewicz_q);
  const double ratio = q.empty() ? INFINITY : *std::max_element(q.begin(), q.end()) / median(q);
  checks.push_back(at_most("Lojasiewicz max/median", ratio, 10.0));
  return checks;
}

std::vector<Check> suite_flow() {
  std::vector<Check> checks;
  // M = 256: at M = 512 the top mode leaves the RK4 stability interval for dt = 0.01.
  const Problem problem = soliton_problem(256);
  const GridField u0 = make_initial(initial::Gaussian{}, problem.grid(), problem.p());
  const SolveOutcome gs = solve(problem, 1.0, 1e-12, 100000, u0);

  FlowConfig fc;
  fc.t_final = 50.0;
  fc.record_every = 10;
  fc.dt = 0.01;
  const FlowOutcome coarse = rk4_integrate(u0, problem, fc);
  fc.dt = 0.005;
  fc.record_every = 20;
  const FlowOutcome fine = rk4_integrate(u0, problem, fc);

  checks.push_back(at_most("||u(50) - u_gfalm||_{1,h}", aligned_distance(coarse.final_state, gs.final_state), 1e-6));
  checks.push_back(within("drift ratio dt -> dt/2", coarse.records.back().drift / fine.records.back().drift, 12.0, 20.0));
  double rise = 0.0;
  for (std::size_t i = 1; i < coarse.records.size(); ++i)
    rise = std::max(rise, coarse.records[i].Q - coarse.records[i - 1].Q);
  checks.push_back(at_most("max Q rise between records", rise, 1e-12));
  return checks;
}

}  // namespace gfalm::app

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <gfalm/error.hpp>
#include <gfalm/random_fields.hpp>
#include <gfalm/reference.hpp>
#include <gfalm/solver.hpp>

#include "dense_oracle.hpp"
#include "soliton_oracle.hpp"

using namespace gfalm;
using Catch::Approx;

namespace {

Problem trap(const GridSpec& g, double gamma) {
  ProblemParams params;
  params.potential = PotentialSpec::harmonic(std::vector<double>(static_cast<std::size_t>(g.dims()), gamma));
  return Problem(g, params);
}

Problem soliton_problem(int m) { return Problem(GridSpec::line(Axis{-32.0, 64.0, m}), ProblemParams{}); }

}  // namespace

TEST_CASE("one step matches the dense oracle") {
  std::mt19937_64 rng(31);
  for (const GridSpec& g : {GridSpec::line(Axis{-4.0, 8.0, 8}),
                            GridSpec::plane(Axis{-4.0, 8.0, 8}, Axis{-4.0, 8.0, 8})}) {
    const Problem problem = trap(g, 0.5);
    const auto v = problem.potential();
    const auto dense = oracle::make_dense(g, {v.begin(), v.end()}, 1.0, 3.0);
    const GridField u = normalize_lp(random_field(g, rng), 3.0);
    for (double tau : {0.1, 1.0, 10.0}) {
      SolverConfig c;
      c.tau = tau;
      const GfalmSolver solver(problem, c);
      const StepResult s = solver.step(u);
      const auto ref = dense.gfalm_step(oracle::to_vector(u), tau, solver.alpha());
      CHECK(max_norm(s.u_next - oracle::to_field(g, ref)) <= 1e-11);
      CHECK(s.q_before == Approx(dense.q_energy(oracle::to_vector(u))).epsilon(1e-13));
    }
  }
}

TEST_CASE("configuration errors") {
  const Problem problem = soliton_problem(64);
  SolverConfig c;
  c.tau = 0.0;
  CHECK_THROWS_AS(GfalmSolver(problem, c), DomainError);
  c.tau = 1.0;
  c.tol_linf = -1.0;
  CHECK_THROWS_AS(GfalmSolver(problem, c), DomainError);
  c.tol_linf = 1e-10;
  c.alpha = 0.5;
  CHECK_THROWS_AS(GfalmSolver(problem, c), DomainError);
  c.check_alpha = false;
  CHECK(GfalmSolver(problem, c).alpha() == 0.5);
  c.alpha.reset();
  CHECK(GfalmSolver(problem, c).alpha() == Approx(alpha_min(problem)));
  CHECK_THROWS_AS(GfalmSolver(problem, SolverConfig{}).run(GridField(problem.grid())), DomainError);
}

TEST_CASE("runs decay, stay on the sphere and converge") {
  const Problem problem = soliton_problem(256);
  const GridField u0 = make_initial(initial::Gaussian{}, problem.grid(), 3.0);
  for (double tau : {0.1, 1.0, 10.0}) {
    SolverConfig c;
    c.tau = tau;
    c.tol_linf = 1e-11;
    const SolveOutcome out = GfalmSolver(problem, c).run(u0);
    REQUIRE(out.converged);
    double prev = out.records.front().Q;
    for (const auto& r : out.records) {
      CHECK(std::abs(r.lp1_norm - 1.0) <= 1e-13);
      CHECK(r.Q <= prev + 1e-14);
      if (r.certificate) CHECK(*r.certificate <= 1e-10);
      prev = r.Q;
    }
    CHECK(out.records.back().residual_linf < 1e-11);
    // M = 256 resolves the sech profile to about 1e-9 in Q
    CHECK(out.Q_final == Approx(oracle::soliton_q(1.0)).epsilon(1e-8));
    CHECK(out.lambda_final == Approx(out.Q_final).epsilon(1e-13));
    CHECK(out.min_u_tilde_lp1 >= 0.1);
  }
}

TEST_CASE("an inadmissible alpha breaks the certificate") {
  const GridSpec g = GridSpec::line(Axis{-8.0, 16.0, 64});
  const Problem problem = trap(g, 1.0);
  const GridField u0 = make_initial(initial::Gaussian{{1.0}, 0.5}, g, 3.0);
  SolverConfig c;
  c.tau = 10.0;
  c.max_iters = 50;
  c.alpha = 0.0;
  c.check_alpha = false;
  CHECK_THROWS_AS(GfalmSolver(problem, c).run(u0), NumericalError);
  c.assert_decay = false;
  CHECK(GfalmSolver(problem, c).run(u0).max_certificate > 0.0);
  c.alpha.reset();
  c.assert_decay = true;
  CHECK(GfalmSolver(problem, c).run(u0).max_certificate <= 1e-10);
}

TEST_CASE("record bookkeeping") {
  const Problem problem = soliton_problem(64);
  const GridField u0 = make_initial(initial::Gaussian{}, problem.grid(), 3.0);
  SolverConfig c;
  c.max_iters = 0;
  SolveOutcome out = GfalmSolver(problem, c).run(u0);
  REQUIRE(out.records.size() == 1);
  CHECK(out.iterations_used == 0);
  CHECK_FALSE(out.converged);
  CHECK(out.records[0].residual_linf > 0.0);
  CHECK_FALSE(out.records[0].certificate);

  c.max_iters = 10;
  c.record_every = 3;
  c.keep_snapshots = true;
  c.reference = exact_soliton(1.0, problem.grid());
  std::vector<std::int64_t> seen;
  out = GfalmSolver(problem, c).run(u0, [&](const IterationRecord& r) { seen.push_back(r.n); });
  CHECK(seen == std::vector<std::int64_t>{0, 3, 6, 9, 10});
  CHECK(out.snapshots.size() == seen.size());
  CHECK(out.records.back().err_h1.has_value());
  CHECK_FALSE(out.records.back().certificate);
}

TEST_CASE("residual definitions along a run") {
  const Problem problem = soliton_problem(128);
  const GfalmSolver solver(problem, SolverConfig{});
  GridField u = make_initial(initial::Gaussian{}, problem.grid(), 3.0);
  for (int k = 0; k < 5; ++k) {
    const StepResult s = solver.step(u);
    CHECK(decay_certificate(s) <= 1e-12);
    CHECK(std::abs(lp_norm(s.u_next, 3.0 + 1.0) - 1.0) < 1e-14);
    // mu_tilde = (u - u_tilde) / tau
    CHECK(max_norm(s.mu_tilde * s.tau - (u - s.u_tilde)) < 1e-14);
    u = s.u_next;
  }
}

TEST_CASE("complex initial data converge to a rotated real ground state") {
  const Problem problem = soliton_problem(128);
  const GridField u0 = make_initial(initial::Gaussian{}, problem.grid(), 3.0) * std::polar(1.0, 0.9);
  SolverConfig c;
  c.tau = 1.0;
  c.tol_linf = 1e-12;
  const SolveOutcome out = GfalmSolver(problem, c).run(u0);
  REQUIRE(out.converged);
  const GridField real = out.final_state * std::polar(1.0, -0.9);
  CHECK(real.is_real(1e-12));
}

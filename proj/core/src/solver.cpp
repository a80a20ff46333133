#include "gfalm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gfalm/error.hpp"
#include "gfalm/spectral.hpp"

namespace gfalm {
namespace {

constexpr double kDecaySlack = 1e-12;

double lojasiewicz(double q, double q_ground, double hm1) {
  const double gap = q - q_ground;
  if (gap <= 1e-14) return 0.0;
  if (hm1 == 0.0) return std::numeric_limits<double>::infinity();
  return gap / (hm1 * hm1);
}

}  // namespace

GridField normalize_lp(const GridField& u, double p) {
  const double n = lp_norm(u, p + 1.0);
  if (!(n > 0.0)) throw DomainError("normalize_lp: zero field");
  return u * (1.0 / n);
}

double decay_certificate(const StepResult& s) {
  const double l2 = l2_norm(s.mu_tilde);
  const double h1 = h1_norm(s.mu_tilde);
  const double bound = (s.tau * s.tau * h1 * h1 + 4.0 * s.tau * l2 * l2) /
                       (2.0 * s.u_tilde_lp1 * s.u_tilde_lp1);
  return s.q_after - s.q_before + bound;
}

GfalmSolver::GfalmSolver(Problem problem, SolverConfig config)
    : problem_(std::move(problem)), config_(std::move(config)) {
  if (!(config_.tau > 0.0)) throw DomainError("SolverConfig: tau must be positive");
  if (!(config_.tol_linf > 0.0)) throw DomainError("SolverConfig: tol_linf must be positive");
  if (config_.record_every < 1) throw DomainError("SolverConfig: record_every must be >= 1");
  if (config_.max_iters < 0) throw DomainError("SolverConfig: max_iters must be >= 0");
  if (config_.reference) problem_.require_grid(*config_.reference);
  const double amin = alpha_min(problem_);
  if (config_.alpha) {
    if (config_.check_alpha && !(*config_.alpha >= amin))
      throw DomainError("SolverConfig: alpha = " + std::to_string(*config_.alpha) +
                        " is below alpha_min = " + std::to_string(amin));
    alpha_ = *config_.alpha;
  } else {
    alpha_ = amin;
  }
}

StepResult GfalmSolver::step(const GridField& u, std::optional<double> q) const {
  problem_.require_grid(u);
  const double tau = config_.tau;
  const double p = problem_.p();
  const double q_before = q ? *q : quadratic_energy(u, problem_);
  const double lt = q_before / lp_norm_pow(u, p + 1.0);

  // g(u) = u + tau (alpha - V - omega) u + tau lambda~ |u|^{p-1} u
  GridField g = nonlinearity(u, p);
  const auto v = problem_.potential();
  for (std::size_t j = 0; j < g.size(); ++j)
    g[j] = u[j] + tau * (alpha_ - v[j] - problem_.omega()) * u[j] + tau * lt * g[j];

  GridField u_tilde = resolvent_solve(g, 1.0 + tau * alpha_, 0.5 * tau, problem_.symbol());
  if (!u_tilde.all_finite()) throw NumericalError("gfalm_step: non-finite u_tilde", 0);

  GridField mu_tilde = u - u_tilde;
  mu_tilde *= 1.0 / tau;

  const double nrm = lp_norm(u_tilde, p + 1.0);
  if (!(nrm > 0.0)) throw NumericalError("gfalm_step: ||u_tilde||_{h,p+1} vanished", 0);
  GridField u_next = u_tilde * (1.0 / nrm);
  const double q_after = quadratic_energy(u_next, problem_);

  return StepResult{std::move(u_next), std::move(u_tilde), std::move(mu_tilde), nrm, q_before,
                    q_after, tau};
}

IterationRecord GfalmSolver::describe(std::int64_t n, const GridField& u, double q) const {
  IterationRecord r;
  r.n = n;
  r.Q = q;
  r.lp1_norm = lp_norm(u, problem_.p() + 1.0);
  r.residual_hm1 = hm1_norm(residual_mu(u, problem_));
  if (config_.reference)
    r.err_h1 = h1_norm(phase_align(u, *config_.reference) - *config_.reference);
  if (config_.ground_energy) r.lojasiewicz_q = lojasiewicz(q, *config_.ground_energy, r.residual_hm1);
  return r;
}

SolveOutcome GfalmSolver::run(GridField u0, const RecordSink& sink) const {
  problem_.require_grid(u0);
  if (!u0.all_finite()) throw NumericalError("gfalm_run: non-finite initial data", 0);
  GridField u = normalize_lp(u0, problem_.p());
  double q = quadratic_energy(u, problem_);

  SolveOutcome out{u, {}, {}, false, 0, q, 0.0, alpha_,
                   std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), 0.0};
  auto emit = [&](IterationRecord rec, const GridField& state) {
    if (sink) sink(rec);
    if (config_.keep_snapshots) out.snapshots.push_back(state);
    out.records.push_back(std::move(rec));
  };

  double last_residual = std::numeric_limits<double>::quiet_NaN();
  double last_u_tilde = std::numeric_limits<double>::quiet_NaN();
  std::int64_t n = 0;
  for (; n < config_.max_iters; ++n) {
    StepResult s = [&] {
      try {
        return step(u, q);
      } catch (const NumericalError& e) {
        throw NumericalError(e.message(), n);
      }
    }();
    if (!s.u_next.all_finite() || !std::isfinite(s.q_after))
      throw NumericalError("gfalm_run: non-finite state", n + 1);

    const double cert = decay_certificate(s);
    const double increase = s.q_after - s.q_before;
    out.max_q_increase = std::max(out.max_q_increase, increase);
    out.max_certificate = std::max(out.max_certificate, cert);
    out.min_u_tilde_lp1 = std::min(out.min_u_tilde_lp1, s.u_tilde_lp1);
    last_residual = max_norm(s.mu_tilde);
    last_u_tilde = s.u_tilde_lp1;

    if (n % config_.record_every == 0) {
      IterationRecord rec = describe(n, u, q);
      rec.residual_linf = last_residual;
      rec.certificate = cert;
      rec.u_tilde_lp1 = s.u_tilde_lp1;
      emit(std::move(rec), u);
    }
    if (config_.assert_decay && increase > kDecaySlack * std::max(1.0, std::abs(s.q_before)))
      throw NumericalError("gfalm_run: Q increased by " + std::to_string(increase), n + 1);

    u = std::move(s.u_next);
    q = s.q_after;
    if (last_residual < config_.tol_linf) {
      out.converged = true;
      ++n;
      break;
    }
  }

  IterationRecord fin = describe(n, u, q);
  fin.residual_linf = last_residual;
  fin.u_tilde_lp1 = last_u_tilde;
  if (n == 0) {
    // Nothing was iterated; report the residual the first step would have had.
    const StepResult s = step(u, q);
    fin.residual_linf = max_norm(s.mu_tilde);
    fin.u_tilde_lp1 = s.u_tilde_lp1;
  }
  emit(std::move(fin), u);

  out.iterations_used = n;
  out.Q_final = q;
  out.lambda_final = lambda_tilde(u, problem_);
  out.final_state = std::move(u);
  if (!std::isfinite(out.min_u_tilde_lp1)) out.min_u_tilde_lp1 = out.records.back().u_tilde_lp1;
  if (!std::isfinite(out.max_certificate)) out.max_certificate = 0.0;
  return out;
}

}  // namespace gfalm

#include "gfalm/flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "gfalm/error.hpp"
#include "gfalm/spectral.hpp"

namespace gfalm {

GridField flow_rhs(const GridField& u, const Problem& problem) {
  const GridField nl = nonlinearity(u, problem.p());
  const double denom = lp_norm_pow(u, 2.0 * problem.p());
  if (!(denom > 0.0)) throw DomainError("flow_rhs: zero field");
  GridField out = apply_A(u, problem);
  const double lambda = inner(out, nl).real() / denom;
  out *= -1.0;
  out.axpy(lambda, nl);
  return out;
}

double rk4_stiffness_bound(const Problem& problem) { return 2.0 / problem.symbol().max(); }

FlowOutcome rk4_integrate(const GridField& u0, const Problem& problem, const FlowConfig& config) {
  problem.require_grid(u0);
  if (!(config.dt > 0.0)) throw DomainError("FlowConfig: dt must be positive");
  if (!(config.dt <= config.t_final)) throw DomainError("FlowConfig: dt must not exceed t_final");
  if (config.record_every < 1) throw DomainError("FlowConfig: record_every must be >= 1");
  if (problem.grid().dims() != 1 && !config.allow_2d)
    throw DomainError("rk4_integrate: the flow integrator is restricted to 1D (set allow_2d)");
  if (config.reference) problem.require_grid(*config.reference);

  const double p = problem.p();
  const double dt = config.dt;
  const auto steps = static_cast<std::int64_t>(std::llround(config.t_final / dt));

  FlowOutcome out{u0, {}, 0, 0.0, {}};
  if (dt > rk4_stiffness_bound(problem)) {
    std::ostringstream msg;
    msg << "dt = " << dt << " exceeds 2/rho_max = " << rk4_stiffness_bound(problem)
        << "; high modes may be outside the RK4 stability interval";
    out.warnings.push_back(msg.str());
  }

  GridField u = u0;
  double q = quadratic_energy(u, problem);
  auto record = [&](std::int64_t k) {
    FlowRecord r;
    r.step = k;
    r.t = static_cast<double>(k) * dt;
    r.Q = q;
    r.drift = std::abs(lp_norm_pow(u, p + 1.0) - 1.0);
    if (config.reference) r.err_h1 = h1_norm(u - *config.reference);
    out.records.push_back(r);
  };
  record(0);

  for (std::int64_t k = 0; k < steps; ++k) {
    const GridField k1 = flow_rhs(u, problem);
    const GridField k2 = flow_rhs(GridField(u).axpy(0.5 * dt, k1), problem);
    const GridField k3 = flow_rhs(GridField(u).axpy(0.5 * dt, k2), problem);
    const GridField k4 = flow_rhs(GridField(u).axpy(dt, k3), problem);
    u.axpy(dt / 6.0, k1).axpy(dt / 3.0, k2).axpy(dt / 3.0, k3).axpy(dt / 6.0, k4);
    if (config.renormalize_each_step) u = u * (1.0 / lp_norm(u, p + 1.0));
    if (!u.all_finite()) {
      std::ostringstream msg;
      msg << "rk4_integrate: blow-up at t = " << static_cast<double>(k + 1) * dt;
      throw NumericalError(msg.str(), k + 1);
    }
    const double qn = quadratic_energy(u, problem);
    out.max_q_increase = std::max(out.max_q_increase, qn - q);
    q = qn;
    if ((k + 1) % config.record_every == 0 || k + 1 == steps) record(k + 1);
  }
  out.steps = steps;
  out.final_state = std::move(u);
  return out;
}

DecayRate decay_rate_estimate(std::span<const double> t, std::span<const double> q,
                              double q_ground, double lo, double hi) {
  if (t.size() != q.size()) throw DomainError("decay_rate_estimate: size mismatch");
  std::vector<double> xs;
  std::vector<double> gap;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double g = q[i] - q_ground;
    if (g >= lo && g <= hi) {
      xs.push_back(t[i]);
      gap.push_back(g);
    }
  }
  if (xs.size() < 10)
    throw DomainError("decay_rate_estimate: need at least 10 records above Q_g, got " +
                      std::to_string(xs.size()));
  return DecayRate{fit_log_window(xs, gap, lo, hi)};
}

DecayRate decay_rate_estimate(std::span<const FlowRecord> records, double q_ground, double lo,
                              double hi) {
  std::vector<double> t;
  std::vector<double> q;
  for (const auto& r : records) {
    t.push_back(r.t);
    q.push_back(r.Q);
  }
  return decay_rate_estimate(t, q, q_ground, lo, hi);
}

}  // namespace gfalm

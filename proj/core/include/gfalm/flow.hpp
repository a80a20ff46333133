#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gfalm/fit.hpp"
#include "gfalm/functionals.hpp"

namespace gfalm {

// Explicit reference integrator for the continuous normalized gradient flow
//   du/dt = -A u + lambda(u) |u|^{p-1} u,
// with the exact multiplier lambda(u). Classical four-stage Runge-Kutta; the
// -1/2 D_xx part makes it stiff, so dt must stay inside the RK4 stability
// interval for the largest mode (roughly dt (rho_max/2 + max V + omega) < 2.78).

struct FlowConfig {
  double dt = 0.01;
  double t_final = 1.0;
  bool renormalize_each_step = false;
  int record_every = 1;
  /// Error column reference (||u - ref||_{1,h}).
  std::optional<GridField> reference;
  /// The convergence theory for the flow is one-dimensional; 2D runs need this flag.
  bool allow_2d = false;
};

struct FlowRecord {
  std::int64_t step = 0;
  double t = 0.0;
  double Q = 0.0;
  double drift = 0.0;  ///< | ||u||_{h,p+1}^{p+1} - 1 |
  std::optional<double> err_h1;
};

struct FlowOutcome {
  GridField final_state;
  std::vector<FlowRecord> records;
  std::int64_t steps = 0;
  /// Largest Q(u_{k+1}) - Q(u_k) over all steps (not just records).
  double max_q_increase = 0.0;
  std::vector<std::string> warnings;
};

/// -A u + lambda_exact(u) |u|^{p-1} u. Throws DomainError for the zero field.
GridField flow_rhs(const GridField& u, const Problem& problem);

/// Integrates from u0 (assumed normalized) to t_final. Throws NumericalError with
/// the step index when the state blows up, DomainError for dt <= 0, dt > t_final,
/// or a 2D grid without allow_2d.
FlowOutcome rk4_integrate(const GridField& u0, const Problem& problem, const FlowConfig& config);

/// dt bound 2 / rho_max below which no stiffness warning is issued.
double rk4_stiffness_bound(const Problem& problem);

struct DecayRate {
  LinearFit fit;
};

/// Least-squares slope of ln(Q(t) - Q_g) against t over records with
/// Q - Q_g in [lo, hi]. Throws DomainError with fewer than 10 usable records.
DecayRate decay_rate_estimate(std::span<const double> t, std::span<const double> q, double q_ground,
                              double lo = 1e-12, double hi = std::numeric_limits<double>::infinity());
DecayRate decay_rate_estimate(std::span<const FlowRecord> records, double q_ground,
                              double lo = 1e-12, double hi = std::numeric_limits<double>::infinity());

}  // namespace gfalm

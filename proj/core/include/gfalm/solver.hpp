#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "gfalm/functionals.hpp"
#include "gfalm/grid.hpp"

namespace gfalm {

struct SolverConfig {
  double tau = 0.5;
  /// Stabilization; nullopt selects alpha_min of the problem.
  std::optional<double> alpha;
  /// Stop once ||mu_tilde^{n+1}||_{h,inf} < tol_linf.
  double tol_linf = 1e-11;
  std::int64_t max_iters = 100000;
  int record_every = 1;
  /// When set, records carry ||u^n - reference||_{1,h} after phase alignment.
  std::optional<GridField> reference;
  /// When set, records carry the Lojasiewicz quotient against this Q_g.
  std::optional<double> ground_energy;
  /// Throw NumericalError if Q increases by more than 1e-12 max(1, Q) in a step.
  bool assert_decay = true;
  /// With false, a fixed alpha below alpha_min is accepted. Energy decay is
  /// then no longer guaranteed; used to probe the stability bound.
  bool check_alpha = true;
  /// Keep a copy of u^n at every record point.
  bool keep_snapshots = false;
};

/// Scalars describing u^n and the step u^n -> u^{n+1}. The final record of a
/// run (n = iterations_used) repeats the residual of the step that produced it
/// and has no certificate.
struct IterationRecord {
  std::int64_t n = 0;
  double Q = 0.0;
  double residual_linf = 0.0;  ///< ||mu_tilde^{n+1}||_{h,inf}
  double residual_hm1 = 0.0;   ///< ||mu^n||_{-1,h}
  double lp1_norm = 0.0;       ///< ||u^n||_{h,p+1}
  std::optional<double> err_h1;
  std::optional<double> lojasiewicz_q;
  std::optional<double> certificate;
  double u_tilde_lp1 = 0.0;  ///< ||u_tilde^{n+1}||_{h,p+1}
};

struct StepResult {
  GridField u_next;
  GridField u_tilde;
  GridField mu_tilde;
  double u_tilde_lp1 = 0.0;
  double q_before = 0.0;
  double q_after = 0.0;
  double tau = 0.0;
};

struct SolveOutcome {
  GridField final_state;
  std::vector<IterationRecord> records;
  std::vector<GridField> snapshots;
  bool converged = false;
  std::int64_t iterations_used = 0;
  double Q_final = 0.0;
  double lambda_final = 0.0;
  double alpha = 0.0;
  double min_u_tilde_lp1 = 0.0;
  double max_certificate = 0.0;
  double max_q_increase = 0.0;
};

using RecordSink = std::function<void(const IterationRecord&)>;

/// Q(u^{n+1}) - Q(u^n) + (tau^2 ||mu~||_{1,h}^2 + 4 tau ||mu~||_h^2) / (2 ||u~||_{h,p+1}^2).
/// Non-positive whenever alpha >= alpha_min.
double decay_certificate(const StepResult& step);

/// Fully discrete GFALM: stabilized backward-forward Euler step with the
/// frozen multiplier Q(u^n), followed by L^{p+1} renormalization.
class GfalmSolver {
 public:
  /// Throws DomainError for tau <= 0, tol_linf <= 0, record_every < 1,
  /// max_iters < 0, or a fixed alpha below alpha_min
  /// (unless check_alpha is false).
  GfalmSolver(Problem problem, SolverConfig config);

  const Problem& problem() const noexcept { return problem_; }
  const SolverConfig& config() const noexcept { return config_; }
  double alpha() const noexcept { return alpha_; }

  /// One GFALM step from u (expected on the unit L^{p+1} sphere). `q` may pass
  /// a precomputed Q(u). Throws NumericalError if u_tilde vanishes or turns
  /// non-finite.
  StepResult step(const GridField& u, std::optional<double> q = std::nullopt) const;

  /// Normalizes u0, then iterates until the residual test passes or max_iters.
  /// Each record is handed to `sink` as soon as it is complete.
  SolveOutcome run(GridField u0, const RecordSink& sink = {}) const;

 private:
  IterationRecord describe(std::int64_t n, const GridField& u, double q) const;

  Problem problem_;
  SolverConfig config_;
  double alpha_ = 0.0;
};

/// u / ||u||_{h,p+1}; throws DomainError for the zero field.
GridField normalize_lp(const GridField& u, double p);

}  // namespace gfalm

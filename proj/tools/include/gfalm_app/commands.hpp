#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <gfalm/fit.hpp>

namespace gfalm::app {

enum ExitStatus : int { kOk = 0, kNotConverged = 1, kConfigError = 2, kNumericalError = 3 };

/// Writes iterations.csv, summary.json and final.field into out_dir.
int cmd_solve(const std::filesystem::path& config, const std::filesystem::path& out_dir,
              std::ostream& log);

struct RateEntry {
  double tau = 0.0;
  std::string status;  ///< "converged", "not_converged", "failed"
  std::string message;
  std::int64_t iterations = 0;
  double Q_final = 0.0;
  std::optional<LinearFit> fit;
};

struct RateReport {
  double window_lo = 1e-9;
  double window_hi = 1e-2;
  std::vector<RateEntry> runs;
  /// Whether the slopes are ordered like tau / (1 + tau). Reported only.
  bool ordering_consistent = false;
};

/// ln(err) against n over err in [lo, hi].
LinearFit fit_error_sequence(std::span<const double> n, std::span<const double> err,
                             double lo = 1e-9, double hi = 1e-2);

/// Solves once per tau in out_dir/tau_<i>/ and writes out_dir/rate_report.json.
/// Sub-runs go in parallel up to GFALM_THREADS. Throws ConfigError with fewer
/// than two taus or without a reference.
RateReport run_rate(const std::filesystem::path& config, std::span<const double> taus,
                    const std::filesystem::path& out_dir, std::ostream& log);
int cmd_rate(const std::filesystem::path& config, std::span<const double> taus,
             const std::filesystem::path& out_dir, std::ostream& log);

/// Writes flow.csv and summary.json into out_dir.
int cmd_flow(const std::filesystem::path& config, double dt, double t_final,
             const std::filesystem::path& out_dir, std::ostream& log);

/// Writes probe.json into out_dir.
int cmd_probe(const std::filesystem::path& config, const std::filesystem::path& ground_state,
              const std::filesystem::path& out_dir, std::ostream& log);

/// Suites: soliton, 2d, norms, geometry, flow. Prints a pass/fail table.
int cmd_verify(const std::string& suite, std::ostream& log);

std::vector<double> parse_tau_list(const std::string& csv);

}  // namespace gfalm::app

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include <gfalm/functionals.hpp>
#include <gfalm/grid.hpp>
#include <gfalm/reference.hpp>
#include <gfalm/solver.hpp>

namespace gfalm::app {

/// Invalid or malformed run configuration. Commands map it to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::vector<Axis> axes;
  ProblemParams params;
  double tau = 0.5;
  std::optional<double> alpha;  ///< nullopt is "auto"
  double tol_linf = 1e-11;
  std::int64_t max_iters = 100000;
  int record_every = 1;
  InitialDataSpec initial = initial::Gaussian{};
  /// "none", "exact_soliton", or a field file path.
  std::string reference = "none";
  std::uint64_t seed = 0;
  /// The document as parsed, with defaults filled in.
  nlohmann::ordered_json canonical;

  GridSpec grid() const;
  Problem problem() const;
  SolverConfig solver_config() const;
  std::optional<GridField> load_reference(const Problem& problem) const;
  /// FNV-1a of the canonical JSON dump.
  std::string hash() const;
};

/// Relative paths (initial data files, references) resolve against base_dir.
RunConfig parse_run_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Built-in setups of the two reference experiments.
nlohmann::json soliton_config();
nlohmann::json harmonic_trap_config();

std::string fnv1a_hex(const std::string& text);

}  // namespace gfalm::app

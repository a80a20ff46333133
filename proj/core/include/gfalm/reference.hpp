#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "gfalm/functionals.hpp"
#include "gfalm/grid.hpp"
#include "gfalm/solver.hpp"

namespace gfalm {

/// ||phi*||_{L^q(R)} for phi*(x) = sqrt(2 omega) sech(sqrt(2 omega) x), by
/// adaptive Gauss-Kronrod on (-64, 64).
double soliton_lq_norm(double omega, double q);

/// Interpolant of u* = phi* / ||phi*||_{L^4(R)} (continuum normalization, so
/// the discrete norm is 1 only up to spectral accuracy). 1D grids only.
GridField exact_soliton(double omega, const GridSpec& grid);

namespace initial {

struct Gaussian {
  std::vector<double> center;  ///< empty means the origin
  double width = 1.0;          ///< exp(-|x - c|^2 / (2 width^2))
};
struct ShiftedGaussian {
  std::vector<double> offset;
};
/// (x1 + i x2) times the unit Gaussian; 2D only.
struct Vortex {};
struct SolitonExact {
  double omega = 1.0;
};
struct Constant {};
struct FromFile {
  std::filesystem::path path;
};

}  // namespace initial

using InitialDataSpec = std::variant<initial::Gaussian, initial::ShiftedGaussian, initial::Vortex,
                                     initial::SolitonExact, initial::Constant, initial::FromFile>;

/// Samples the initial data and normalizes in ||.||_{h,p+1}. Throws DomainError for a
/// dims mismatch, a missing file, or a zero sample.
GridField make_initial(const InitialDataSpec& spec, const GridSpec& grid, double p);

struct ReferenceConfig {
  double tau = 0.01;
  std::int64_t steps = 10000;
  double residual_tol = 1e-10;
};

struct ReferenceCertificate {
  double Q = 0.0;
  double lambda = 0.0;
  double residual_linf = 0.0;  ///< ||mu_tilde||_{h,inf} of the last step
  double residual_mu_linf = 0.0;
  double residual_hm1 = 0.0;
  std::int64_t steps = 0;
  std::string config_hash;
  bool valid = false;
};

struct Reference {
  GridField field;
  ReferenceCertificate certificate;
};

/// FNV-1a over a canonical description of problem and reference config.
std::string reference_config_hash(const Problem& problem, const ReferenceConfig& config);

/// Runs GFALM from the normalized Gaussian for exactly config.steps steps.
/// The certificate is valid when the last step residual is <= residual_tol.
Reference make_reference_2d(const Problem& problem, const ReferenceConfig& config = {});

/// Writes <stem>.field and <stem>.json into dir.
void save_reference(const std::filesystem::path& dir, const std::string& stem,
                    const Reference& ref);
Reference load_reference(const std::filesystem::path& dir, const std::string& stem);

}  // namespace gfalm

#pragma once

#include <span>
#include <variant>
#include <vector>

#include "gfalm/grid.hpp"
#include "gfalm/spectral.hpp"

namespace gfalm {

/// External potential V >= 0.
class PotentialSpec {
 public:
  struct Zero {};
  /// V(x) = sum_d gamma_d^2 x_d^2 / 2
  struct Harmonic {
    std::vector<double> gamma;
  };
  struct Sampled {
    GridField samples;
  };
  using Variant = std::variant<Zero, Harmonic, Sampled>;

  PotentialSpec() = default;
  static PotentialSpec zero() { return PotentialSpec(Zero{}); }
  static PotentialSpec harmonic(std::vector<double> gamma) {
    return PotentialSpec(Harmonic{std::move(gamma)});
  }
  static PotentialSpec sampled(GridField samples) {
    return PotentialSpec(Sampled{std::move(samples)});
  }

  const Variant& variant() const noexcept { return value_; }

  /// Node values on `grid`. Throws DomainError on a grid or dimension mismatch,
  /// a complex or negative sample, or a negative gamma.
  std::vector<double> evaluate(const GridSpec& grid) const;

 private:
  explicit PotentialSpec(Variant v) : value_(std::move(v)) {}
  Variant value_ = Zero{};
};

struct ProblemParams {
  double omega = 1.0;
  double beta = -1.0;
  double p = 3.0;
  PotentialSpec potential;

  /// Throws DomainError unless beta < 0 and p > 1 (and both finite).
  void validate() const;
};

/// ProblemParams bound to a grid: caches the potential samples and the
/// spectral symbol so the operators below do not rebuild them.
class Problem {
 public:
  Problem(GridSpec grid, ProblemParams params);

  const GridSpec& grid() const noexcept { return grid_; }
  const ProblemParams& params() const noexcept { return params_; }
  const SpectralMultiplier& symbol() const noexcept { return rho_; }
  std::span<const double> potential() const noexcept { return potential_; }
  double omega() const noexcept { return params_.omega; }
  double beta() const noexcept { return params_.beta; }
  double p() const noexcept { return params_.p; }

  void require_grid(const GridField& u) const;

 private:
  GridSpec grid_;
  ProblemParams params_;
  SpectralMultiplier rho_;
  std::vector<double> potential_;
};

/// |u|^{p-1} u, with |u| = 0 mapped to 0.
GridField nonlinearity(const GridField& u, double p);

/// A_h u = -1/2 D_xx u + (V + omega) u
GridField apply_A(const GridField& u, const Problem& problem);

/// Q_h(u) = 1/2 |u|_{1,h}^2 + h sum V_j |u_j|^2 + omega ||u||_h^2
double quadratic_energy(const GridField& u, const Problem& problem);

/// Q_h(u) / ||u||_{h,p+1}^{p+1}. Throws DomainError for the zero field.
double lambda_tilde(const GridField& u, const Problem& problem);

/// Re<A u, |u|^{p-1} u>_h / ||u||_{h,2p}^{2p}. Throws DomainError for the zero field.
double lambda_exact(const GridField& u, const Problem& problem);

/// mu(u) = A u - lambda_tilde(u) |u|^{p-1} u
GridField residual_mu(const GridField& u, const Problem& problem);

/// G_h(u) = 2/(p+1) (||u||_{h,p+1}^{p+1} - 1)
double constraint_G(const GridField& u, double p);

struct ActionValues {
  double energy = 0.0;  ///< E
  double action = 0.0;  ///< S_omega = E + omega ||phi||^2
  double nehari = 0.0;  ///< K_omega
};

ActionValues action_functionals(const GridField& phi, const Problem& problem);

/// phi = (Q(u) / (-beta))^{1/(p-1)} u
GridField rescale_to_phi(const GridField& u, const Problem& problem);
double rescale_factor(const GridField& u, const Problem& problem);

struct OmegaCheck {
  double lambda0_prime = 0.0;
  bool admissible = false;
  bool dense = false;
  int iterations = 0;
};

/// Smallest eigenvalue of -1/2 D_xx + diag(V); admissible iff omega > -lambda0'.
/// Dense for grids of at most 1024 points, LOBPCG otherwise. Throws
/// ConvergenceError if the iterative eigensolver stalls.
OmegaCheck check_omega(const Problem& problem);

/// 1/2 max{0, max_j (V_j + omega)} + 1/2
double alpha_min(const Problem& problem);

}  // namespace gfalm

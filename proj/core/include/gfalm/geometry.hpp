#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gfalm/functionals.hpp"
#include "gfalm/grid.hpp"

namespace gfalm {

/// Local geometry of the discrete L^{p+1} sphere around a converged ground state.
///
/// The chart is u = (1 + r) u_g + xi with xi in the tangent space
/// { xi : Re<|u_g|^{p-1} u_g, xi>_h = 0 }. Because ||u_g||_{h,p+1} = 1, the
/// constraint direction w = |u_g|^{p-1} u_g satisfies Re<w, u_g>_h = 1.

/// The chart cannot represent the requested point (xi too large, or the
/// normalization root was not found).
class ChartError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GroundStateContext {
 public:
  /// Certifies u_g: ||mu(u_g)||_{h,inf} <= residual_tol and
  /// | ||u_g||_{h,p+1} - 1 | <= 1e-13. Throws DomainError otherwise.
  static GroundStateContext certify(GridField u_g, const Problem& problem,
                                    double residual_tol = 1e-10);

  /// The same ground state times e^{i theta}.
  GroundStateContext rotated(double theta) const;

  const GridField& ground_state() const noexcept { return u_g_; }
  const Problem& problem() const noexcept { return problem_; }
  /// lambda_g = Q(u_g)
  double lambda() const noexcept { return lambda_; }
  /// w = |u_g|^{p-1} u_g
  const GridField& constraint_direction() const noexcept { return w_; }
  double residual_linf() const noexcept { return residual_; }
  bool real_valued() const noexcept { return real_; }

 private:
  GroundStateContext(GridField u_g, Problem problem, GridField w, double lambda, double residual,
                     bool real);

  GridField u_g_;
  Problem problem_;
  GridField w_;
  double lambda_;
  double residual_;
  bool real_;
};

struct ChartCoordinates {
  double r = 0.0;
  GridField xi;
};

ChartCoordinates chart_inverse(const GridField& u, const GroundStateContext& ctx);
GridField chart(double r, const GridField& xi, const GroundStateContext& ctx);
/// v - Re<w, v>_h u_g
GridField project_tangent(const GridField& v, const GroundStateContext& ctx);

/// The r with ||(1 + r) u_g + xi||_{h,p+1} = 1, by bracketed Newton from r = 0.
/// Throws ChartError when ||xi||_{h,p+1} >= 1 or the iteration fails.
double solve_r_of_xi(const GridField& xi, const GroundStateContext& ctx);

/// Hessian of the Lagrangian at u_g, as a real-linear map:
///   L v = A v - lambda_g N'(u_g)[v],
///   N'(u)[v] = |u|^{p-1} v + (p-1) |u|^{p-3} u Re(conj(u) v).
/// On real v and real u_g this is A v - p lambda_g |u_g|^{p-1} v.
GridField apply_L(const GridField& v, const GroundStateContext& ctx);

struct CoercivityReport {
  /// Smallest theta of P L P xi = theta (I - D_xx) xi on the tangent space.
  double min_eig = 0.0;
  bool passes = false;
  std::size_t dimension = 0;
  bool real_subspace = true;
  /// True when the grid exceeded the cap and the eigenproblem was restricted
  /// to low Fourier modes (min_eig is then an upper bound).
  bool restricted = false;
  /// ||L(i u_g)||_h / ||u_g||_h, the neutral phase direction.
  double phase_mode_residual = 0.0;
  /// Re<L(i u_g), i u_g>_h / ||u_g||_{1,h}^2
  double phase_mode_rayleigh = 0.0;
};

/// By default a ground state that is a global rotation of a real field is
/// rotated back and checked on the real subspace; the phase direction is only
/// reported. With complex_extension (or a genuinely complex u_g) the check runs
/// on real and imaginary parts, where i u_g gives a near-zero eigenvalue.
CoercivityReport coercivity_check(const GroundStateContext& ctx,
                                  std::size_t subspace_dim_cap = 4096,
                                  bool complex_extension = false);

/// A random tangent direction from the low Fourier modes, scaled to
/// ||xi||_{1,h} = scale.
GridField sample_tangent(const GroundStateContext& ctx, std::uint64_t seed, double scale,
                         int max_mode = 16);

struct GrowthScale {
  double scale = 0.0;
  std::vector<double> ratios;     ///< (Q(u) - Q(u_g)) / ||u - u_g||_{1,h}^2
  std::vector<double> predicted;  ///< Re<L xi, xi>_h / ||u - u_g||_{1,h}^2
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> skipped;
};

struct GrowthReport {
  std::uint64_t master_seed = 0;
  int max_mode = 16;
  std::vector<GrowthScale> scales;
};

/// Sample k uses derive_seed(seed, 0, k), so its tangent direction is the
/// same at every scale.
GrowthReport quadratic_growth_probe(const GroundStateContext& ctx, int n_samples,
                                    std::span<const double> scales, std::uint64_t seed,
                                    int max_mode = 16);

struct RSweep {
  std::vector<double> xi_lp;     ///< ||xi_k||_{h,p+1}
  std::vector<double> r;         ///< r(xi_k)
  std::vector<double> quotient;  ///< |r| / ||xi_k||_{h,p+1}^2
  /// max/min of the quotient over entries k >= tail_start.
  double tail_spread = 0.0;
};

/// Evaluates r on xi / 2^k for k = 0..halvings.
RSweep r_quadratic_sweep(const GroundStateContext& ctx, const GridField& xi, int halvings = 6,
                         int tail_start = 2);

/// (Q(u) - Q(u_g)) / ||mu(u)||_{-1,h}^2; 0 when the gap is below 1e-14 and
/// +inf when the residual vanishes with a positive gap.
double lojasiewicz_quotient(const GridField& u, const GroundStateContext& ctx);

}  // namespace gfalm

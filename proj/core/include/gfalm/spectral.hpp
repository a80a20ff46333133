#pragma once

#include <span>
#include <vector>

#include "gfalm/grid.hpp"

namespace gfalm {

/// Diagonal Fourier symbol rho_l >= 0 of -D_xx (summed over axes in 2D), in
/// transform order. The Nyquist mode uses (sigma * M / 2)^2, which is what the
/// cardinal-function second derivative gives at the nodes.
class SpectralMultiplier {
 public:
  explicit SpectralMultiplier(const GridSpec& grid);

  /// Per-axis symbol in transform order: (k sigma)^2 with k in [-M/2+1, M/2].
  static std::vector<double> axis_symbol(const Axis& axis);

  const GridSpec& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return rho_; }
  double operator[](std::size_t l) const { return rho_[l]; }
  double max() const noexcept { return max_; }

 private:
  GridSpec grid_;
  std::vector<double> rho_;
  double max_ = 0.0;
};

/// Unnormalized forward DFT over all axes.
std::vector<Complex> forward_transform(const GridField& u);
/// Normalized inverse DFT; `modes` is consumed.
GridField inverse_transform(const GridSpec& grid, std::vector<Complex> modes);

/// Multiplies every Fourier mode l of u by symbol(rho_l). Real input stays real.
template <typename Symbol>
GridField apply_symbol(const GridField& u, const SpectralMultiplier& rho, Symbol&& symbol);

/// D_xx u (in 2D, the sum of both second derivatives).
GridField apply_dxx(const GridField& u);
GridField apply_dxx(const GridField& u, const SpectralMultiplier& rho);

/// Solves (a I - b D_xx) w = rhs exactly, mode by mode. Requires a > 0, b >= 0.
GridField resolvent_solve(const GridField& rhs, double a, double b);
GridField resolvent_solve(const GridField& rhs, double a, double b, const SpectralMultiplier& rho);

/// <u, v>_h = h sum u_j conj(v_j)
Complex inner(const GridField& u, const GridField& v);

double l2_norm(const GridField& u);
/// (h sum |u_j|^q)^{1/q}; q >= 1.
double lp_norm(const GridField& u, double q);
/// h sum |u_j|^q without the root.
double lp_norm_pow(const GridField& u, double q);
double max_norm(const GridField& u);
double h1_seminorm(const GridField& u);
double h1_norm(const GridField& u);
/// Periodic forward-difference seminorm, summed over axes.
double forward_difference_seminorm(const GridField& u);
/// sqrt(Re<u, (I - D_xx)^{-1} u>_h), the dual norm of ||.||_{1,h}.
double hm1_norm(const GridField& u);

/// e^{i theta} v with theta = arg<u, v>_h, the phase rotation of v closest to u
/// in ||.||_h. Returns v unchanged when theta is exactly zero.
GridField phase_align(const GridField& v, const GridField& u);

struct NormSet {
  double l2 = 0.0;
  double lp = 0.0;
  double h1_semi = 0.0;
  double h1 = 0.0;
  double fwd_diff_semi = 0.0;
  double h_minus1 = 0.0;
};

/// All discrete norms of u at once; `q` selects the L^q entry.
NormSet norms(const GridField& u, double q);

// ---------------------------------------------------------------------------

namespace detail {
void restore_realness(const GridField& input, GridField& output) noexcept;
}

template <typename Symbol>
GridField apply_symbol(const GridField& u, const SpectralMultiplier& rho, Symbol&& symbol) {
  std::vector<Complex> modes = forward_transform(u);
  const auto r = rho.values();
  for (std::size_t l = 0; l < modes.size(); ++l) modes[l] *= symbol(r[l]);
  GridField out = inverse_transform(u.grid(), std::move(modes));
  detail::restore_realness(u, out);
  return out;
}

}  // namespace gfalm

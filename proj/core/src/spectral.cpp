#include "gfalm/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "gfalm/error.hpp"

namespace gfalm {
namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per grid shape under a lock and then
// executed with fftw_execute_dft on per-call buffers.
class PlanCache {
 public:
  struct Plans {
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
  };

  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  Plans get(const GridSpec& grid) {
    const Key key{grid.dims(), grid.axis(0).points, grid.dims() == 2 ? grid.axis(1).points : 0};
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    std::array<int, 2> n{key[1], key[2]};
    auto* scratch = fftw_alloc_complex(grid.size());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    Plans p;
    p.forward = fftw_plan_dft(key[0], n.data(), scratch, scratch, FFTW_FORWARD, flags);
    p.inverse = fftw_plan_dft(key[0], n.data(), scratch, scratch, FFTW_BACKWARD, flags);
    fftw_free(scratch);
    plans_.emplace(key, p);
    return p;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

  ~PlanCache() {
    for (auto& [key, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.inverse);
    }
  }

 private:
  using Key = std::array<int, 3>;
  PlanCache() = default;
  std::mutex mutex_;
  std::map<Key, Plans> plans_;
};

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

bool exactly_real(const GridField& u) {
  const auto v = u.values();
  return std::all_of(v.begin(), v.end(), [](const Complex& z) { return z.imag() == 0.0; });
}

}  // namespace

namespace detail {
void restore_realness(const GridField& input, GridField& output) noexcept {
  if (!exactly_real(input)) return;
  for (auto& z : output.values()) z.imag(0.0);
}
}  // namespace detail

std::vector<double> SpectralMultiplier::axis_symbol(const Axis& axis) {
  const int m = axis.points;
  const double sigma = axis.sigma();
  std::vector<double> rho(static_cast<std::size_t>(m));
  for (int l = 0; l < m; ++l) {
    const int k = l <= m / 2 ? l : l - m;
    const double w = k * sigma;
    rho[static_cast<std::size_t>(l)] = w * w;
  }
  return rho;
}

SpectralMultiplier::SpectralMultiplier(const GridSpec& grid) : grid_(grid), rho_(grid.size()) {
  const auto r0 = axis_symbol(grid.axis(0));
  if (grid.dims() == 1) {
    rho_ = r0;
  } else {
    const auto r1 = axis_symbol(grid.axis(1));
    std::size_t k = 0;
    for (double a : r0)
      for (double b : r1) rho_[k++] = a + b;
  }
  max_ = *std::max_element(rho_.begin(), rho_.end());
}

std::vector<Complex> forward_transform(const GridField& u) {
  std::vector<Complex> modes(u.values().begin(), u.values().end());
  const auto plans = PlanCache::instance().get(u.grid());
  fftw_execute_dft(plans.forward, as_fftw(modes.data()), as_fftw(modes.data()));
  return modes;
}

GridField inverse_transform(const GridSpec& grid, std::vector<Complex> modes) {
  if (modes.size() != grid.size()) throw DomainError("inverse_transform: size mismatch");
  const auto plans = PlanCache::instance().get(grid);
  fftw_execute_dft(plans.inverse, as_fftw(modes.data()), as_fftw(modes.data()));
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (auto& z : modes) z *= scale;
  return GridField(grid, std::move(modes));
}

GridField apply_dxx(const GridField& u, const SpectralMultiplier& rho) {
  return apply_symbol(u, rho, [](double r) { return -r; });
}

GridField apply_dxx(const GridField& u) { return apply_dxx(u, SpectralMultiplier(u.grid())); }

GridField resolvent_solve(const GridField& rhs, double a, double b,
                          const SpectralMultiplier& rho) {
  if (!(a > 0.0)) throw DomainError("resolvent_solve: a must be positive");
  if (!(b >= 0.0)) throw DomainError("resolvent_solve: b must be non-negative");
  return apply_symbol(rhs, rho, [a, b](double r) { return 1.0 / (a + b * r); });
}

GridField resolvent_solve(const GridField& rhs, double a, double b) {
  return resolvent_solve(rhs, a, b, SpectralMultiplier(rhs.grid()));
}

Complex inner(const GridField& u, const GridField& v) {
  u.require_same_grid(v);
  Complex s{0.0, 0.0};
  const auto a = u.values();
  const auto b = v.values();
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * std::conj(b[j]);
  return u.grid().cell_volume() * s;
}

double l2_norm(const GridField& u) {
  double s = 0.0;
  for (const auto& z : u.values()) s += std::norm(z);
  return std::sqrt(u.grid().cell_volume() * s);
}

double lp_norm_pow(const GridField& u, double q) {
  if (!(q >= 1.0)) throw DomainError("lp_norm: q must be >= 1");
  double s = 0.0;
  if (q == 2.0) {
    for (const auto& z : u.values()) s += std::norm(z);
  } else if (q == 4.0) {
    for (const auto& z : u.values()) {
      const double n = std::norm(z);
      s += n * n;
    }
  } else {
    for (const auto& z : u.values()) s += std::pow(std::abs(z), q);
  }
  return u.grid().cell_volume() * s;
}

double lp_norm(const GridField& u, double q) { return std::pow(lp_norm_pow(u, q), 1.0 / q); }

double max_norm(const GridField& u) { return u.max_abs(); }

double h1_seminorm(const GridField& u) {
  const GridField d = apply_dxx(u);
  return std::sqrt(std::max(0.0, -inner(d, u).real()));
}

double h1_norm(const GridField& u) {
  const double l2 = l2_norm(u);
  const double semi = h1_seminorm(u);
  return std::sqrt(l2 * l2 + semi * semi);
}

double forward_difference_seminorm(const GridField& u) {
  const GridSpec& g = u.grid();
  const auto v = u.values();
  double s = 0.0;
  if (g.dims() == 1) {
    const int m = g.axis(0).points;
    const double h = g.axis(0).h();
    for (int j = 0; j < m; ++j) {
      const Complex d = (v[static_cast<std::size_t>((j + 1) % m)] - v[static_cast<std::size_t>(j)]) / h;
      s += std::norm(d);
    }
  } else {
    const int m0 = g.axis(0).points;
    const int m1 = g.axis(1).points;
    const double h0 = g.axis(0).h();
    const double h1 = g.axis(1).h();
    auto at = [&](int i, int j) { return v[static_cast<std::size_t>(i) * static_cast<std::size_t>(m1) + static_cast<std::size_t>(j)]; };
    for (int i = 0; i < m0; ++i) {
      for (int j = 0; j < m1; ++j) {
        s += std::norm((at((i + 1) % m0, j) - at(i, j)) / h0);
        s += std::norm((at(i, (j + 1) % m1) - at(i, j)) / h1);
      }
    }
  }
  return std::sqrt(g.cell_volume() * s);
}

double hm1_norm(const GridField& u) {
  const GridField w = resolvent_solve(u, 1.0, 1.0);
  return std::sqrt(std::max(0.0, inner(u, w).real()));
}

GridField phase_align(const GridField& v, const GridField& u) {
  const double theta = std::arg(inner(u, v));
  if (theta == 0.0) return v;
  return std::polar(1.0, theta) * v;
}

NormSet norms(const GridField& u, double q) {
  NormSet n;
  n.l2 = l2_norm(u);
  n.lp = lp_norm(u, q);
  n.h1_semi = h1_seminorm(u);
  n.h1 = std::sqrt(n.l2 * n.l2 + n.h1_semi * n.h1_semi);
  n.fwd_diff_semi = forward_difference_seminorm(u);
  n.h_minus1 = hm1_norm(u);
  return n;
}

}  // namespace gfalm

#include "gfalm/random_fields.hpp"

#include <cstdlib>

#include "gfalm/spectral.hpp"

namespace gfalm {
namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

int wavenumber(int l, int m) { return l <= m / 2 ? l : l - m; }

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  return splitmix(splitmix(splitmix(master) ^ a) ^ (b * 0x632be59bd9b4e019ULL));
}

GridField random_field(const GridSpec& grid, std::mt19937_64& rng, bool complex_valued) {
  std::normal_distribution<double> normal;
  GridField u(grid);
  for (auto& z : u.values()) {
    const double re = normal(rng);
    const double im = complex_valued ? normal(rng) : 0.0;
    z = Complex(re, im);
  }
  return u;
}

GridField random_low_mode_field(const GridSpec& grid, std::mt19937_64& rng, int max_mode,
                                bool real_valued) {
  std::normal_distribution<double> normal;
  std::vector<Complex> modes(grid.size());
  const int m0 = grid.axis(0).points;
  const int m1 = grid.dims() == 2 ? grid.axis(1).points : 1;
  for (int i = 0; i < m0; ++i) {
    if (std::abs(wavenumber(i, m0)) > max_mode) continue;
    for (int j = 0; j < m1; ++j) {
      if (grid.dims() == 2 && std::abs(wavenumber(j, m1)) > max_mode) continue;
      const double re = normal(rng);
      const double im = normal(rng);
      modes[static_cast<std::size_t>(i) * static_cast<std::size_t>(m1) + static_cast<std::size_t>(j)] =
          Complex(re, im);
    }
  }
  GridField u = inverse_transform(grid, std::move(modes));
  if (real_valued)
    for (auto& z : u.values()) z.imag(0.0);
  return u;
}

}  // namespace gfalm

#pragma once

#include <cstdint>
#include <random>

#include "gfalm/grid.hpp"

namespace gfalm {

/// SplitMix64 mix of a master seed with stream indices. Probes seed sample k
/// at scale s with derive_seed(master, s, k) so results do not depend on the
/// order (or thread) in which samples are drawn.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

/// Independent standard normal entries (real and imaginary parts when complex).
GridField random_field(const GridSpec& grid, std::mt19937_64& rng, bool complex_valued = true);

/// Random combination of the Fourier modes with |k_d| <= max_mode on every axis.
/// With real_valued the result is the real part of that combination.
GridField random_low_mode_field(const GridSpec& grid, std::mt19937_64& rng, int max_mode,
                                bool real_valued);

}  // namespace gfalm

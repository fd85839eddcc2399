#pragma once

#include <cstdint>

#include "rwave/forcing.hpp"
#include "rwave/grid.hpp"

namespace rwave {

/// amplitude * exp(-|x|^2 / (2 width^2)) as a physical field.
Field gaussian_field(const GridSpec& grid, double amplitude, double width);

/// (gaussian, 0) at time 0.
StatePair gaussian_data(const GridSpec& grid, double amplitude, double width);

/// Free evolution of P_{>threshold} of the randomized pair (f0, f1), with
/// f0 = f1 = gaussian_field(amplitude, width) and coefficients keyed by
/// (seed, sample) on streams 0 and 1.
FreeWaveForcing randomized_forcing(const GridSpec& grid, std::uint64_t seed, std::uint64_t sample,
                                   double amplitude, double width, double threshold);

}  // namespace rwave

#include "rwave/datasets.hpp"

#include <cmath>

#include "rwave/multipliers.hpp"
#include "rwave/randomizer.hpp"

namespace rwave {

Field gaussian_field(const GridSpec& grid, double amplitude, double width) {
  if (!(width > 0.0)) throw Error("gaussian_field: width must be positive");
  return sample_physical(grid, [&](std::span<const double> x) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return cplx(amplitude * std::exp(-r2 / (2.0 * width * width)), 0.0);
  });
}

StatePair gaussian_data(const GridSpec& grid, double amplitude, double width) {
  return StatePair{gaussian_field(grid, amplitude, width), Field(grid, Rep::physical), 0.0};
}

FreeWaveForcing randomized_forcing(const GridSpec& grid, std::uint64_t seed, std::uint64_t sample,
                                   double amplitude, double width, double threshold) {
  const Field base = gaussian_field(grid, amplitude, width);
  const LatticeBox box = LatticeBox::for_grid(grid);
  Field f0 = randomize(base, sample_coeffs(CoeffKey{seed, sample, 0}, box));
  Field f1 = randomize(base, sample_coeffs(CoeffKey{seed, sample, 1}, box));
  if (threshold > 0.0) {
    f0 = dyadic_project(f0, threshold, DyadicMode::gt);
    f1 = dyadic_project(f1, threshold, DyadicMode::gt);
    f0.drop_imag();
    f1.drop_imag();
  }
  return FreeWaveForcing(StatePair{std::move(f0), std::move(f1), 0.0}, 1.0, "randomized-free-wave");
}

}  // namespace rwave

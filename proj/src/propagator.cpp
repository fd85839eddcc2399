#include "rwave/propagator.hpp"

#include <cmath>

#include "rwave/fft.hpp"

namespace rwave {

void free_evolve_spectral(std::span<cplx> pos_hat, std::span<cplx> vel_hat, const GridSpec& grid,
                          double t) {
  const auto& freq = geometry(grid).freq_abs;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double w = freq[i];
    const double c = std::cos(t * w);
    const double s = std::sin(t * w);
    const double sinc = w > 0.0 ? s / w : t;
    const cplx p = pos_hat[i];
    const cplx v = vel_hat[i];
    pos_hat[i] = c * p + sinc * v;
    vel_hat[i] = -w * s * p + c * v;
  }
}

StatePair free_evolve(const StatePair& u, double t) {
  Field p = to_spectral(u.pos);
  Field v = to_spectral(u.vel);
  free_evolve_spectral(p.values(), v.values(), u.grid(), t);
  return StatePair{transform(p, Direction::inverse), transform(v, Direction::inverse), u.time + t};
}

Field half_wave(const Field& f, double t, int sign) {
  if (sign != 1 && sign != -1) throw Error("half_wave: sign must be +1 or -1");
  const auto& freq = geometry(f.grid()).freq_abs;
  return apply_symbol(f, [&](std::size_t i) { return std::polar(1.0, sign * t * freq[i]); });
}

double linear_energy(const StatePair& u) {
  const Field p = to_spectral(u.pos);
  const auto& freq = geometry(u.grid()).freq_abs;
  double grad = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) grad += freq[i] * freq[i] * std::norm(p[i]);
  double kin = 0.0;
  for (const auto& z : u.vel.values()) kin += std::norm(z);
  return 0.5 * (grad + kin) * u.grid().cell_volume();
}

}  // namespace rwave

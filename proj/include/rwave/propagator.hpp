#pragma once

#include <span>

#include "rwave/grid.hpp"

namespace rwave {

/// Exact linear wave flow on spectral data, in place:
///   pos <- cos(t|xi|) pos + sin(t|xi|)/|xi| vel
///   vel <- -|xi| sin(t|xi|) pos + cos(t|xi|) vel
/// with sin(t*0)/0 := t at the zero mode.
void free_evolve_spectral(std::span<cplx> pos_hat, std::span<cplx> vel_hat, const GridSpec& grid,
                          double t);

/// S(t) applied to a physical state; the result carries time u.time + t.
StatePair free_evolve(const StatePair& u, double t);

/// e^{sign * i t |nabla|} f.
Field half_wave(const Field& f, double t, int sign);

/// 1/2 ||grad u||^2 + 1/2 ||u_t||^2.
double linear_energy(const StatePair& u);

}  // namespace rwave

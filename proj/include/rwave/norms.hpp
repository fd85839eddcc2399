#pragma once

#include <limits>
#include <span>
#include <vector>

#include "rwave/grid.hpp"

namespace rwave {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// (sum |f|^q dV)^(1/q); q = inf gives the grid maximum.
double lp_norm(const Field& f, double q);

/// lp_norm of |x|_reg^weight_pow * f, with |x|_reg = max(|x|, dx/2).
double weighted_lp_norm(const Field& f, double q, double weight_pow);

/// L2 norm computed from the spectrum (Parseval side).
double spectral_l2(const Field& f);

/// ||<xi>^s f^||_2 (or ||xi|^s f^||_2 with the zero mode dropped).
/// Throws for homogeneous s < 0 when the mean is nonzero.
double sobolev_norm(const Field& f, double s, bool homogeneous = false);

struct TimedField {
  double t = 0.0;
  Field field;
};

/// Composite-trapezoid L^q in time of the sampled values; q = inf gives the
/// maximum. Times must be strictly increasing.
double time_lq_norm(std::span<const double> times, std::span<const double> values, double q);

/// || |x|^weight_pow u ||_{L^q_t L^r_x} over the snapshot window.
double mixed_norm(std::span<const TimedField> snaps, double q_t, double r_x,
                  double weight_pow = 0.0);

}  // namespace rwave

#pragma once

#include <array>
#include <span>
#include <vector>

#include "json.hpp"
#include "rwave/forcing.hpp"
#include "rwave/grid.hpp"
#include "rwave/nlw_solver.hpp"
#include "rwave/norms.hpp"

namespace rwave {

using Interval = std::array<double, 2>;

struct PartitionPlan {
  double eps = 0.0;
  std::vector<Interval> intervals;
  std::vector<double> norms;  // ||F||_{L^3 L^6} achieved on each interval
  double total_norm = 0.0;    // over the whole window
};

/// Greedy split of int ||F(t)||_6^3 dt at multiples of eps^3. The integrand
/// is linearly interpolated between snapshots, so each cut is the root of a
/// quadratic and every interval but the last carries exactly eps^3.
PartitionPlan partition_by_forcing(std::span<const TimedField> snaps, double eps);
/// Same, from precomputed ||F(t_i)||_6 values.
PartitionPlan partition_by_norms(std::span<const double> times, std::span<const double> l6,
                                 double eps);

nlohmann::json to_json(const PartitionPlan& plan);

struct GapReport {
  Interval interval{};
  double forcing_norm = 0.0;    // ||F||_{L^3 L^6(I)}
  double energy_gap = 0.0;      // ||grad_{t,x}(u - v)||_{L^inf L^2(I)}
  double strichartz_gap = 0.0;  // ||u - v||_{L^3 L^6(I)}
  bool blowup_forced = false;
  bool blowup_unforced = false;
  long steps = 0;
  double total() const { return energy_gap + strichartz_gap; }
};

/// Forced and unforced runs from the same u0 over the interval, stepped in
/// lockstep with identical step sizes. u0.time is taken to be interval[0].
/// forced_end, when given, receives the forced state at interval[1] for
/// handing off to the next interval.
GapReport perturbation_gap(const Interval& interval, const StatePair& u0,
                           const ForcingProvider& forcing, double dt,
                           const SolverOptions& opts = {}, StatePair* forced_end = nullptr);

nlohmann::json to_json(const GapReport& r);

struct ScatteringPoint {
  double t = 0.0;
  StatePair back_data;    // free_evolve(state(t), -t); empty fields when not kept
  double increment = 0.0;  // energy-norm distance to the previous back_data (0 for the first)
};

/// ||grad(a.pos - b.pos)||_2^2 + ||a.vel - b.vel||_2^2, square-rooted.
double energy_distance(const StatePair& a, const StatePair& b);

std::vector<ScatteringPoint> scattering_profile(const Trajectory& traj, bool keep_back_data = true);

}  // namespace rwave

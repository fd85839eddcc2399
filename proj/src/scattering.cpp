#include "rwave/scattering.hpp"

#include <algorithm>
#include <cmath>

#include "rwave/fft.hpp"
#include "rwave/propagator.hpp"

namespace rwave {

PartitionPlan partition_by_norms(std::span<const double> times, std::span<const double> l6,
                                 double eps) {
  if (!(eps > 0.0)) throw Error("partition_by_forcing: eps must be positive");
  if (times.size() != l6.size()) throw Error("partition_by_forcing: times/norms size mismatch");
  if (times.size() < 2) throw Error("partition_by_forcing: need at least 2 snapshots");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw Error("partition_by_forcing: times must increase");
  }

  std::vector<double> g(l6.size());
  for (std::size_t i = 0; i < l6.size(); ++i) g[i] = l6[i] * l6[i] * l6[i];

  const double quota = eps * eps * eps;
  PartitionPlan plan;
  plan.eps = eps;
  double start = times.front();
  double acc = 0.0;  // integral since start
  double total = 0.0;

  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double h = times[i + 1] - times[i];
    const double slope = (g[i + 1] - g[i]) / h;
    double tau0 = 0.0;               // position inside the segment
    double g0 = g[i];                // integrand at tau0
    double seg_left = 0.5 * h * (g[i] + g[i + 1]);
    total += seg_left;
    while (acc + seg_left >= quota && seg_left > 0.0) {
      // Solve g0 tau + slope tau^2 / 2 = need for tau.
      const double need = quota - acc;
      const double disc = std::max(0.0, g0 * g0 + 2.0 * slope * need);
      const double denom = g0 + std::sqrt(disc);
      double tau = denom > 0.0 ? 2.0 * need / denom : 0.0;
      tau = std::min(tau, h - tau0);
      const double cut = times[i] + tau0 + tau;
      plan.intervals.push_back({start, cut});
      plan.norms.push_back(eps);
      start = cut;
      acc = 0.0;
      seg_left -= need;
      tau0 += tau;
      g0 += slope * tau;
      if (cut >= times[i + 1]) break;
    }
    acc += std::max(0.0, seg_left);
  }
  // Remainder; a zero-length tail from an exact final cut is dropped.
  if (plan.intervals.empty() || start < times.back()) {
    if (!plan.intervals.empty() && times.back() - start <= 1e-12 * (times.back() - times.front())) {
      plan.intervals.back()[1] = times.back();
    } else {
      plan.intervals.push_back({start, times.back()});
      plan.norms.push_back(std::cbrt(acc));
    }
  }
  plan.total_norm = std::cbrt(total);
  return plan;
}

PartitionPlan partition_by_forcing(std::span<const TimedField> snaps, double eps) {
  std::vector<double> times;
  std::vector<double> l6;
  times.reserve(snaps.size());
  l6.reserve(snaps.size());
  for (const auto& s : snaps) {
    times.push_back(s.t);
    l6.push_back(lp_norm(to_physical(s.field), 6.0));
  }
  return partition_by_norms(times, l6, eps);
}

nlohmann::json to_json(const PartitionPlan& plan) {
  nlohmann::json j;
  j["eps"] = plan.eps;
  j["total_norm"] = plan.total_norm;
  j["intervals"] = nlohmann::json::array();
  for (std::size_t i = 0; i < plan.intervals.size(); ++i) {
    j["intervals"].push_back(
        {{"t0", plan.intervals[i][0]}, {"t1", plan.intervals[i][1]}, {"norm", plan.norms[i]}});
  }
  return j;
}

namespace {

double energy_norm_sq_spectral(const Field& dp_hat, const Field& dv_hat) {
  const auto& freq = geometry(dp_hat.grid()).freq_abs;
  double sum = 0.0;
  for (std::size_t i = 0; i < dp_hat.size(); ++i) {
    sum += freq[i] * freq[i] * std::norm(dp_hat[i]) + std::norm(dv_hat[i]);
  }
  return sum * dp_hat.grid().cell_volume();
}

double diff_l6_cubed(const Field& a, const Field& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double w = a[i].real() - b[i].real();
    const double w2 = w * w;
    sum += w2 * w2 * w2;
  }
  return std::sqrt(sum * a.grid().cell_volume());
}

}  // namespace

GapReport perturbation_gap(const Interval& interval, const StatePair& u0,
                           const ForcingProvider& forcing, double dt, const SolverOptions& opts,
                           StatePair* forced_end) {
  if (!(dt > 0.0)) throw Error("perturbation_gap: dt must be positive");
  if (!(interval[1] > interval[0])) throw Error("perturbation_gap: empty interval");
  if (!(forcing.grid() == u0.grid())) throw Error("perturbation_gap: forcing grid differs from data grid");

  const GridSpec& grid = u0.grid();
  const double T = interval[1] - interval[0];
  const long nsteps = std::max<long>(1, static_cast<long>(std::ceil(T / dt - 1e-9)));
  const double h = T / nsteps;

  StatePair start = u0;
  start.time = interval[0];
  Integrator forced(start, opts, true);
  Integrator free_run(start, opts, true);
  const Field zero(grid, Rep::physical);

  GapReport r;
  r.interval = interval;
  double f_prev = lp_norm(forcing.at(interval[0]), 6.0);
  f_prev = f_prev * f_prev * f_prev;
  double w_prev = 0.0;
  double f_int = 0.0;
  double w_int = 0.0;
  for (long n = 1; n <= nsteps; ++n) {
    const double t_mid = interval[0] + (n - 0.5) * h;
    forced.advance(forcing.is_zero() ? zero : forcing.at(t_mid), h);
    free_run.advance(zero, h);
    r.blowup_forced = !forced.finite_and_bounded();
    r.blowup_unforced = !free_run.finite_and_bounded();
    if (r.blowup_forced || r.blowup_unforced) break;
    r.steps = n;

    const Field dp = forced.pos_hat() - free_run.pos_hat();
    const Field dv = forced.vel_hat() - free_run.vel_hat();
    r.energy_gap = std::max(r.energy_gap, std::sqrt(energy_norm_sq_spectral(dp, dv)));

    const double w = diff_l6_cubed(forced.pos(), free_run.pos());
    w_int += 0.5 * h * (w_prev + w);
    w_prev = w;

    double f = lp_norm(forcing.at(interval[0] + n * h), 6.0);
    f = f * f * f;
    f_int += 0.5 * h * (f_prev + f);
    f_prev = f;
  }
  r.strichartz_gap = std::cbrt(w_int);
  r.forcing_norm = std::cbrt(f_int);
  if (forced_end) *forced_end = forced.state();
  return r;
}

nlohmann::json to_json(const GapReport& r) {
  return {{"t0", r.interval[0]},
          {"t1", r.interval[1]},
          {"forcing_norm", r.forcing_norm},
          {"energy_gap", r.energy_gap},
          {"strichartz_gap", r.strichartz_gap},
          {"blowup_forced", r.blowup_forced},
          {"blowup_unforced", r.blowup_unforced},
          {"steps", r.steps}};
}

double energy_distance(const StatePair& a, const StatePair& b) {
  const Field dp = to_spectral(to_physical(a.pos) - to_physical(b.pos));
  const Field dv = to_physical(a.vel) - to_physical(b.vel);
  const auto& freq = geometry(dp.grid()).freq_abs;
  double grad = 0.0;
  for (std::size_t i = 0; i < dp.size(); ++i) grad += freq[i] * freq[i] * std::norm(dp[i]);
  double kin = 0.0;
  for (const auto& z : dv.values()) kin += std::norm(z);
  return std::sqrt((grad + kin) * dp.grid().cell_volume());
}

std::vector<ScatteringPoint> scattering_profile(const Trajectory& traj, bool keep_back_data) {
  std::vector<ScatteringPoint> out;
  out.reserve(traj.states.size());
  StatePair prev;
  bool have_prev = false;
  for (const auto& s : traj.states) {
    StatePair back = free_evolve(s, -s.time);
    ScatteringPoint p;
    p.t = s.time;
    p.increment = have_prev ? energy_distance(back, prev) : 0.0;
    prev = back;
    have_prev = true;
    if (keep_back_data) p.back_data = std::move(back);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace rwave

#include "rwave/nlw_solver.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "rwave/fft.hpp"
#include "rwave/morawetz.hpp"
#include "rwave/norms.hpp"
#include "rwave/propagator.hpp"

namespace rwave {

BlowupError::BlowupError(StatePair last, double time)
    : Error("solver: blowup detected at t = " + std::to_string(time)),
      last_(std::move(last)),
      time_(time) {}

double no_wrap_horizon(const GridSpec& grid, double data_radius) {
  return 0.5 * grid.length() - data_radius;
}

double data_radius(const Field& f, double rel_tol) {
  const Field p = to_physical(f);
  const auto& geo = geometry(p.grid());
  double peak = 0.0;
  for (const auto& z : p.values()) peak = std::max(peak, std::abs(z));
  if (peak == 0.0) return 0.0;
  double r = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (std::abs(p[i]) > rel_tol * peak) {
      // radius_reg is floored at dx/2; the floor only matters at the origin.
      r = std::max(r, geo.radius_reg[i]);
    }
  }
  return r;
}

std::vector<double> dealias_mask(const GridSpec& grid) {
  std::vector<double> mask(grid.size(), 1.0);
  const double cut = grid.n() / 3.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const IVec idx = grid.unravel(i);
    for (int a = 0; a < grid.dim(); ++a) {
      if (std::abs(grid.signed_index(idx[a])) >= cut) {
        mask[i] = 0.0;
        break;
      }
    }
  }
  return mask;
}

namespace {

double gradient_sq_spectral(const Field& pos_hat) {
  const auto& freq = geometry(pos_hat.grid()).freq_abs;
  double sum = 0.0;
  for (std::size_t i = 0; i < pos_hat.size(); ++i) sum += freq[i] * freq[i] * std::norm(pos_hat[i]);
  return sum;
}

double quartic_sum(const Field& pos) {
  double sum = 0.0;
  for (const auto& z : pos.values()) {
    const double v2 = z.real() * z.real();
    sum += v2 * v2;
  }
  return sum;
}

double sum_sq(const Field& f) {
  double sum = 0.0;
  for (const auto& z : f.values()) sum += std::norm(z);
  return sum;
}

}  // namespace

Integrator::Integrator(const StatePair& u, const SolverOptions& opts, bool project_data)
    : grid_(u.grid()),
      opts_(opts),
      pos_hat_(to_spectral(u.pos)),
      vel_hat_(to_spectral(u.vel)),
      time_(u.time) {
  if (opts_.dealias) {
    mask_ = dealias_mask(grid_);
    if (project_data) {
      for (std::size_t i = 0; i < grid_.size(); ++i) {
        pos_hat_[i] *= mask_[i];
        vel_hat_[i] *= mask_[i];
      }
    }
  }
  refresh_pos();
}

void Integrator::advance(const Field& forcing_mid, double dt) {
  kick(forcing_mid, 0.5 * dt);
  free_evolve_spectral(pos_hat_.values(), vel_hat_.values(), grid_, dt);
  refresh_pos();
  kick(forcing_mid, 0.5 * dt);
  time_ += dt;
}

StatePair Integrator::state() const {
  Field vel = transform(vel_hat_, Direction::inverse);
  vel.drop_imag();
  return StatePair{pos_, std::move(vel), time_};
}

bool Integrator::finite_and_bounded() const {
  for (const auto& z : pos_.values()) {
    if (!std::isfinite(z.real()) || std::abs(z.real()) > opts_.blowup_linf) return false;
  }
  for (const auto& z : vel_hat_.values()) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

void Integrator::refresh_pos() {
  pos_ = transform(pos_hat_, Direction::inverse);
  pos_.drop_imag();
}

void Integrator::kick(const Field& forcing, double h) {
  if (!opts_.nonlinear) return;
  Field cubic(grid_, Rep::physical);
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    const double w = forcing[i].real() + pos_[i].real();
    cubic[i] = w * w * w;
  }
  fft_inplace(cubic.values(), grid_, Direction::forward);
  if (opts_.dealias) {
    for (std::size_t i = 0; i < grid_.size(); ++i) vel_hat_[i] -= h * mask_[i] * cubic[i];
  } else {
    for (std::size_t i = 0; i < grid_.size(); ++i) vel_hat_[i] -= h * cubic[i];
  }
}

double energy(const StatePair& u) {
  const Field p = to_spectral(u.pos);
  const Field pos = to_physical(u.pos);
  const double dv = u.grid().cell_volume();
  return (0.5 * gradient_sq_spectral(p) + 0.5 * sum_sq(u.vel) + 0.25 * quartic_sum(pos)) * dv;
}

double energy_flux(const StatePair& u, const Field& forcing) {
  const Field& v = u.pos;
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double vi = v[i].real();
    const double w = forcing[i].real() + vi;
    sum += u.vel[i].real() * (w * w * w - vi * vi * vi);
  }
  return -sum * u.grid().cell_volume();
}

StatePair step(const StatePair& u, const Field& forcing_mid, double dt, const SolverOptions& opts) {
  if (!(dt > 0.0)) throw Error("step: dt must be positive");
  Integrator s(u, opts, false);
  s.advance(forcing_mid, dt);
  if (!s.finite_and_bounded()) throw BlowupError(u, u.time);
  return s.state();
}

Trajectory solve(const StatePair& init, const ForcingProvider& forcing, double T, double dt,
                 int snap_every, const SolverOptions& opts) {
  if (!(dt > 0.0)) throw Error("solve: dt must be positive");
  if (!(T >= 0.0)) throw Error("solve: T must be non-negative");
  if (snap_every < 1) throw Error("solve: snap_every must be >= 1");
  if (opts.horizon && T > *opts.horizon + 1e-12) {
    throw Error("solve: T = " + std::to_string(T) + " exceeds the no-wrap horizon " +
                std::to_string(*opts.horizon));
  }
  if (!(forcing.grid() == init.grid())) throw Error("solve: forcing grid differs from data grid");

  const GridSpec& grid = init.grid();
  const long nsteps = std::max<long>(0, static_cast<long>(std::ceil(T / dt - 1e-9)));
  const double h = nsteps > 0 ? T / nsteps : dt;
  const bool track_morawetz = opts.monitor_morawetz && grid.dim() == 4;
  const double dv = grid.cell_volume();

  Trajectory traj;
  traj.dt = h;
  traj.forcing_ref = forcing.describe();

  Integrator stepper(init, opts, true);
  double l3l6_cubed = 0.0;
  double prev_l6_cubed = 0.0;

  auto record = [&](long n) {
    const StatePair state = stepper.state();
    const Field F = forcing.at(state.time);
    MonitorRecord m;
    m.t = state.time;
    m.energy = (0.5 * gradient_sq_spectral(stepper.pos_hat()) + 0.5 * sum_sq(stepper.vel_hat()) +
                0.25 * quartic_sum(stepper.pos())) *
               dv;
    m.flux = energy_flux(state, F);
    m.morawetz = track_morawetz ? morawetz_functional(state)
                                : std::numeric_limits<double>::quiet_NaN();
    m.linf = lp_norm(state.pos, kInf);
    const double l6 = lp_norm(state.pos, 6.0);
    const double l6_cubed = l6 * l6 * l6;
    if (n > 0) l3l6_cubed += 0.5 * h * (prev_l6_cubed + l6_cubed);
    prev_l6_cubed = l6_cubed;
    m.l3l6_partial = std::cbrt(l3l6_cubed);
    traj.monitors.push_back(m);
    if (opts.observer) opts.observer(state, F);
    if (n % snap_every == 0 || n == nsteps) traj.states.push_back(state);
  };

  record(0);
  for (long n = 1; n <= nsteps; ++n) {
    const double t_mid = stepper.time() + 0.5 * h;
    const Field F_mid = forcing.is_zero() ? Field(grid, Rep::physical) : forcing.at(t_mid);
    const double t_prev = stepper.time();
    stepper.advance(F_mid, h);
    if (!stepper.finite_and_bounded()) {
      traj.blowup = true;
      traj.blowup_time = t_prev + h;
      break;
    }
    record(n);
  }
  return traj;
}

nlohmann::json to_json(const MonitorRecord& m) {
  nlohmann::json j;
  j["t"] = m.t;
  j["energy"] = m.energy;
  j["flux"] = m.flux;
  j["morawetz_density"] = std::isnan(m.morawetz) ? nlohmann::json(nullptr) : nlohmann::json(m.morawetz);
  j["linf"] = m.linf;
  j["l3l6_partial"] = m.l3l6_partial;
  return j;
}

void write_monitors_jsonl(std::ostream& os, const Trajectory& traj) {
  for (const auto& m : traj.monitors) os << to_json(m).dump() << '\n';
}

}  // namespace rwave

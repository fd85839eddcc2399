#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rwave/forcing.hpp"
#include "rwave/grid.hpp"

namespace rwave {

/// Per-step record of monitored functionals.
struct MonitorRecord {
  double t = 0.0;
  double energy = 0.0;
  double flux = 0.0;
  double morawetz = 0.0;      // NaN when the grid is not four-dimensional
  double linf = 0.0;
  double l3l6_partial = 0.0;  // ||v||_{L^3_t L^6_x([0, t])}
};

struct Trajectory {
  std::vector<StatePair> states;  // every snap_every steps, first and last always kept
  std::vector<MonitorRecord> monitors;  // every step
  double dt = 0.0;
  nlohmann::json forcing_ref;
  bool blowup = false;
  double blowup_time = 0.0;
};

/// Thrown by step() when the state leaves the finite range; carries the
/// last finite state.
class BlowupError : public Error {
 public:
  BlowupError(StatePair last, double time);
  const StatePair& last_state() const { return last_; }
  double time() const { return time_; }

 private:
  StatePair last_;
  double time_;
};

struct SolverOptions {
  bool nonlinear = true;
  /// 2/3-rule truncation of each kick increment (and of the initial data).
  bool dealias = true;
  double blowup_linf = 1e6;
  /// Record the Morawetz functional in the monitors (four-dimensional grids).
  bool monitor_morawetz = true;
  /// When set, solve() rejects T beyond this no-wrap horizon.
  std::optional<double> horizon;
  /// Called with the state and F at every step time, t = 0 included.
  std::function<void(const StatePair&, const Field& forcing)> observer;
};

/// l/2 - data_radius: the window before fronts wrap through the boundary.
double no_wrap_horizon(const GridSpec& grid, double data_radius);

/// Largest |x| at which |f| exceeds rel_tol * max|f| (0 for the zero field).
double data_radius(const Field& f, double rel_tol = 1e-6);

/// Keeps modes with every |m_a| < n/3 (signed lattice index).
std::vector<double> dealias_mask(const GridSpec& grid);

/// Integral of 1/2 |grad v|^2 + 1/2 |v_t|^2 + 1/4 v^4.
double energy(const StatePair& u);

/// -sum v_t ((F + v)^3 - v^3) dV: the rate of change of the energy.
double energy_flux(const StatePair& u, const Field& forcing);

/// One Strang step: half kick with (F + v)^3 at the midpoint forcing,
/// exact free drift by dt, half kick again.
StatePair step(const StatePair& u, const Field& forcing_mid, double dt,
               const SolverOptions& opts = {});

/// Strang integrator holding v in both representations and v_t spectrally.
/// solve() is a loop over advance(); the class is public so two runs can be
/// stepped in lockstep.
class Integrator {
 public:
  /// project_data applies the dealiasing mask to the initial data.
  Integrator(const StatePair& u, const SolverOptions& opts, bool project_data);

  double time() const { return time_; }
  const Field& pos() const { return pos_; }
  const Field& pos_hat() const { return pos_hat_; }
  const Field& vel_hat() const { return vel_hat_; }

  void advance(const Field& forcing_mid, double dt);
  StatePair state() const;
  bool finite_and_bounded() const;

 private:
  void refresh_pos();
  void kick(const Field& forcing, double h);

  GridSpec grid_;
  SolverOptions opts_;
  std::vector<double> mask_;
  Field pos_;
  Field pos_hat_;
  Field vel_hat_;
  double time_;
};

/// Integrates -v_tt + lap v = (F + v)^3 on [t0, t0 + T].
Trajectory solve(const StatePair& init, const ForcingProvider& forcing, double T, double dt,
                 int snap_every, const SolverOptions& opts = {});

nlohmann::json to_json(const MonitorRecord& m);

/// One JSON object per line: {t, energy, flux, morawetz_density, linf, l3l6_partial}.
void write_monitors_jsonl(std::ostream& os, const Trajectory& traj);

}  // namespace rwave

#pragma once

#include <functional>
#include <vector>

#include "json.hpp"
#include "rwave/forcing.hpp"
#include "rwave/grid.hpp"
#include "rwave/nlw_solver.hpp"

namespace rwave {

// Four-dimensional Morawetz bookkeeping for -v_tt + lap v = (F + v)^3.
// With r = max(|x|, dx/2) and e = x / r,
//   M(t) = int -(e . grad v) v_t - 3/2 (v / r) v_t dx
// and along solutions
//   dM/dt = 3/4 int v^4/r + 3/4 int v^2/r^3 + int (|grad v|^2 - (e . grad v)^2)/r
//         + int (3/2 v/r + e . grad v) ((F + v)^3 - v^3).

/// M(t) for a real state on a d = 4 grid.
double morawetz_functional(const StatePair& u);

/// The four integrals on the right of dM/dt.
struct MorawetzTerms {
  double bulk = 0.0;     // 3/4 int v^4 / r
  double hardy = 0.0;    // 3/4 int v^2 / r^3
  double angular = 0.0;  // int (|grad v|^2 - (e . grad v)^2) / r
  double forcing = 0.0;  // int (3/2 v/r + e . grad v)((F + v)^3 - v^3)
  double total() const { return bulk + hardy + angular + forcing; }
};

MorawetzTerms morawetz_rhs(const StatePair& u, const Field& forcing);

/// Smallest pointwise value of each sign-definite integrand (bulk, hardy,
/// angular) over the grid.
struct IntegrandMinima {
  double bulk = 0.0;
  double hardy = 0.0;
  double angular = 0.0;
};
IntegrandMinima morawetz_integrand_minima(const StatePair& u);

/// int v^4 / r dx (no 3/4 factor): the integrand of B(T).
double bulk_density(const StatePair& u);

/// Everything the identity and bootstrap checks need at one time.
struct MorawetzSample {
  double t = 0.0;
  double functional = 0.0;
  MorawetzTerms terms;
  double bulk_density = 0.0;    // int v^4 / r
  double energy = 0.0;
  double flux = 0.0;
  double grad_sq = 0.0;         // ||grad v||_2^2
  double vel_sq = 0.0;          // ||v_t||_2^2
  double nonlin_l2 = 0.0;       // ||(F + v)^3 - v^3||_2
  double forcing_l6 = 0.0;      // ||F||_6
  double forcing_weighted = 0.0;  // || |x|^{1/2} F ||_inf
};

MorawetzSample evaluate_sample(const StatePair& u, const Field& forcing);

/// Collects MorawetzSamples at every step when installed as a solver observer.
class MorawetzRecorder {
 public:
  void observe(const StatePair& u, const Field& forcing);
  const std::vector<MorawetzSample>& samples() const { return samples_; }
  /// Observer closure bound to this recorder.
  std::function<void(const StatePair&, const Field&)> observer();

 private:
  std::vector<MorawetzSample> samples_;
};

std::vector<MorawetzSample> morawetz_series(const Trajectory& traj, const ForcingProvider& forcing);

/// B(T): trapezoid in time over the stored states of int v^4 / r.
double morawetz_bulk(const Trajectory& traj);
double morawetz_bulk(const std::vector<MorawetzSample>& series);

struct IdentityResidual {
  double residual = 0.0;        // |M(t_end) - M(t_0) - int RHS dt|
  double rhs_integral = 0.0;    // int RHS dt (trapezoid)
  double functional_change = 0.0;
  std::vector<double> per_interval;  // same residual on each consecutive pair of samples
};

/// Time-integrated identity check (trapezoid over the series).
IdentityResidual morawetz_identity_residual(const std::vector<MorawetzSample>& series);
IdentityResidual morawetz_identity_residual(const Trajectory& traj, const ForcingProvider& forcing);

struct BootstrapReport {
  std::vector<double> times;
  std::vector<double> A;  // sum of |E(t_{n+1}) - E(t_n)| up to each time
  std::vector<double> B;  // int_0^t int v^4/r
  std::vector<double> A_flux;  // trapezoid of |energy_flux|
  double energy0 = 0.0;
  double sup_energy = 0.0;
  double forcing_l3l6_cubed = 0.0;   // ||F||^3_{L^3 L^6}
  double forcing_weighted = 0.0;     // || |x|^{1/2} F ||_{L^2 L^inf}
  bool energy_bound_holds = false;   // sup E <= E(0) + A(T)
  /// Constants implied by the A and B inequalities for this run: the
  /// smallest C making each inequality hold (0 when the right side is 0).
  double implied_constant_A = 0.0;
  double implied_constant_B = 0.0;
  /// B(T) / (sup E + ||grad v||_{L^inf L^2} ||(F+v)^3 - v^3||_{L^1 L^2}).
  double implied_constant_lemma = 0.0;
  bool monotone = false;  // A and B non-decreasing
};

/// A(T), B(T) and the inequality diagnostics from a per-step series.
BootstrapReport bootstrap_quantities(const std::vector<MorawetzSample>& series);
/// Same, evaluating the series on the stored states (use snap_every = 1).
BootstrapReport bootstrap_quantities(const Trajectory& traj, const ForcingProvider& forcing);

/// Fitted family constant: the largest implied constant over runs.
double fit_family_constant(const std::vector<BootstrapReport>& runs, bool use_lemma_form = true);

nlohmann::json to_json(const BootstrapReport& r);

}  // namespace rwave

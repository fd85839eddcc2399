#include "rwave/morawetz.hpp"

#include <algorithm>
#include <cmath>

#include "rwave/fft.hpp"
#include "rwave/norms.hpp"

namespace rwave {
namespace {

// Pointwise kinematic quantities on a d = 4 grid.
struct Kinematics {
  std::vector<double> v;
  std::vector<double> vt;
  std::vector<double> radial;   // e . grad v
  std::vector<double> grad_sq;  // |grad v|^2
  std::vector<double> angular;  // |grad v|^2 - (e . grad v)^2, written as a sum of squares
};

void require_4d(const GridSpec& grid, const char* who) {
  if (grid.dim() != 4) {
    throw Error(std::string(who) + ": Morawetz quantities need a four-dimensional grid, got " +
                grid.describe());
  }
}

Kinematics kinematics(const StatePair& u) {
  const GridSpec& grid = u.grid();
  const auto& geo = geometry(grid);
  const std::size_t n = grid.size();
  const Field vhat = to_spectral(u.pos);

  std::array<std::vector<double>, 4> grad;
  Field buf(grid, Rep::spectral);
  for (int a = 0; a < 4; ++a) {
    for (std::size_t i = 0; i < n; ++i) {
      const double xi = geo.axis_freq[grid.unravel(i)[a]];
      buf[i] = cplx(0.0, xi) * vhat[i];
    }
    fft_inplace(buf.values(), grid, Direction::inverse);
    grad[a].resize(n);
    for (std::size_t i = 0; i < n; ++i) grad[a][i] = buf[i].real();
  }

  Kinematics k;
  k.v.resize(n);
  k.vt.resize(n);
  k.radial.resize(n);
  k.grad_sq.resize(n);
  k.angular.resize(n);
  const Field pos = to_physical(u.pos);
  for (std::size_t i = 0; i < n; ++i) {
    const IVec idx = grid.unravel(i);
    const double r = geo.radius_reg[i];
    double e[4];
    double e2 = 0.0;
    for (int a = 0; a < 4; ++a) {
      e[a] = geo.axis_coord[idx[a]] / r;
      e2 += e[a] * e[a];
    }
    double radial = 0.0;
    double g2 = 0.0;
    for (int a = 0; a < 4; ++a) {
      radial += e[a] * grad[a][i];
      g2 += grad[a][i] * grad[a][i];
    }
    // Lagrange identity keeps the angular part a sum of squares.
    double ang = std::max(0.0, 1.0 - e2) * g2;
    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b) {
        const double c = e[a] * grad[b][i] - e[b] * grad[a][i];
        ang += c * c;
      }
    }
    k.v[i] = pos[i].real();
    k.vt[i] = u.vel[i].real();
    k.radial[i] = radial;
    k.grad_sq[i] = g2;
    k.angular[i] = ang;
  }
  return k;
}

}  // namespace

double morawetz_functional(const StatePair& u) {
  require_4d(u.grid(), "morawetz_functional");
  const auto& r = geometry(u.grid()).radius_reg;
  const Kinematics k = kinematics(u);
  double sum = 0.0;
  for (std::size_t i = 0; i < k.v.size(); ++i) {
    sum += -k.radial[i] * k.vt[i] - 1.5 * k.v[i] / r[i] * k.vt[i];
  }
  return sum * u.grid().cell_volume();
}

MorawetzSample evaluate_sample(const StatePair& u, const Field& forcing) {
  require_4d(u.grid(), "evaluate_sample");
  const GridSpec& grid = u.grid();
  const auto& r = geometry(grid).radius_reg;
  const double dv = grid.cell_volume();
  const Kinematics k = kinematics(u);

  MorawetzSample s;
  s.t = u.time;
  double functional = 0.0, bulk = 0.0, hardy = 0.0, angular = 0.0, forced = 0.0;
  double vel_sq = 0.0, grad_sq = 0.0, quartic = 0.0, flux = 0.0, nonlin_sq = 0.0;
  double f6 = 0.0, fw = 0.0;
  for (std::size_t i = 0; i < k.v.size(); ++i) {
    const double v = k.v[i];
    const double vt = k.vt[i];
    const double ri = r[i];
    const double F = forcing[i].real();
    const double w = F + v;
    const double nonlin = w * w * w - v * v * v;
    const double v2 = v * v;
    functional += -k.radial[i] * vt - 1.5 * v / ri * vt;
    bulk += v2 * v2 / ri;
    hardy += v2 / (ri * ri * ri);
    angular += k.angular[i] / ri;
    forced += (1.5 * v / ri + k.radial[i]) * nonlin;
    vel_sq += vt * vt;
    grad_sq += k.grad_sq[i];
    quartic += v2 * v2;
    flux += vt * nonlin;
    nonlin_sq += nonlin * nonlin;
    const double F2 = F * F;
    f6 += F2 * F2 * F2;
    fw = std::max(fw, std::sqrt(ri) * std::abs(F));
  }
  s.functional = functional * dv;
  s.terms.bulk = 0.75 * bulk * dv;
  s.terms.hardy = 0.75 * hardy * dv;
  s.terms.angular = angular * dv;
  s.terms.forcing = forced * dv;
  s.bulk_density = bulk * dv;
  s.vel_sq = vel_sq * dv;
  s.grad_sq = grad_sq * dv;
  s.energy = 0.5 * s.grad_sq + 0.5 * s.vel_sq + 0.25 * quartic * dv;
  s.flux = -flux * dv;
  s.nonlin_l2 = std::sqrt(nonlin_sq * dv);
  s.forcing_l6 = std::pow(f6 * dv, 1.0 / 6.0);
  s.forcing_weighted = fw;
  return s;
}

MorawetzTerms morawetz_rhs(const StatePair& u, const Field& forcing) {
  return evaluate_sample(u, forcing).terms;
}

IntegrandMinima morawetz_integrand_minima(const StatePair& u) {
  require_4d(u.grid(), "morawetz_integrand_minima");
  const auto& r = geometry(u.grid()).radius_reg;
  const Kinematics k = kinematics(u);
  IntegrandMinima m{kInf, kInf, kInf};
  for (std::size_t i = 0; i < k.v.size(); ++i) {
    const double v2 = k.v[i] * k.v[i];
    m.bulk = std::min(m.bulk, 0.75 * v2 * v2 / r[i]);
    m.hardy = std::min(m.hardy, 0.75 * v2 / (r[i] * r[i] * r[i]));
    m.angular = std::min(m.angular, k.angular[i] / r[i]);
  }
  return m;
}

double bulk_density(const StatePair& u) {
  require_4d(u.grid(), "bulk_density");
  const auto& r = geometry(u.grid()).radius_reg;
  double sum = 0.0;
  for (std::size_t i = 0; i < u.pos.size(); ++i) {
    const double v2 = u.pos[i].real() * u.pos[i].real();
    sum += v2 * v2 / r[i];
  }
  return sum * u.grid().cell_volume();
}

void MorawetzRecorder::observe(const StatePair& u, const Field& forcing) {
  samples_.push_back(evaluate_sample(u, forcing));
}

std::function<void(const StatePair&, const Field&)> MorawetzRecorder::observer() {
  return [this](const StatePair& u, const Field& f) { observe(u, f); };
}

std::vector<MorawetzSample> morawetz_series(const Trajectory& traj, const ForcingProvider& forcing) {
  std::vector<MorawetzSample> out;
  out.reserve(traj.states.size());
  for (const auto& s : traj.states) out.push_back(evaluate_sample(s, forcing.at(s.time)));
  return out;
}

double morawetz_bulk(const Trajectory& traj) {
  double total = 0.0;
  for (std::size_t i = 1; i < traj.states.size(); ++i) {
    const double h = traj.states[i].time - traj.states[i - 1].time;
    total += 0.5 * h * (bulk_density(traj.states[i - 1]) + bulk_density(traj.states[i]));
  }
  return total;
}

double morawetz_bulk(const std::vector<MorawetzSample>& series) {
  double total = 0.0;
  for (std::size_t i = 1; i < series.size(); ++i) {
    total += 0.5 * (series[i].t - series[i - 1].t) *
             (series[i - 1].bulk_density + series[i].bulk_density);
  }
  return total;
}

IdentityResidual morawetz_identity_residual(const std::vector<MorawetzSample>& series) {
  IdentityResidual res;
  if (series.size() < 2) return res;
  for (std::size_t i = 1; i < series.size(); ++i) {
    const double h = series[i].t - series[i - 1].t;
    const double rhs = 0.5 * h * (series[i - 1].terms.total() + series[i].terms.total());
    const double dm = series[i].functional - series[i - 1].functional;
    res.per_interval.push_back(std::abs(dm - rhs));
    res.rhs_integral += rhs;
  }
  res.functional_change = series.back().functional - series.front().functional;
  res.residual = std::abs(res.functional_change - res.rhs_integral);
  return res;
}

IdentityResidual morawetz_identity_residual(const Trajectory& traj, const ForcingProvider& forcing) {
  return morawetz_identity_residual(morawetz_series(traj, forcing));
}

BootstrapReport bootstrap_quantities(const std::vector<MorawetzSample>& series) {
  BootstrapReport rep;
  if (series.empty()) return rep;
  rep.energy0 = series.front().energy;
  double A = 0.0, B = 0.0, A_flux = 0.0, f33 = 0.0, fw2 = 0.0, nonlin_l1l2 = 0.0;
  double sup_grad_sq = 0.0, sup_total_sq = 0.0;
  rep.sup_energy = rep.energy0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    if (i > 0) {
      const auto& p = series[i - 1];
      const double h = s.t - p.t;
      A += std::abs(s.energy - p.energy);
      B += 0.5 * h * (p.bulk_density + s.bulk_density);
      A_flux += 0.5 * h * (std::abs(p.flux) + std::abs(s.flux));
      f33 += 0.5 * h * (std::pow(p.forcing_l6, 3) + std::pow(s.forcing_l6, 3));
      fw2 += 0.5 * h * (p.forcing_weighted * p.forcing_weighted + s.forcing_weighted * s.forcing_weighted);
      nonlin_l1l2 += 0.5 * h * (p.nonlin_l2 + s.nonlin_l2);
    }
    rep.times.push_back(s.t);
    rep.A.push_back(A);
    rep.B.push_back(B);
    rep.A_flux.push_back(A_flux);
    rep.sup_energy = std::max(rep.sup_energy, s.energy);
    sup_grad_sq = std::max(sup_grad_sq, s.grad_sq);
    sup_total_sq = std::max(sup_total_sq, s.grad_sq + s.vel_sq);
  }
  rep.forcing_l3l6_cubed = f33;
  rep.forcing_weighted = std::sqrt(fw2);
  rep.energy_bound_holds = rep.sup_energy <= rep.energy0 + A;
  rep.monotone = std::is_sorted(rep.A.begin(), rep.A.end()) && std::is_sorted(rep.B.begin(), rep.B.end());

  const double e_plus_a = rep.energy0 + A;
  const double drive = f33 + rep.forcing_weighted * std::sqrt(B);
  const double rhs_A = std::sqrt(e_plus_a) * drive;
  rep.implied_constant_A = rhs_A > 0.0 ? A / rhs_A : 0.0;
  const double rhs_B = e_plus_a + std::sqrt(e_plus_a) * drive;
  rep.implied_constant_B = rhs_B > 0.0 ? B / rhs_B : 0.0;
  const double rhs_lemma = sup_total_sq + std::sqrt(sup_grad_sq) * nonlin_l1l2;
  rep.implied_constant_lemma = rhs_lemma > 0.0 ? B / rhs_lemma : 0.0;
  return rep;
}

BootstrapReport bootstrap_quantities(const Trajectory& traj, const ForcingProvider& forcing) {
  return bootstrap_quantities(morawetz_series(traj, forcing));
}

double fit_family_constant(const std::vector<BootstrapReport>& runs, bool use_lemma_form) {
  double c = 0.0;
  for (const auto& r : runs) c = std::max(c, use_lemma_form ? r.implied_constant_lemma : r.implied_constant_B);
  return c;
}

nlohmann::json to_json(const BootstrapReport& r) {
  return {{"A", r.A.empty() ? 0.0 : r.A.back()},
          {"B", r.B.empty() ? 0.0 : r.B.back()},
          {"A_flux", r.A_flux.empty() ? 0.0 : r.A_flux.back()},
          {"energy0", r.energy0},
          {"sup_energy", r.sup_energy},
          {"forcing_l3l6_cubed", r.forcing_l3l6_cubed},
          {"forcing_weighted_l2linf", r.forcing_weighted},
          {"energy_bound_holds", r.energy_bound_holds},
          {"implied_constant_A", r.implied_constant_A},
          {"implied_constant_B", r.implied_constant_B},
          {"implied_constant_lemma", r.implied_constant_lemma},
          {"monotone", r.monotone}};
}

}  // namespace rwave

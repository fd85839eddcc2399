// Acceptance run: one PASS/FAIL line per criterion.
//   rwave_acceptance            all criteria
//   rwave_acceptance 3 7 11     a subset
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "rwave/datasets.hpp"
#include "rwave/deviation_lab.hpp"
#include "rwave/fft.hpp"
#include "rwave/morawetz.hpp"
#include "rwave/multipliers.hpp"
#include "rwave/nlw_solver.hpp"
#include "rwave/norms.hpp"
#include "rwave/philox.hpp"
#include "rwave/propagator.hpp"
#include "rwave/randomizer.hpp"
#include "rwave/scattering.hpp"

using namespace rwave;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string sci(double v) { return fmt("%.3g", v); }

double rel_l2(const Field& a, const Field& b) {
  const Field pa = to_physical(a);
  const Field pb = to_physical(b);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    num += std::norm(pa[i] - pb[i]);
    den += std::norm(pb[i]);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

double horizon_of(const StatePair& u) {
  return no_wrap_horizon(u.grid(), std::max(data_radius(u.pos), data_radius(u.vel)));
}

// Radial shell amp * exp(-(|x| - R)^2 / (2 s^2)).
Field shell(const GridSpec& g, double amp, double R, double s) {
  return sample_physical(g, [&](std::span<const double> x) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    const double d = std::sqrt(r2) - R;
    return cplx(amp * std::exp(-d * d / (2.0 * s * s)), 0.0);
  });
}

// Real white noise with every mode outside |xi_a| <= lattice_max + 1/4 removed.
Field band_limited_noise(const GridSpec& g, std::uint64_t seed) {
  Field f(g, Rep::physical);
  const PhiloxKey key = philox_key(seed);
  for (std::size_t i = 0; i < f.size(); ++i) {
    f[i] = gaussian_pair(philox4x32({static_cast<std::uint32_t>(i), 3u, 0u, 0u}, key)).first;
  }
  f = to_spectral(f);
  const double edge = g.lattice_max() + 0.25;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const IVec idx = g.unravel(i);
    for (int a = 0; a < g.dim(); ++a) {
      if (std::abs(g.freq(idx[a])) > edge) {
        f[i] = 0.0;
        break;
      }
    }
  }
  f = to_physical(f);
  f.drop_imag();
  return f;
}

double max_rel_drift(const Trajectory& tr) {
  const double e0 = tr.monitors.front().energy;
  double worst = 0.0;
  for (const auto& m : tr.monitors) worst = std::max(worst, std::abs(m.energy - e0) / e0);
  return worst;
}

// ---- 1 ----------------------------------------------------------------------

Outcome partition_of_unity() {
  const std::array<std::array<int, 3>, 3> grids = {{{2, 32, 2}, {4, 16, 2}, {4, 32, 4}}};
  const BumpSpec& bump = default_bump();
  double worst_lib = 0.0, worst_oracle = 0.0;
  for (const auto& s : grids) {
    const GridSpec g = make_grid(s[0], s[1], s[2]);
    worst_lib = std::max(worst_lib, partition_of_unity_defect(g));
    // Direct sum over every integer translate within reach of each frequency.
    for (std::size_t i = 0; i < g.size(); ++i) {
      const IVec idx = g.unravel(i);
      double xi[4];
      int base[4];
      for (int a = 0; a < s[0]; ++a) {
        xi[a] = g.freq(idx[a]);
        base[a] = static_cast<int>(std::floor(xi[a])) - 1;
      }
      double sum = 0.0;
      int combos = 1;
      for (int a = 0; a < s[0]; ++a) combos *= 4;
      for (int c = 0; c < combos; ++c) {
        double p = 1.0;
        int rest = c;
        for (int a = 0; a < s[0] && p != 0.0; ++a) {
          p *= bump.profile(xi[a] - (base[a] + rest % 4));
          rest /= 4;
        }
        sum += p;
      }
      worst_oracle = std::max(worst_oracle, std::abs(sum - 1.0));
    }
  }
  const bool ok = worst_lib <= 1e-12 && worst_oracle <= 1e-12;
  return {ok, "defect " + sci(worst_lib) + ", direct sum " + sci(worst_oracle) + " (tol 1e-12)"};
}

// ---- 2 ----------------------------------------------------------------------

Outcome randomizer_identity() {
  const GridSpec g = make_grid(4, 16, 1);
  const LatticeBox box = LatticeBox::for_grid(g);
  const CoeffSet ones = CoeffSet::constant(box, 1.0);
  const CoeffSet zeros = CoeffSet::constant(box, 0.0);
  double worst_unit = 0.0, worst_zero = 0.0, worst_imag = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Field f = band_limited_noise(g, 1000 + s);
    worst_unit = std::max(worst_unit, rel_l2(randomize(f, ones), f));
    worst_zero = std::max(worst_zero, lp_norm(randomize(f, zeros), kInf));
    RandomizeReport rep;
    randomize(f, sample_coeffs(CoeffKey{77, s, 0}, box), &rep);
    worst_imag = std::max(worst_imag, rep.imag_residue);
  }
  const bool ok = worst_unit <= 1e-12 && worst_zero == 0.0 && worst_imag <= 1e-10;
  return {ok, "unit " + sci(worst_unit) + ", zero " + sci(worst_zero) + ", imag residue " +
                  sci(worst_imag) + " over 100 inputs"};
}

// ---- 3 ----------------------------------------------------------------------

Outcome variance_law() {
  const GridSpec g = make_grid(4, 16, 1);
  const Field f = gaussian_field(g, 1.0, 0.7);
  // sum_k ||P_k f||^2 = sum_xi |f^|^2 prod_a sum_{|k_a| <= K} phi(xi_a - k_a)^2
  const int K = g.lattice_max();
  std::vector<double> axis(g.n());
  for (int j = 0; j < g.n(); ++j) {
    double s = 0.0;
    for (int k = -K; k <= K; ++k) {
      const double p = default_bump().profile(g.freq(j) - k);
      s += p * p;
    }
    axis[j] = s;
  }
  const Field fh = to_spectral(f);
  double oracle = 0.0;
  for (std::size_t i = 0; i < fh.size(); ++i) {
    const IVec idx = g.unravel(i);
    double w = 1.0;
    for (int a = 0; a < 4; ++a) w *= axis[idx[a]];
    oracle += w * std::norm(fh[i]);
  }
  oracle *= g.cell_volume();

  McOptions opts;
  opts.threshold = 0.0;
  opts.hs_s = 0.0;
  const std::size_t n = 10000;
  const auto v = mc_functional(f, Field(g, Rep::physical), McFunctional::hs_norm, n, 2024, 0.0,
                               0.0, opts);
  double mean = 0.0;
  for (double x : v) mean += x * x;
  mean /= static_cast<double>(n);
  const double rel = std::abs(mean / oracle - 1.0);
  return {rel <= 0.02, "E||f^w||^2 = " + sci(mean) + ", sum_k ||P_k f||^2 = " + sci(oracle) +
                           ", rel " + sci(rel) + " (tol 0.02)"};
}

// ---- 4 ----------------------------------------------------------------------

Outcome free_flow() {
  const GridSpec g = make_grid(4, 32, 2);
  const StatePair u{gaussian_field(g, 1.0, 0.7), gaussian_field(g, 0.4, 0.7), 0.0};
  const double T = horizon_of(u);
  const double e0 = linear_energy(u);
  double group = 0.0, energy = 0.0;
  const StatePair whole = free_evolve(u, T);
  for (double frac : {0.3, 0.5, 0.81}) {
    const StatePair a = free_evolve(free_evolve(u, frac * T), (1.0 - frac) * T);
    group = std::max({group, rel_l2(a.pos, whole.pos), rel_l2(a.vel, whole.vel)});
    energy = std::max(energy, std::abs(linear_energy(free_evolve(u, frac * T)) / e0 - 1.0));
  }
  energy = std::max(energy, std::abs(linear_energy(whole) / e0 - 1.0));
  const bool ok = group <= 1e-10 && energy <= 1e-10;
  return {ok, "T = " + fmt("%.3f", T) + ", group law " + sci(group) + ", energy " + sci(energy) +
                  " (tol 1e-10)"};
}

// ---- 5 ----------------------------------------------------------------------

Outcome solver_order() {
  const GridSpec g = make_grid(4, 32, 2);
  const ZeroForcing zero(g);
  SolverOptions opts;
  opts.monitor_morawetz = false;

  const StatePair big = gaussian_data(g, 3.0, 1.0);
  std::vector<double> drift;
  for (double dt : {0.2, 0.1, 0.05}) drift.push_back(max_rel_drift(solve(big, zero, 2.0, dt, 1000, opts)));
  const double o1 = std::log2(drift[0] / drift[1]);
  const double o2 = std::log2(drift[1] / drift[2]);

  // Splitting error in the energy scales like amp^2 dt^2; the 1e-6 level needs small data.
  const GridSpec g1 = make_grid(4, 32, 1);
  const StatePair small = gaussian_data(g1, 0.05, 1.0);
  const double dt = 0.25 * g1.dx();
  const double d_fine = max_rel_drift(solve(small, ZeroForcing(g1), 4.0, dt, 1000, opts));
  const bool ok = o1 >= 1.9 && o2 >= 1.9 && d_fine <= 1e-6;
  return {ok, "drift " + sci(drift[0]) + " " + sci(drift[1]) + " " + sci(drift[2]) + ", orders " +
                  fmt("%.2f", o1) + " " + fmt("%.2f", o2) + "; drift at dt = dx/4, T = 4: " +
                  sci(d_fine) + " (tol 1e-6)"};
}

// ---- 6 ----------------------------------------------------------------------

Outcome flux_identity() {
  const GridSpec g = make_grid(4, 32, 2);
  const StatePair u = gaussian_data(g, 1.0, 1.0);
  const FreeWaveForcing F = randomized_forcing(g, 11, 0, 0.5, 1.4, 1.0);
  SolverOptions opts;
  opts.monitor_morawetz = false;
  std::vector<double> res;
  for (double dt : {0.1, 0.05, 0.025}) {
    const Trajectory tr = solve(u, F, 1.0, dt, 1000, opts);
    double flux = 0.0;
    for (std::size_t i = 1; i < tr.monitors.size(); ++i) {
      flux += 0.5 * (tr.monitors[i].t - tr.monitors[i - 1].t) *
              (tr.monitors[i].flux + tr.monitors[i - 1].flux);
    }
    res.push_back(std::abs(tr.monitors.back().energy - tr.monitors.front().energy - flux));
  }
  const double o1 = std::log2(res[0] / res[1]);
  const double o2 = std::log2(res[1] / res[2]);
  const bool ok = o1 >= 1.9 && o2 >= 1.9;
  return {ok, "residual " + sci(res[0]) + " " + sci(res[1]) + " " + sci(res[2]) + ", orders " +
                  fmt("%.2f", o1) + " " + fmt("%.2f", o2) + " (need >= 1.9)"};
}

// ---- 7 ----------------------------------------------------------------------

struct MorawetzRun {
  IdentityResidual identity;
  BootstrapReport boot;
  bool bulk_nonneg = true;
};

MorawetzRun morawetz_run(const StatePair& u, const ForcingProvider& F, double T, double dt) {
  SolverOptions opts;
  opts.monitor_morawetz = false;
  MorawetzRecorder rec;
  opts.observer = rec.observer();
  solve(u, F, T, dt, 1000000, opts);
  MorawetzRun r;
  r.identity = morawetz_identity_residual(rec.samples());
  r.boot = bootstrap_quantities(rec.samples());
  for (const auto& s : rec.samples()) r.bulk_nonneg = r.bulk_nonneg && s.bulk_density >= 0.0;
  for (double b : r.boot.B) r.bulk_nonneg = r.bulk_nonneg && b >= 0.0;
  return r;
}

Outcome morawetz_identity() {
  // The shell keeps clear of the origin and of the box edge for the whole run.
  const GridSpec g = make_grid(4, 48, 3);
  const StatePair u{shell(g, 1.0, 4.7, 0.8), Field(g, Rep::physical), 0.0};
  const ZeroForcing zero(g);
  std::vector<double> res;
  bool bounds = true;
  for (double dt : {0.2, 0.1, 0.05}) {
    const MorawetzRun r = morawetz_run(u, zero, 1.0, dt);
    res.push_back(r.identity.residual);
    bounds = bounds && r.bulk_nonneg && r.boot.monotone && r.boot.energy_bound_holds;
  }
  // Forced runs for the bootstrap bookkeeping.
  const GridSpec g32 = make_grid(4, 32, 2);
  for (std::uint64_t sample : {0u, 1u}) {
    const FreeWaveForcing F = randomized_forcing(g32, 5, sample, 0.3, 1.4, 1.0);
    const MorawetzRun r = morawetz_run(gaussian_data(g32, 1.0, 1.0), F, 1.0, 0.05);
    bounds = bounds && r.bulk_nonneg && r.boot.monotone && r.boot.energy_bound_holds;
  }
  const double r1 = res[0] / res[1];
  const double r2 = res[1] / res[2];
  const bool ok = r1 >= 3.5 && r2 >= 3.5 && bounds;
  return {ok, "residual " + sci(res[0]) + " " + sci(res[1]) + " " + sci(res[2]) + ", shrink " +
                  fmt("%.2f", r1) + " " + fmt("%.2f", r2) + " (need >= 3.5); B >= 0, A/B monotone, sup E <= E(0) + A: " +
                  (bounds ? "yes" : "no")};
}

// ---- 8 ----------------------------------------------------------------------

Outcome khintchine() {
  double worst2 = 0.0, worst_hi = 0.0;
  for (std::uint64_t v = 0; v < 20; ++v) {
    // Coefficient vectors of varying length and spread.
    const std::size_t len = 1 + v % 7 * 3;
    std::vector<cplx> c(len);
    const PhiloxKey key = philox_key(500 + v);
    for (std::size_t i = 0; i < len; ++i) {
      const auto [a, b] = gaussian_pair(philox4x32({static_cast<std::uint32_t>(i), 9u, 0u, 0u}, key));
      c[i] = cplx(a, b) * std::pow(0.8, static_cast<double>(i));
    }
    worst2 = std::max(worst2, std::abs(khintchine_ratio(c, 2.0, 10000, 31 + v) / std::sqrt(0.5) - 1.0));
    for (double p : {4.0, 8.0, 16.0}) {
      // (E|g|^p)^{1/p} = Gamma(1 + p/2)^{1/p} for a standard complex Gaussian.
      const double oracle = std::exp(std::lgamma(1.0 + p / 2.0) / p) / std::sqrt(p);
      const double got = khintchine_ratio(c, p, 1000000, 97 + v);
      worst_hi = std::max(worst_hi, std::abs(got / oracle - 1.0));
    }
  }
  const bool ok = worst2 <= 0.02 && worst_hi <= 0.10;
  return {ok, "p = 2 worst rel error " + sci(worst2) + " (tol 0.02); p in {4,8,16} worst " +
                  sci(worst_hi) + " (tol 0.10) over 20 vectors"};
}

// ---- 9 ----------------------------------------------------------------------

Outcome tails() {
  const GridSpec g = make_grid(4, 32, 2);
  const Field f0 = gaussian_field(g, 1.0, 0.7);
  const Field f1(g, Rep::physical);
  const double T = no_wrap_horizon(g, data_radius(f0));
  const std::vector<McFunctional> fns = {McFunctional::l3l6_free, McFunctional::weighted_l2linf_free};
  const auto samples = mc_functionals(f0, f1, fns, 2000, 9, T, 0.1);
  std::string detail = "T = " + fmt("%.3f", T);
  bool ok = true;
  for (auto fn : fns) {
    const auto& s = samples.at(fn);
    const TailCurve c = tail_estimate(s, default_lambda_grid(s), to_string(fn));
    ok = ok && !c.degenerate && c.r_squared >= 0.9;
    detail += ", " + to_string(fn) + " R^2 " + fmt("%.4f", c.r_squared) + " on " +
              std::to_string(c.qualified_bins) + " bins";
  }
  return {ok, detail + " (need >= 0.9)"};
}

// ---- 10 ---------------------------------------------------------------------

Outcome strichartz_uniformity() {
  const GridSpec frame = make_grid(4, 32, 8);
  const SpectralProfile flat = [](std::span<const double>) { return cplx(1.0, 0.0); };
  std::string detail;
  bool ok = true;
  for (auto [q, r] : {std::pair{2.0, 6.0}, std::pair{3.0, 6.0}}) {
    std::vector<double> lx, ly;
    for (int k = 5; k <= 12; ++k) {
      const double ratio = strichartz_ratio_comoving(flat, IVec{k, 0, 0, 0}, q, r, 2.0 * k, 0.2, frame);
      lx.push_back(std::log(static_cast<double>(k)));
      ly.push_back(std::log(ratio));
    }
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / lx.size();
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / ly.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    const double slope = sxy / sxx;
    ok = ok && std::abs(slope) <= 0.1;
    detail += (detail.empty() ? "" : ", ") + fmt("(%g,", q) + fmt("%g) slope ", r) + fmt("%+.4f", slope);
  }
  return {ok, detail + " (tol 0.1)"};
}

// ---- 11 ---------------------------------------------------------------------

Outcome square_function_sweep() {
  const GridSpec g = make_grid(4, 48, 2);
  const double sigma = 1.0;
  std::vector<double> ratios;
  for (double rho : {2.0, 4.0, 6.0}) {
    // Even in |xi|, so smooth at xi = 0.
    const Field fh = sample_spectral(g, [&](std::span<const double> xi) {
      double n2 = 0.0;
      for (double v : xi) n2 += v * v;
      const double n = std::sqrt(n2);
      return cplx(std::exp(-(n - rho) * (n - rho) / (2 * sigma * sigma)) +
                      std::exp(-(n + rho) * (n + rho) / (2 * sigma * sigma)),
                  0.0);
    });
    Field f = to_physical(fh);
    f.drop_imag();
    ratios.push_back(square_function_ratio(f, 0.6));
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  const double spread = *hi / *lo;

  bool rejected = false;
  try {
    const Field off = sample_physical(g, [](std::span<const double> x) {
      const double d = x[0] - 1.0;
      return cplx(std::exp(-(d * d + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]) / 2.0), 0.0);
    });
    square_function_ratio(off, 0.6);
  } catch (const Error&) {
    rejected = true;
  }
  const bool ok = std::isfinite(spread) && spread <= 5.0 && rejected;
  return {ok, "ratios " + sci(ratios[0]) + " " + sci(ratios[1]) + " " + sci(ratios[2]) +
                  ", max/min " + fmt("%.3f", spread) + " (tol 5); non-radial rejected: " +
                  (rejected ? "yes" : "no")};
}

// ---- 12 ---------------------------------------------------------------------

Outcome partition_scheme() {
  const GridSpec g = make_grid(4, 32, 2);
  const FreeWaveForcing F = randomized_forcing(g, 21, 0, 0.4, 1.4, 1.0);
  const double T = 2.0;
  const int n_snap = 40;
  const auto snaps = sample_forcing(F, 0.0, T, n_snap);
  const double h = T / n_snap;
  const double total = partition_by_forcing(snaps, 1e300).total_norm;
  const PartitionPlan plan = partition_by_forcing(snaps, 0.55 * total);

  // Independent recomputation: Simpson on a 16x finer sampling of ||F(t)||_6^3.
  const int sub = 16;
  const int n_fine = n_snap * sub;
  std::vector<double> tf(n_fine + 1), gf(n_fine + 1);
  for (int i = 0; i <= n_fine; ++i) {
    tf[i] = T * i / n_fine;
    gf[i] = std::pow(lp_norm(F.at(tf[i]), 6.0), 3);
  }
  const double hf = T / n_fine;
  double g2 = 0.0;
  for (int i = 1; i < n_fine; ++i) g2 = std::max(g2, std::abs(gf[i + 1] - 2 * gf[i] + gf[i - 1]) / (hf * hf));
  auto g_at = [&](double t) {
    const double u = std::clamp(t / hf, 0.0, static_cast<double>(n_fine));
    // Cubic through the neighbouring fine samples.
    const int j = std::clamp(static_cast<int>(u) - 1, 0, n_fine - 3);
    double val = 0.0;
    for (int a = 0; a < 4; ++a) {
      double l = 1.0;
      for (int b = 0; b < 4; ++b) {
        if (b != a) l *= (u - (j + b)) / static_cast<double>(a - b);
      }
      val += l * gf[j + a];
    }
    return val;
  };
  auto simpson = [&](double a, double b) {
    const int m = 2 * std::max(2, static_cast<int>(std::ceil((b - a) / hf)));
    const double step = (b - a) / m;
    double s = g_at(a) + g_at(b);
    for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * g_at(a + i * step);
    return s * step / 3.0;
  };
  double worst_excess = 0.0;
  double sum3 = 0.0;
  for (std::size_t j = 0; j < plan.intervals.size(); ++j) {
    const auto& I = plan.intervals[j];
    const double tol = h * h / 12.0 * (I[1] - I[0]) * g2;
    const double recomputed = simpson(I[0], I[1]);
    worst_excess = std::max(worst_excess, std::abs(recomputed - std::pow(plan.norms[j], 3)) / tol);
    sum3 += std::pow(plan.norms[j], 3);
  }
  const double recompose = std::abs(sum3 - std::pow(plan.total_norm, 3)) / std::pow(plan.total_norm, 3);

  // Perturbation gap on the first interval for F and F/2.
  const StatePair u0 = gaussian_data(g, 0.5, 1.0);
  const Interval I = plan.intervals.front();
  const GapReport full = perturbation_gap(I, u0, F.scaled(0.05), 0.05);
  const GapReport half = perturbation_gap(I, u0, F.scaled(0.025), 0.05);
  const double ratio = full.total() / half.total();
  const bool ok = worst_excess <= 1.0 && recompose <= 1e-10 && ratio >= 1.6 && ratio <= 2.4;
  return {ok, std::to_string(plan.intervals.size()) + " intervals, recompose " + sci(recompose) +
                  ", worst recomputation / quadrature bound " + fmt("%.3f", worst_excess) +
                  "; gap ratio " + fmt("%.3f", ratio) + " (need [1.6, 2.4])"};
}

// ---- 13 ---------------------------------------------------------------------

Outcome scattering_probe() {
  const GridSpec g = make_grid(4, 32, 2);
  const StatePair u = gaussian_data(g, 1.0, 0.7);
  const double T = horizon_of(u);
  SolverOptions lin;
  lin.nonlinear = false;
  lin.monitor_morawetz = false;
  double free_worst = 0.0;
  for (const auto& p : scattering_profile(solve(u, ZeroForcing(g), T, 0.1, 1, lin), false)) {
    free_worst = std::max(free_worst, p.increment);
  }

  SolverOptions nl;
  nl.monitor_morawetz = false;
  const auto prof = scattering_profile(solve(u, ZeroForcing(g), T, 0.05, 1, nl), false);
  std::vector<double> inc;
  for (std::size_t i = 1; i < prof.size(); ++i) inc.push_back(prof[i].increment);
  const std::size_t q = inc.size() / 4;
  const double first = std::accumulate(inc.begin(), inc.begin() + q, 0.0) / q;
  const double last = std::accumulate(inc.end() - q, inc.end(), 0.0) / q;
  const bool ok = free_worst <= 1e-10 && last < first / 4.0;
  return {ok, "free increments " + sci(free_worst) + " (tol 1e-10); nonlinear first-quarter mean " +
                  sci(first) + ", last-quarter mean " + sci(last) + " (ratio " +
                  fmt("%.2f", first / last) + ", need > 4)"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"partition of unity", partition_of_unity},
      {"randomizer identity", randomizer_identity},
      {"variance law", variance_law},
      {"free flow exactness", free_flow},
      {"solver order and conservation", solver_order},
      {"energy-flux identity", flux_identity},
      {"morawetz identity", morawetz_identity},
      {"khintchine moments", khintchine},
      {"sub-gaussian tails", tails},
      {"strichartz uniformity", strichartz_uniformity},
      {"square function sweep", square_function_sweep},
      {"partition and perturbation", partition_scheme},
      {"scattering probe", scattering_probe},
  };
  std::set<int> pick;
  for (int i = 1; i < argc; ++i) pick.insert(std::atoi(argv[i]));

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!pick.empty() && !pick.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s [%2d] %s: %s [%.1f s]\n", o.ok ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += o.ok ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}

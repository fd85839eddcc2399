#include <cmath>

#include "doctest.h"
#include "rwave/datasets.hpp"
#include "rwave/fft.hpp"
#include "rwave/morawetz.hpp"
#include "rwave/norms.hpp"
#include "rwave/propagator.hpp"
#include "rwave/scattering.hpp"

using namespace rwave;

namespace {

Field shell(const GridSpec& g, double R, double s) {
  return sample_physical(g, [&](std::span<const double> x) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    const double d = std::sqrt(r2) - R;
    return cplx(std::exp(-d * d / (2.0 * s * s)), 0.0);
  });
}

}  // namespace

TEST_CASE("morawetz functional trivial cases") {
  const GridSpec g = make_grid(4, 8, 1);
  CHECK(morawetz_functional(StatePair::zero(g)) == 0.0);
  CHECK(morawetz_functional(gaussian_data(g, 1.0, 0.8)) == 0.0);
  CHECK_THROWS_AS(morawetz_functional(StatePair::zero(make_grid(3, 8, 1))), Error);
}

TEST_CASE("morawetz functional of a gaussian against direct summation") {
  const GridSpec g = make_grid(4, 32, 2);
  const double s = 0.9;
  const Field v = gaussian_field(g, 1.0, s);
  const StatePair u{v, v, 0.0};
  // grad v = -x v / s^2, so e . grad v = -|x|^2 v / (r s^2).
  const auto& r = geometry(g).radius_reg;
  double direct = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const IVec idx = g.unravel(i);
    double x2 = 0.0;
    for (int a = 0; a < 4; ++a) x2 += g.coord(idx[a]) * g.coord(idx[a]);
    const double vi = v[i].real();
    const double radial = -x2 / (r[i] * s * s) * vi;
    direct += -radial * vi - 1.5 * vi / r[i] * vi;
  }
  direct *= g.cell_volume();
  CHECK(morawetz_functional(u) == doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("linear flow: dM/dt equals the hardy and angular terms") {
  const GridSpec g = make_grid(4, 32, 2);
  const StatePair u = free_evolve(StatePair{shell(g, 3.0, 0.7), Field(g, Rep::physical), 0.0}, 0.3);
  const double h = 1e-4;
  const double dm = (morawetz_functional(free_evolve(u, h)) - morawetz_functional(free_evolve(u, -h))) / (2 * h);
  const MorawetzTerms t = morawetz_rhs(u, Field(g, Rep::physical));
  CHECK(dm == doctest::Approx(t.hardy + t.angular).epsilon(1e-5));
  CHECK(t.forcing == 0.0);
}

TEST_CASE("sign-definite integrands") {
  const GridSpec g = make_grid(4, 16, 1);
  const StatePair u{gaussian_field(g, 1.0, 0.8), gaussian_field(g, 0.5, 1.0), 0.0};
  const IntegrandMinima m = morawetz_integrand_minima(free_evolve(u, 0.4));
  CHECK(m.bulk >= 0.0);
  CHECK(m.hardy >= 0.0);
  CHECK(m.angular >= 0.0);
}

TEST_CASE("bulk of a time-constant trajectory") {
  const GridSpec g = make_grid(4, 8, 1);
  const StatePair u = gaussian_data(g, 1.0, 0.8);
  Trajectory tr;
  for (double t : {0.0, 0.5, 1.5}) {
    StatePair s = u;
    s.time = t;
    tr.states.push_back(s);
  }
  const auto& r = geometry(g).radius_reg;
  double density = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) density += std::pow(u.pos[i].real(), 4) / r[i];
  density *= g.cell_volume();
  CHECK(morawetz_bulk(tr) == doctest::Approx(1.5 * density));
}

TEST_CASE("bootstrap quantities") {
  const GridSpec g = make_grid(4, 16, 1);
  SolverOptions opts;
  opts.monitor_morawetz = false;
  MorawetzRecorder rec;
  opts.observer = rec.observer();
  const FreeWaveForcing F = randomized_forcing(g, 3, 0, 0.3, 0.8, 1.0);
  solve(gaussian_data(g, 0.8, 0.8), F, 0.5, 0.05, 100, opts);
  CHECK(rec.samples().size() == 11);
  const BootstrapReport b = bootstrap_quantities(rec.samples());
  CHECK(b.monotone);
  CHECK(b.energy_bound_holds);
  CHECK(b.B.back() > 0.0);
  CHECK(b.A.back() > 0.0);
  CHECK(b.forcing_l3l6_cubed > 0.0);

  // Unforced: A is only the scheme's energy wiggle.
  MorawetzRecorder rec0;
  opts.observer = rec0.observer();
  solve(gaussian_data(g, 0.3, 0.8), ZeroForcing(g), 0.5, 0.05, 100, opts);
  const BootstrapReport b0 = bootstrap_quantities(rec0.samples());
  CHECK(b0.A.back() < 1e-4 * b0.energy0);
  CHECK(b0.energy_bound_holds);
  CHECK(fit_family_constant({b, b0}) >= b.implied_constant_lemma);
}

TEST_CASE("identity residual of a zero trajectory") {
  const GridSpec g = make_grid(4, 8, 1);
  Trajectory tr;
  tr.states = {StatePair::zero(g, 0.0), StatePair::zero(g, 1.0)};
  CHECK(morawetz_identity_residual(tr, ZeroForcing(g)).residual == 0.0);
}

TEST_CASE("partition of a constant norm") {
  std::vector<double> t, l6;
  for (int i = 0; i <= 20; ++i) {
    t.push_back(0.1 * i);
    l6.push_back(2.0);
  }
  const double eps = 1.0;
  const PartitionPlan p = partition_by_norms(t, l6, eps);
  // Intervals of length eps^3 / c^3 = 1/8 over [0, 2].
  REQUIRE(p.intervals.size() == 16);
  for (std::size_t j = 0; j < p.intervals.size(); ++j) {
    CHECK(p.intervals[j][1] - p.intervals[j][0] == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(p.norms[j] == doctest::Approx(1.0));
  }
  CHECK(p.intervals.back()[1] == doctest::Approx(2.0));
  CHECK(p.total_norm == doctest::Approx(std::cbrt(16.0)));

  std::vector<double> zero(t.size(), 0.0);
  const PartitionPlan z = partition_by_norms(t, zero, 0.1);
  REQUIRE(z.intervals.size() == 1);
  CHECK(z.intervals[0][0] == 0.0);
  CHECK(z.intervals[0][1] == doctest::Approx(2.0));

  const PartitionPlan big = partition_by_norms(t, l6, 100.0);
  CHECK(big.intervals.size() == 1);

  CHECK_THROWS_AS(partition_by_norms(t, l6, 0.0), Error);
  CHECK_THROWS_AS(partition_by_norms({t.data(), 1}, {l6.data(), 1}, 1.0), Error);
}

TEST_CASE("partition of a linearly growing norm cube") {
  // g(t) = ||F||^3 = t, so the integral up to s is s^2 / 2.
  std::vector<double> t, l6;
  for (int i = 0; i <= 10; ++i) {
    t.push_back(0.4 * i);
    l6.push_back(std::cbrt(0.4 * i));
  }
  const PartitionPlan p = partition_by_norms(t, l6, 1.0);
  // Total 8; cuts at sqrt(2 j).
  REQUIRE(p.intervals.size() == 8);
  for (std::size_t j = 0; j < p.intervals.size(); ++j) {
    CHECK(p.intervals[j][1] == doctest::Approx(std::sqrt(2.0 * (j + 1))).epsilon(1e-12));
    CHECK(p.norms[j] == doctest::Approx(1.0));
  }
}

TEST_CASE("perturbation gap") {
  const GridSpec g = make_grid(4, 16, 1);
  const StatePair u0 = gaussian_data(g, 0.5, 0.8);
  const GapReport none = perturbation_gap({0.0, 0.5}, u0, ZeroForcing(g), 0.05);
  CHECK(none.total() == 0.0);
  CHECK(none.forcing_norm == 0.0);
  CHECK(none.steps == 10);

  const FreeWaveForcing F = randomized_forcing(g, 4, 0, 0.02, 0.8, 1.0);
  StatePair end;
  const GapReport r = perturbation_gap({0.0, 0.5}, u0, F, 0.05, {}, &end);
  CHECK(r.total() > 0.0);
  // The forced end state is the forced solve at the same step.
  SolverOptions opts;
  opts.monitor_morawetz = false;
  const Trajectory tr = solve(u0, F, 0.5, 0.05, 100, opts);
  CHECK(end.time == doctest::Approx(0.5));
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(end.pos[i] - tr.states.back().pos[i]));
  CHECK(worst < 1e-14);

  // Second interval from the handed-off state.
  const GapReport r2 = perturbation_gap({0.5, 1.0}, end, F, 0.05);
  CHECK(r2.steps == 10);
  CHECK(std::isfinite(r2.total()));
  CHECK_THROWS_AS(perturbation_gap({1.0, 1.0}, u0, F, 0.05), Error);
}

TEST_CASE("scattering profile of a free trajectory") {
  const GridSpec g = make_grid(4, 16, 1);
  SolverOptions opts;
  opts.nonlinear = false;
  opts.monitor_morawetz = false;
  const Trajectory tr = solve(gaussian_data(g, 1.0, 0.8), ZeroForcing(g), 1.0, 0.1, 2, opts);
  const auto prof = scattering_profile(tr);
  REQUIRE(prof.size() == tr.states.size());
  CHECK(prof.front().increment == 0.0);
  for (const auto& p : prof) {
    CHECK(p.increment < 1e-12);
    CHECK(p.back_data.time == doctest::Approx(0.0));
  }
  CHECK(energy_distance(tr.states.front(), tr.states.front()) == 0.0);
}

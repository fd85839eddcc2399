#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "rwave/datasets.hpp"
#include "rwave/deviation_lab.hpp"
#include "rwave/fft.hpp"
#include "rwave/multipliers.hpp"
#include "rwave/norms.hpp"
#include "rwave/philox.hpp"
#include "rwave/randomizer.hpp"

using namespace rwave;

TEST_CASE("khintchine reference values") {
  CHECK(khintchine_reference(2.0) == doctest::Approx(std::sqrt(0.5)));
  // Gamma(3)^{1/4} / 2
  CHECK(khintchine_reference(4.0) == doctest::Approx(std::pow(2.0, 0.25) / 2.0));
}

TEST_CASE("khintchine ratio") {
  const std::vector<cplx> c = {1.0, cplx(0.0, 2.0), cplx(-0.5, 0.5)};
  const double r = khintchine_ratio(c, 2.0, 20000, 5);
  CHECK(r == doctest::Approx(std::sqrt(0.5)).epsilon(0.02));
  CHECK(khintchine_ratio(c, 2.0, 500, 5) == khintchine_ratio(c, 2.0, 500, 5));
  CHECK_THROWS_AS(khintchine_ratio(c, 1.5, 100, 1), Error);
  CHECK_THROWS_AS(khintchine_ratio(std::vector<cplx>{0.0}, 2.0, 100, 1), Error);
  CHECK_THROWS_AS(khintchine_ratio(c, 2.0, 0, 1), Error);
}

TEST_CASE("admissibility") {
  CHECK(admissible(2, 6) == Admissibility::sharp);
  CHECK(admissible(4, 3) == Admissibility::sharp);
  CHECK(admissible(3, 6) == Admissibility::admissible);
  CHECK(admissible(2, 4) == Admissibility::not_admissible);
  CHECK(admissible(1, 6) == Admissibility::not_admissible);
  CHECK(radial_admissible(2, 4));
  CHECK_FALSE(radial_admissible(2, 3));
}

TEST_CASE("tail of |N(0,1)| against the exact tail") {
  const std::size_t n = 20000;
  std::vector<double> s(n);
  const PhiloxKey key = philox_key(8);
  for (std::size_t i = 0; i < n; ++i) s[i] = std::abs(gaussian_pair(philox4x32({static_cast<std::uint32_t>(i), 1, 0, 0}, key)).first);
  const auto grid = default_lambda_grid(s);
  REQUIRE(grid.size() == 24);
  const TailCurve c = tail_estimate(s, grid, "abs_normal");
  CHECK_FALSE(c.degenerate);
  CHECK(c.r_squared > 0.99);

  // Same least-squares fit on P(|Z| > l) = erfc(l / sqrt 2).
  double mx = 0.0, my = 0.0;
  for (double l : grid) {
    mx += l * l;
    my += std::log(std::erfc(l / std::numbers::sqrt2));
  }
  mx /= grid.size();
  my /= grid.size();
  double sxy = 0.0, sxx = 0.0;
  for (double l : grid) {
    sxy += (l * l - mx) * (std::log(std::erfc(l / std::numbers::sqrt2)) - my);
    sxx += (l * l - mx) * (l * l - mx);
  }
  CHECK(c.slope == doctest::Approx(sxy / sxx).epsilon(0.05));
  CHECK(c.slope == doctest::Approx(-0.5).epsilon(0.25));

  std::ostringstream os;
  write_csv(os, c);
  CHECK(os.str().find("lambda,count,log_tail") != std::string::npos);
  CHECK(to_json(c)["functional"] == "abs_normal");
}

TEST_CASE("degenerate tails") {
  const std::vector<double> flat(2000, 1.0);
  const std::vector<double> grid = {0.5, 1.0, 1.5};
  CHECK(tail_estimate(flat, grid).degenerate);
  CHECK_THROWS_AS(tail_estimate(std::vector<double>(10, 1.0), grid), Error);
}

TEST_CASE("monte carlo samples do not depend on the thread count") {
  const GridSpec g = make_grid(2, 32, 2);
  const Field f0 = gaussian_field(g, 1.0, 0.7);
  const Field f1 = gaussian_field(g, 0.5, 0.7);
  const std::vector<McFunctional> fns = {McFunctional::l3l6_free, McFunctional::hs_norm};
  McOptions one, three;
  one.threads = 1;
  three.threads = 3;
  const auto a = mc_functionals(f0, f1, fns, 12, 4, 1.0, 0.1, one);
  const auto b = mc_functionals(f0, f1, fns, 12, 4, 1.0, 0.1, three);
  for (auto fn : fns) {
    REQUIRE(a.at(fn).size() == 12);
    for (std::size_t i = 0; i < 12; ++i) CHECK(a.at(fn)[i] == b.at(fn)[i]);
  }
  CHECK_THROWS_AS(mc_functional(f0, f1, McFunctional::l3l6_free, 4, 1, 50.0, 0.1), Error);
  CHECK_THROWS_AS(mc_functional(f0, f1, McFunctional::weighted_l2linf_free, 4, 1, 1.0, 0.1), Error);
  McOptions odd;
  odd.threshold = 3.0;
  CHECK_THROWS_AS(mc_functional(f0, f1, McFunctional::hs_norm, 4, 1, 1.0, 0.1, odd), Error);
  CHECK(parse_functional(to_string(McFunctional::weighted_l2linf_free)) == McFunctional::weighted_l2linf_free);
  CHECK_THROWS_AS(parse_functional("l2"), Error);
}

TEST_CASE("monte carlo l3l6 against a direct evaluation") {
  const GridSpec g = make_grid(2, 32, 2);
  const Field f0 = gaussian_field(g, 1.0, 0.7);
  const Field f1(g, Rep::physical);
  McOptions opts;
  opts.threads = 1;
  const double T = 1.0, dt = 0.25;
  const double got = mc_functional(f0, f1, McFunctional::l3l6_free, 1, 6, T, dt, opts)[0];

  // Sample 0: randomize, high-pass, evolve, then trapezoid the L^6 cubes.
  const LatticeBox box = LatticeBox::for_grid(g);
  Field r0 = dyadic_project(randomize(f0, sample_coeffs(CoeffKey{6, 0, 0}, box)), 1.0, DyadicMode::gt);
  const auto& freq = geometry(g).freq_abs;
  std::vector<double> t, l6;
  for (int j = 0; j <= 4; ++j) {
    const double tj = j * dt;
    const Field u = apply_symbol(r0, [&](std::size_t i) { return cplx(std::cos(tj * freq[i]), 0.0); });
    t.push_back(tj);
    l6.push_back(lp_norm(u, 6.0));
  }
  CHECK(got == doctest::Approx(time_lq_norm(t, l6, 3.0)).epsilon(1e-10));
}

TEST_CASE("lab-frame strichartz ratio") {
  const GridSpec g = make_grid(2, 32, 2);
  const Field zero(g, Rep::physical);
  CHECK(std::isnan(strichartz_ratio(zero, IVec{1, 0, 0, 0}, 2, 6, 1.0, 0.1)));
  const Field f = gaussian_field(g, 1.0, 1.0);
  StrichartzInfo info;
  const double r = strichartz_ratio(f, IVec{1, 1, 0, 0}, 3, 6, 1.0, 0.1, &info);
  CHECK(r > 0.0);
  CHECK(info.small_k);
  CHECK(info.lhs / info.rhs == doctest::Approx(r));
  CHECK_THROWS_AS(strichartz_ratio(f, IVec{1, 0, 0, 0}, 2, 4, 1.0, 0.1), Error);
}

TEST_CASE("co-moving probe matches the lab frame when both fit") {
  // A packet at k = (2, 0) over a short window stays inside a P = 8 box, so
  // both frames integrate the same modulus.
  const GridSpec lab = make_grid(2, 64, 8);
  const GridSpec frame = make_grid(2, 32, 8);
  const SpectralProfile flat = [](std::span<const double>) { return cplx(1.0, 0.0); };
  const IVec k{2, 0, 0, 0};
  // f^ = 1 on the support of psi(. - k), so P_k f has spectrum psi(. - k).
  const Field fh = sample_spectral(lab, [&](std::span<const double> xi) {
    return cplx(std::abs(xi[0] - 2.0) <= 0.8 && std::abs(xi[1]) <= 0.8 ? 1.0 : 0.0, 0.0);
  });
  Field f = to_physical(fh);
  const double a = strichartz_ratio(f, k, 3, 6, 2.0, 0.1);
  const double b = strichartz_ratio_comoving(flat, k, 3, 6, 2.0, 0.1, frame);
  CHECK(b == doctest::Approx(a).epsilon(1e-6));
}

TEST_CASE("square function against per-k projections") {
  const GridSpec g = make_grid(2, 32, 2);
  const Field f = sample_physical(g, [](std::span<const double> x) {
    return cplx(std::exp(-((x[0] - 0.4) * (x[0] - 0.4) + x[1] * x[1]) / 1.5), 0.0);
  });
  const Field S = square_function(f);
  Field direct(g, Rep::physical);
  const int K = g.lattice_max();
  for (int k0 = -K; k0 <= K; ++k0) {
    for (int k1 = -K; k1 <= K; ++k1) {
      const Field pk = to_physical(unit_project(f, IVec{k0, k1, 0, 0}));
      for (std::size_t i = 0; i < g.size(); ++i) direct[i] += std::norm(pk[i]);
    }
  }
  double worst = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    worst = std::max(worst, std::abs(S[i] - direct[i]));
    peak = std::max(peak, std::abs(direct[i]));
  }
  CHECK(worst / peak < 1e-12);
}

TEST_CASE("radial deviation and square function ratio preconditions") {
  const GridSpec g = make_grid(4, 16, 1);
  const Field radial = gaussian_field(g, 1.0, 0.8);
  CHECK(radial_deviation(radial) < 1e-14);
  const Field off = sample_physical(g, [](std::span<const double> x) {
    return cplx(std::exp(-((x[0] - 0.5) * (x[0] - 0.5) + x[1] * x[1] + x[2] * x[2] + x[3] * x[3])), 0.0);
  });
  CHECK(radial_deviation(off) > 1e-3);
  CHECK_THROWS_AS(square_function_ratio(off, 0.6), Error);
  CHECK(std::isnan(square_function_ratio(Field(g, Rep::physical), 0.6)));
  CHECK(square_function_ratio(radial, 0.6) > 0.0);
  CHECK_THROWS_AS(square_function_ratio(gaussian_field(make_grid(3, 8, 1), 1.0, 0.8), 0.6), Error);
}

TEST_CASE("experiment manifest") {
  const GridSpec g = make_grid(4, 16, 1);
  const std::vector<McFunctional> fns = {McFunctional::l3l6_free};
  const auto j = experiment_manifest(g, fns, 100, 3, 1.0, 0.1, McOptions{});
  CHECK(j.dump().find("l3l6_free") != std::string::npos);
  CHECK(j.dump().find("100") != std::string::npos);
}

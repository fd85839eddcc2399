#include "rwave/deviation_lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "rwave/fft.hpp"
#include "rwave/nlw_solver.hpp"
#include "rwave/norms.hpp"
#include "rwave/philox.hpp"
#include "rwave/randomizer.hpp"

namespace rwave {

// ---- Khintchine ----------------------------------------------------------------

double khintchine_reference(double p) {
  return std::exp(std::lgamma(1.0 + 0.5 * p) / p) / std::sqrt(p);
}

double khintchine_ratio(std::span<const cplx> c, double p, std::size_t n_samples,
                        std::uint64_t seed) {
  if (!(p >= 2.0)) throw Error("khintchine_ratio: p must be >= 2, got " + std::to_string(p));
  if (n_samples == 0) throw Error("khintchine_ratio: n_samples must be positive");
  double norm2 = 0.0;
  for (const auto& z : c) norm2 += std::norm(z);
  if (!(norm2 > 0.0)) throw Error("khintchine_ratio: coefficient vector has zero norm");

  const PhiloxKey key = philox_key(seed);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  // Moments are accumulated relative to ||c||^p to keep large p in range.
  double acc = 0.0;
  for (std::size_t s = 0; s < n_samples; ++s) {
    cplx sum = 0.0;
    for (std::size_t n = 0; n < c.size(); ++n) {
      const PhiloxCounter ctr{static_cast<std::uint32_t>(n), 0x4b48u,
                              static_cast<std::uint32_t>(s),
                              static_cast<std::uint32_t>(s >> 32)};
      const auto [z1, z2] = gaussian_pair(philox4x32(ctr, key));
      sum += c[n] * cplx(z1 * inv_sqrt2, z2 * inv_sqrt2);
    }
    acc += std::pow(std::norm(sum) / norm2, 0.5 * p);
  }
  return std::pow(acc / static_cast<double>(n_samples), 1.0 / p) / std::sqrt(p);
}

// ---- Monte Carlo -----------------------------------------------------------------

std::string to_string(McFunctional f) {
  switch (f) {
    case McFunctional::l3l6_free: return "l3l6_free";
    case McFunctional::weighted_l2linf_free: return "weighted_l2linf_free";
    case McFunctional::hs_norm: return "hs_norm";
  }
  return "?";
}

McFunctional parse_functional(const std::string& name) {
  if (name == "l3l6_free") return McFunctional::l3l6_free;
  if (name == "weighted_l2linf_free") return McFunctional::weighted_l2linf_free;
  if (name == "hs_norm") return McFunctional::hs_norm;
  throw Error("unknown functional '" + name +
              "' (expected l3l6_free, weighted_l2linf_free or hs_norm)");
}

namespace {

struct McPlan {
  GridSpec grid;
  Field f0_hat;
  Field f1_hat;
  bool has_f1 = false;
  std::vector<double> highpass;  // empty when disabled
  std::vector<double> times;
  CVec rotor;                    // e^{i |xi| h}
  std::vector<double> weight;    // |x|_reg^{1/2}
  bool want_l3l6 = false;
  bool want_weighted = false;
  bool want_hs = false;
  double hs_s = 0.0;
  LatticeBox box;
};

struct SampleValues {
  double l3l6 = 0.0;
  double weighted = 0.0;
  double hs = 0.0;
};

SampleValues evaluate_mc_sample(const McPlan& plan, std::uint64_t seed, std::uint64_t index) {
  const GridSpec& grid = plan.grid;
  const std::size_t N = grid.size();
  const auto& freq = geometry(grid).freq_abs;
  const double dv = grid.cell_volume();

  CVec a(N);
  CVec b(N);
  {
    const CoeffSet g = sample_coeffs(CoeffKey{seed, index, 0}, plan.box);
    const CVec mg = randomization_symbol(grid, g);
    for (std::size_t i = 0; i < N; ++i) a[i] = mg[i] * plan.f0_hat[i];
  }
  if (plan.has_f1) {
    const CoeffSet h = sample_coeffs(CoeffKey{seed, index, 1}, plan.box);
    const CVec mh = randomization_symbol(grid, h);
    for (std::size_t i = 0; i < N; ++i) b[i] = mh[i] * plan.f1_hat[i];
  }
  if (!plan.highpass.empty()) {
    for (std::size_t i = 0; i < N; ++i) {
      a[i] *= plan.highpass[i];
      b[i] *= plan.highpass[i];
    }
  }

  SampleValues out;
  if (plan.want_hs) {
    double sum = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      sum += std::pow(1.0 + freq[i] * freq[i], plan.hs_s) * std::norm(a[i]);
    }
    out.hs = std::sqrt(sum * dv);
  }
  if (!plan.want_l3l6 && !plan.want_weighted) return out;

  // u_hat(t) = alpha e^{i w t} + beta e^{-i w t} for w > 0; a + t b at w = 0.
  const cplx a0 = a[0];
  const cplx b0 = b[0];
  CVec& alpha = a;
  CVec& beta = b;
  for (std::size_t i = 1; i < N; ++i) {
    const cplx bw = b[i] / cplx(0.0, freq[i]);
    const cplx al = 0.5 * (a[i] + bw);
    const cplx be = 0.5 * (a[i] - bw);
    alpha[i] = al;
    beta[i] = be;
  }
  auto spectrum_now = [&](double t, std::size_t i) {
    return i == 0 ? a0 + t * b0 : alpha[i] + beta[i];
  };
  auto advance = [&]() {
    for (std::size_t i = 1; i < N; ++i) {
      alpha[i] *= plan.rotor[i];
      beta[i] *= std::conj(plan.rotor[i]);
    }
  };

  const std::size_t nt = plan.times.size();
  std::vector<double> l6(nt);
  std::vector<double> wmax(nt);
  CVec buf(N);
  auto measure = [&](std::size_t j, bool imag_part) {
    double s6 = 0.0;
    double wm = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double v = imag_part ? buf[i].imag() : buf[i].real();
      const double v2 = v * v;
      s6 += v2 * v2 * v2;
      if (plan.want_weighted) wm = std::max(wm, plan.weight[i] * std::abs(v));
    }
    l6[j] = std::pow(s6 * dv, 1.0 / 6.0);
    wmax[j] = wm;
  };

  // Two real snapshots share one inverse transform: IFFT(u_hat(t1) + i u_hat(t2)).
  std::size_t j = 0;
  while (j < nt) {
    const bool pair = j + 1 < nt;
    for (std::size_t i = 0; i < N; ++i) buf[i] = spectrum_now(plan.times[j], i);
    advance();
    if (pair) {
      for (std::size_t i = 0; i < N; ++i) {
        buf[i] += cplx(0.0, 1.0) * spectrum_now(plan.times[j + 1], i);
      }
      advance();
    }
    fft_inplace(buf, grid, Direction::inverse);
    measure(j, false);
    if (pair) measure(j + 1, true);
    j += pair ? 2 : 1;
  }
  if (plan.want_l3l6) out.l3l6 = time_lq_norm(plan.times, l6, 3.0);
  if (plan.want_weighted) out.weighted = time_lq_norm(plan.times, wmax, 2.0);
  return out;
}

bool is_zero_field(const Field& f) {
  return std::all_of(f.values().begin(), f.values().end(),
                     [](const cplx& z) { return z == cplx(0.0, 0.0); });
}

}  // namespace

std::map<McFunctional, std::vector<double>> mc_functionals(
    const Field& f0, const Field& f1, std::span<const McFunctional> functionals,
    std::size_t n_samples, std::uint64_t seed, double T, double dt, const McOptions& opts) {
  if (!(f0.grid() == f1.grid())) throw Error("mc_functional: f0 and f1 grids differ");
  if (functionals.empty()) throw Error("mc_functional: no functional requested");
  const GridSpec& grid = f0.grid();

  McPlan plan;
  plan.grid = grid;
  plan.box = LatticeBox::for_grid(grid);
  plan.hs_s = opts.hs_s;
  for (auto f : functionals) {
    plan.want_l3l6 |= f == McFunctional::l3l6_free;
    plan.want_weighted |= f == McFunctional::weighted_l2linf_free;
    plan.want_hs |= f == McFunctional::hs_norm;
  }
  const bool timed = plan.want_l3l6 || plan.want_weighted;
  if (plan.want_weighted && grid.dim() != 4) {
    throw Error("mc_functional: weighted_l2linf_free needs a four-dimensional grid");
  }
  if (opts.threshold < 0.0) throw Error("mc_functional: threshold must be >= 0");
  if (opts.threshold > 0.0) {
    check_dyadic(opts.threshold);
    plan.highpass = dyadic_symbol(grid, opts.threshold, DyadicMode::gt);
  }

  if (timed) {
    if (!(T > 0.0)) throw Error("mc_functional: T must be positive");
    if (!(dt > 0.0)) throw Error("mc_functional: dt must be positive");
    const double horizon =
        opts.horizon ? *opts.horizon
                     : no_wrap_horizon(grid, std::max(data_radius(f0), data_radius(f1)));
    if (T > horizon + 1e-12) {
      throw Error("mc_functional: T = " + std::to_string(T) + " exceeds the no-wrap horizon " +
                  std::to_string(horizon));
    }
    const long nsteps = std::max<long>(1, static_cast<long>(std::ceil(T / dt - 1e-9)));
    const double h = T / nsteps;
    plan.times.resize(nsteps + 1);
    for (long j = 0; j <= nsteps; ++j) plan.times[j] = j * h;
    const auto& freq = geometry(grid).freq_abs;
    plan.rotor.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) plan.rotor[i] = std::polar(1.0, freq[i] * h);
    if (plan.want_weighted) {
      const auto& r = geometry(grid).radius_reg;
      plan.weight.resize(grid.size());
      for (std::size_t i = 0; i < grid.size(); ++i) plan.weight[i] = std::sqrt(r[i]);
    }
  }

  plan.f0_hat = to_spectral(f0);
  plan.f1_hat = to_spectral(f1);
  plan.has_f1 = !is_zero_field(f1);

  std::vector<SampleValues> values(n_samples);
  int threads = opts.threads > 0 ? opts.threads
                                 : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = static_cast<int>(std::min<std::size_t>(threads, std::max<std::size_t>(1, n_samples)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&]() {
    try {
      for (std::size_t i = next++; i < n_samples; i = next++) {
        values[i] = evaluate_mc_sample(plan, seed, i);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mu);
      if (!failure) failure = std::current_exception();
      next = n_samples;
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::map<McFunctional, std::vector<double>> out;
  for (auto f : functionals) {
    auto& list = out[f];
    list.resize(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
      list[i] = f == McFunctional::l3l6_free          ? values[i].l3l6
                : f == McFunctional::weighted_l2linf_free ? values[i].weighted
                                                          : values[i].hs;
    }
  }
  return out;
}

std::vector<double> mc_functional(const Field& f0, const Field& f1, McFunctional functional,
                                  std::size_t n_samples, std::uint64_t seed, double T, double dt,
                                  const McOptions& opts) {
  const McFunctional one[] = {functional};
  return mc_functionals(f0, f1, one, n_samples, seed, T, dt, opts).at(functional);
}

// ---- Tails ---------------------------------------------------------------------------

TailCurve tail_estimate(std::span<const double> samples, std::span<const double> lambda_grid,
                        std::string functional_id) {
  if (samples.size() < 1000) {
    throw Error("tail_estimate: need at least 1000 samples, got " + std::to_string(samples.size()));
  }
  for (std::size_t i = 1; i < lambda_grid.size(); ++i) {
    if (!(lambda_grid[i] > lambda_grid[i - 1])) {
      throw Error("tail_estimate: lambda grid must be strictly increasing");
    }
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());

  TailCurve c;
  c.n_samples = sorted.size();
  c.functional_id = std::move(functional_id);
  c.lambdas.assign(lambda_grid.begin(), lambda_grid.end());
  const double n = static_cast<double>(c.n_samples);
  for (double lam : c.lambdas) {
    const auto above = static_cast<std::size_t>(
        sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), lam));
    c.counts.push_back(above);
    c.empirical_log_tail.push_back(above > 0 ? std::log(above / n)
                                             : -std::numeric_limits<double>::infinity());
  }

  if (sorted.front() == sorted.back()) {
    c.degenerate = true;
    c.r_squared = std::numeric_limits<double>::quiet_NaN();
    c.slope = std::numeric_limits<double>::quiet_NaN();
    return c;
  }

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
  std::size_t m = 0;
  for (std::size_t i = 0; i < c.lambdas.size(); ++i) {
    if (c.counts[i] < kMinExceedances) continue;
    const double x = c.lambdas[i] * c.lambdas[i];
    const double y = c.empirical_log_tail[i];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
    ++m;
  }
  c.qualified_bins = m;
  if (m < 3) {
    c.degenerate = true;
    c.r_squared = std::numeric_limits<double>::quiet_NaN();
    c.slope = std::numeric_limits<double>::quiet_NaN();
    return c;
  }
  const double mx = sx / m;
  const double my = sy / m;
  const double cxx = sxx - m * mx * mx;
  const double cxy = sxy - m * mx * my;
  const double cyy = syy - m * my * my;
  if (!(cxx > 0.0)) {
    c.degenerate = true;
    c.r_squared = std::numeric_limits<double>::quiet_NaN();
    c.slope = std::numeric_limits<double>::quiet_NaN();
    return c;
  }
  c.slope = cxy / cxx;
  c.intercept = my - c.slope * mx;
  c.r_squared = cyy > 0.0 ? (cxy * cxy) / (cxx * cyy) : 1.0;
  return c;
}

std::vector<double> default_lambda_grid(std::span<const double> samples, int n_points) {
  if (samples.size() <= kMinExceedances) {
    throw Error("default_lambda_grid: need more than " + std::to_string(kMinExceedances) +
                " samples");
  }
  if (n_points < 2) throw Error("default_lambda_grid: n_points must be >= 2");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double lo = sorted[sorted.size() / 2];
  const double hi = sorted[sorted.size() - kMinExceedances - 1];
  if (!(hi > lo)) return {lo};
  std::vector<double> grid(n_points);
  for (int i = 0; i < n_points; ++i) grid[i] = lo + (hi - lo) * i / (n_points - 1);
  return grid;
}

void write_csv(std::ostream& os, const TailCurve& curve) {
  os << "lambda,count,log_tail\n";
  os.precision(17);
  for (std::size_t i = 0; i < curve.lambdas.size(); ++i) {
    os << curve.lambdas[i] << ',' << curve.counts[i] << ',';
    if (std::isfinite(curve.empirical_log_tail[i])) {
      os << curve.empirical_log_tail[i];
    } else {
      os << "-inf";
    }
    os << '\n';
  }
}

nlohmann::json to_json(const TailCurve& curve) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  nlohmann::json j;
  j["functional"] = curve.functional_id;
  j["n_samples"] = curve.n_samples;
  j["lambdas"] = curve.lambdas;
  j["counts"] = curve.counts;
  j["log_tail"] = nlohmann::json::array();
  for (double v : curve.empirical_log_tail) j["log_tail"].push_back(num(v));
  j["fit"] = {{"slope_in_lambda_sq", num(curve.slope)},
              {"intercept", num(curve.intercept)},
              {"r_squared", num(curve.r_squared)},
              {"qualified_bins", curve.qualified_bins},
              {"min_exceedances", kMinExceedances}};
  j["degenerate"] = curve.degenerate;
  return j;
}

// ---- Strichartz -------------------------------------------------------------------------

namespace {

bool exponents_in_range(double q, double r) {
  return q >= 2.0 && r >= 2.0 && std::isfinite(r);
}

void require_admissible(double q, double r) {
  if (admissible(q, r) != Admissibility::not_admissible) return;
  std::ostringstream os;
  if (!exponents_in_range(q, r)) {
    os << "strichartz_ratio: exponents out of range (need q >= 2, 2 <= r < inf), got q = " << q
       << ", r = " << r;
  } else {
    os << "strichartz_ratio: (q, r) = (" << q << ", " << r << ") is not admissible: 1/q + 3/(2r) = "
       << 1.0 / q + 1.5 / r << " > 3/4";
  }
  throw Error(os.str());
}

double k_norm(const IVec& k, int dim) {
  double s = 0.0;
  for (int a = 0; a < dim; ++a) s += static_cast<double>(k[a]) * k[a];
  return std::sqrt(s);
}

std::vector<double> sample_times(double T, double dt) {
  if (!(T > 0.0)) throw Error("strichartz_ratio: T must be positive");
  if (!(dt > 0.0)) throw Error("strichartz_ratio: dt must be positive");
  const long nsteps = std::max<long>(1, static_cast<long>(std::ceil(T / dt - 1e-9)));
  std::vector<double> t(nsteps + 1);
  for (long j = 0; j <= nsteps; ++j) t[j] = T * j / nsteps;
  return t;
}

}  // namespace

Admissibility admissible(double q, double r) {
  if (!exponents_in_range(q, r)) return Admissibility::not_admissible;
  const double v = 1.0 / q + 1.5 / r;
  if (std::abs(v - 0.75) <= 1e-12) return Admissibility::sharp;
  return v < 0.75 ? Admissibility::admissible : Admissibility::not_admissible;
}

bool radial_admissible(double q, double r) {
  return exponents_in_range(q, r) && 1.0 / q + 3.0 / r < 1.5;
}

double strichartz_ratio(const Field& f, const IVec& k, double q, double r, double T, double dt,
                        StrichartzInfo* info) {
  require_admissible(q, r);
  const GridSpec& grid = f.grid();
  const auto times = sample_times(T, dt);
  StrichartzInfo local;
  local.small_k = k_norm(k, grid.dim()) <= 4.0;

  const Field pk = to_spectral(unit_project(f, k));
  const auto& freq = geometry(grid).freq_abs;
  double rhs2 = 0.0;
  for (std::size_t i = 0; i < pk.size(); ++i) rhs2 += std::pow(freq[i], 2.0 / q) * std::norm(pk[i]);
  local.rhs = std::sqrt(rhs2 * grid.cell_volume());

  std::vector<double> lr(times.size());
  for (std::size_t j = 0; j < times.size(); ++j) {
    Field u = apply_symbol(pk, [&](std::size_t i) { return std::polar(1.0, times[j] * freq[i]); });
    lr[j] = lp_norm(to_physical(u), r);
  }
  local.lhs = time_lq_norm(times, lr, q);
  if (info) *info = local;
  if (local.rhs == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return local.lhs / local.rhs;
}

double strichartz_ratio_comoving(const SpectralProfile& fhat, const IVec& k, double q, double r,
                                 double T, double dt, const GridSpec& frame,
                                 StrichartzInfo* info) {
  require_admissible(q, r);
  const int d = frame.dim();
  const double kn = k_norm(k, d);
  if (kn == 0.0) throw Error("strichartz_ratio_comoving: k must be nonzero");
  const double support = default_bump().support_radius();
  if (frame.n() / (2.0 * frame.refine()) <= support) {
    throw Error("strichartz_ratio_comoving: frame grid " + frame.describe() +
                " does not resolve the unit bump support");
  }
  const auto times = sample_times(T, dt);
  StrichartzInfo local;
  local.small_k = kn <= 4.0;

  const auto& geo = geometry(frame);
  Field g(frame, Rep::spectral);
  std::vector<double> omega(frame.size());
  std::vector<double> weight(frame.size());
  std::array<double, kMaxDim> eta{};
  std::array<double, kMaxDim> xi{};
  for (std::size_t i = 0; i < frame.size(); ++i) {
    const IVec idx = frame.unravel(i);
    double along = 0.0;
    double abs2 = 0.0;
    for (int a = 0; a < d; ++a) {
      eta[a] = geo.axis_freq[idx[a]];
      xi[a] = k[a] + eta[a];
      along += eta[a] * k[a] / kn;
      abs2 += xi[a] * xi[a];
    }
    const double psi = unit_bump(std::span<const double>(eta.data(), d));
    if (psi != 0.0) g[i] = psi * fhat(std::span<const double>(xi.data(), d));
    const double abs_xi = std::sqrt(abs2);
    // |k + eta| - |k| - eta.k/|k|, written to avoid cancellation.
    const double excess = (abs2 - kn * kn) / (abs_xi + kn);
    omega[i] = excess - along;
    weight[i] = std::pow(abs_xi, 2.0 / q);
  }

  double rhs2 = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) rhs2 += weight[i] * std::norm(g[i]);
  local.rhs = std::sqrt(rhs2 * frame.cell_volume());
  if (local.rhs == 0.0) {
    if (info) *info = local;
    return std::numeric_limits<double>::quiet_NaN();
  }

  // Uniform times: advance each mode by a fixed rotor, resynchronizing now and then.
  const double h = times.size() > 1 ? times[1] - times[0] : 0.0;
  std::vector<cplx> rotor(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) rotor[i] = std::polar(1.0, h * omega[i]);
  std::vector<double> lr(times.size());
  Field u = g;
  Field buf(frame, Rep::physical);  // filled with spectra, then transformed in place
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (j > 0 && j % 64 == 0) {
      for (std::size_t i = 0; i < g.size(); ++i) u[i] = g[i] * std::polar(1.0, times[j] * omega[i]);
    } else if (j > 0) {
      for (std::size_t i = 0; i < g.size(); ++i) u[i] *= rotor[i];
    }
    std::copy(u.values().begin(), u.values().end(), buf.values().begin());
    fft_inplace(buf.values(), frame, Direction::inverse);
    lr[j] = lp_norm(buf, r);
  }
  local.lhs = time_lq_norm(times, lr, q);
  if (info) *info = local;
  return local.lhs / local.rhs;
}

// ---- Square function -----------------------------------------------------------------------

double radial_deviation(const Field& f) {
  const Field p = to_physical(f);
  const GridSpec& grid = p.grid();
  std::unordered_map<long, std::pair<cplx, long>> shells;
  std::vector<long> key(grid.size());
  double peak = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const IVec idx = grid.unravel(i);
    long s = 0;
    for (int a = 0; a < grid.dim(); ++a) {
      const long m = grid.signed_index(idx[a]);
      s += m * m;
    }
    key[i] = s;
    auto& e = shells[s];
    e.first += p[i];
    e.second += 1;
    peak = std::max(peak, std::abs(p[i]));
  }
  if (peak == 0.0) return 0.0;
  double dev = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& e = shells[key[i]];
    dev = std::max(dev, std::abs(p[i] - e.first / static_cast<double>(e.second)));
  }
  return dev / peak;
}

Field square_function(const Field& f, const BumpSpec& bump) {
  if (f.rep() == Rep::physical && f.max_imag() > 1e-12) {
    throw Error("square_function: expects a real field");
  }
  const GridSpec& grid = f.grid();
  const int d = grid.dim();
  const int n = grid.n();
  const int P = grid.refine();
  const int kmax = grid.lattice_max();
  const Field fh = to_spectral(f);

  // Offsets delta = m/P with |delta| < 2 * support radius per axis.
  const int reach = static_cast<int>(std::ceil(2.0 * bump.support_radius() * P)) - 1;
  const int width = 2 * reach + 1;

  // K1[a][j][o] = sum_k phi(xi_j - k) phi(xi_j + delta_o - k); identical on every axis.
  std::vector<double> K1(static_cast<std::size_t>(n) * width, 0.0);
  std::vector<int> shifted(static_cast<std::size_t>(n) * width, -1);
  for (int j = 0; j < n; ++j) {
    const int mj = grid.signed_index(j);
    for (int o = 0; o < width; ++o) {
      const int mo = mj + (o - reach);
      if (mo < -n / 2 || mo >= n / 2) continue;  // leaves the frequency box
      const double s = static_cast<double>(mj) / P;
      const double s2 = static_cast<double>(mo) / P;
      double sum = 0.0;
      for (int kk = -kmax; kk <= kmax; ++kk) sum += bump.profile(s - kk) * bump.profile(s2 - kk);
      K1[static_cast<std::size_t>(j) * width + o] = sum;
      shifted[static_cast<std::size_t>(j) * width + o] = grid.storage_index(mo);
    }
  }

  Field c(grid, Rep::spectral);
  std::size_t n_offsets = 1;
  for (int a = 0; a < d; ++a) n_offsets *= width;
  for (std::size_t off = 0; off < n_offsets; ++off) {
    IVec o{};
    std::size_t rest = off;
    for (int a = d - 1; a >= 0; --a) {
      o[a] = static_cast<int>(rest % width);
      rest /= width;
    }
    cplx acc = 0.0;
    IVec idx{};
    for (std::size_t i = 0; i < grid.size(); ++i) {
      double w = 1.0;
      std::size_t lin = 0;
      for (int a = 0; a < d; ++a) {
        const std::size_t t = static_cast<std::size_t>(idx[a]) * width + o[a];
        w *= K1[t];
        lin = lin * n + static_cast<std::size_t>(shifted[t] < 0 ? 0 : shifted[t]);
      }
      if (w != 0.0) acc += w * fh[i] * std::conj(fh[lin]);
      for (int a = d - 1; a >= 0 && ++idx[a] == n; --a) idx[a] = 0;
    }
    IVec didx{};
    for (int a = 0; a < d; ++a) didx[a] = grid.storage_index(o[a] - reach);
    c[grid.ravel(didx)] = acc;
  }
  // S(x_j) = N^{-1} sum_delta c_delta e^{-i x_j delta}: a forward transform.
  fft_inplace(c.values(), grid, Direction::forward);
  Field s(grid, Rep::physical);
  const double scale = 1.0 / std::sqrt(static_cast<double>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) s[i] = cplx(std::max(0.0, c[i].real() * scale), 0.0);
  return s;
}

double square_function_ratio(const Field& f, double s, double radial_tol) {
  const GridSpec& grid = f.grid();
  if (grid.dim() != 4) throw Error("square_function_ratio: needs a four-dimensional grid");
  const double dev = radial_deviation(f);
  if (dev > radial_tol) {
    throw Error("square_function_ratio: input is not radial (deviation from radial average " +
                std::to_string(dev) + " > " + std::to_string(radial_tol) + ")");
  }
  const double denom = sobolev_norm(f, s);
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  const Field S = square_function(f, default_bump());
  const auto& r = geometry(grid).radius_reg;
  double sup = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    sup = std::max(sup, std::pow(r[i], 1.5) * std::sqrt(S[i].real()));
  }
  return sup / denom;
}

nlohmann::json experiment_manifest(const GridSpec& grid, std::span<const McFunctional> functionals,
                                   std::size_t n_samples, std::uint64_t seed, double T, double dt,
                                   const McOptions& opts) {
  nlohmann::json j;
  j["grid"] = {{"dim", grid.dim()}, {"n", grid.n()}, {"refine", grid.refine()}};
  j["functionals"] = nlohmann::json::array();
  for (auto f : functionals) j["functionals"].push_back(to_string(f));
  j["n_samples"] = n_samples;
  j["seed"] = seed;
  j["T"] = T;
  j["dt"] = dt;
  j["threshold"] = opts.threshold;
  j["hs_s"] = opts.hs_s;
  j["threads"] = opts.threads;
  j["min_exceedances"] = kMinExceedances;
  if (opts.horizon) j["horizon"] = *opts.horizon;
  return j;
}

}  // namespace rwave

#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "rwave/grid.hpp"
#include "rwave/multipliers.hpp"

namespace rwave {

// ---- Khintchine moments ----------------------------------------------------

/// (E|sum c_n g_n|^p)^{1/p} / (sqrt(p) ||c||_2) over n_samples draws of
/// independent circular complex Gaussians with E|g|^2 = 1.
double khintchine_ratio(std::span<const cplx> c, double p, std::size_t n_samples,
                        std::uint64_t seed);

/// The exact value of the same ratio: Gamma(1 + p/2)^{1/p} / sqrt(p).
double khintchine_reference(double p);

// ---- Monte Carlo functionals of the randomized free evolution --------------

enum class McFunctional { l3l6_free, weighted_l2linf_free, hs_norm };

std::string to_string(McFunctional f);
McFunctional parse_functional(const std::string& name);

struct McOptions {
  /// Dyadic high-pass P_{>N} applied after randomizing; 0 disables it.
  double threshold = 1.0;
  /// Sobolev index of the hs_norm functional.
  double hs_s = 0.0;
  /// 0 picks std::thread::hardware_concurrency().
  int threads = 0;
  /// Overrides the no-wrap horizon computed from the data radius.
  std::optional<double> horizon;
};

/// Samples for each requested functional, one value per sample index.
/// Sample i uses coefficients keyed by (seed, i), so the lists do not depend
/// on the thread count.
std::map<McFunctional, std::vector<double>> mc_functionals(
    const Field& f0, const Field& f1, std::span<const McFunctional> functionals,
    std::size_t n_samples, std::uint64_t seed, double T, double dt, const McOptions& opts = {});

std::vector<double> mc_functional(const Field& f0, const Field& f1, McFunctional functional,
                                  std::size_t n_samples, std::uint64_t seed, double T, double dt,
                                  const McOptions& opts = {});

// ---- Tail curves -------------------------------------------------------------

struct TailCurve {
  std::vector<double> lambdas;
  std::vector<std::size_t> counts;      // samples strictly above each lambda
  std::vector<double> empirical_log_tail;  // log(count / n); -inf when count = 0
  std::size_t n_samples = 0;
  std::string functional_id;
  double slope = 0.0;      // d log P / d lambda^2 on qualified bins
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t qualified_bins = 0;
  bool degenerate = false;  // all samples equal, or fewer than 3 qualified bins
};

inline constexpr std::size_t kMinExceedances = 30;

TailCurve tail_estimate(std::span<const double> samples, std::span<const double> lambda_grid,
                        std::string functional_id = "");

/// n_points thresholds from the sample median up to the value with exactly
/// kMinExceedances samples above it.
std::vector<double> default_lambda_grid(std::span<const double> samples, int n_points = 24);

/// lambda,count,log_tail rows.
void write_csv(std::ostream& os, const TailCurve& curve);
nlohmann::json to_json(const TailCurve& curve);

// ---- Strichartz probes ---------------------------------------------------------

enum class Admissibility { not_admissible, admissible, sharp };

/// 1/q + 3/(2r) <= 3/4 with q >= 2, 2 <= r < inf; sharp on equality.
Admissibility admissible(double q, double r);
/// 1/q + 3/r < 3/2 with q >= 2, 2 <= r < inf.
bool radial_admissible(double q, double r);

struct StrichartzInfo {
  double lhs = 0.0;
  double rhs = 0.0;
  bool small_k = false;  // |k| <= 4
};

/// ||e^{it|grad|} P_k f||_{L^q([0,T]) L^r} / || |grad|^{1/q} P_k f ||_2 on
/// the grid of f. NaN (the 0/0 sentinel) when P_k f vanishes.
double strichartz_ratio(const Field& f, const IVec& k, double q, double r, double T, double dt,
                        StrichartzInfo* info = nullptr);

using SpectralProfile = std::function<cplx(std::span<const double> xi)>;

/// The same ratio with the packet followed in a frame moving with velocity
/// k/|k| and the carrier e^{i(k.x + |k|t)} removed; the modulus, hence every
/// L^r norm, is unchanged. Only the residual phase |k + eta| - |k| - eta.k/|k|
/// acts on the frame grid, whose frequencies eta are offsets from k, so
/// windows of length ~|k| fit without wrap-around.
double strichartz_ratio_comoving(const SpectralProfile& fhat, const IVec& k, double q, double r,
                                 double T, double dt, const GridSpec& frame,
                                 StrichartzInfo* info = nullptr);

// ---- Square function -------------------------------------------------------------

/// max |f - radial average of f| / max |f|, averaging over points with equal |x|^2.
double radial_deviation(const Field& f);

/// S(x) = sum_k |P_k f(x)|^2 over the admissible lattice box. S is band
/// limited to offsets |delta_a| < 1.5, so it is assembled from the
/// correlations sum_xi f^(xi) conj f^(xi + delta) K(xi, xi + delta) with one
/// transform instead of one per k.
Field square_function(const Field& f, const BumpSpec& bump = default_bump());

/// sup_x |x|_reg^{3/2} (sum_k |P_k f(x)|^2)^{1/2} / ||f||_{H^s}. Requires d = 4
/// and radial f (radial_deviation <= radial_tol). NaN for f = 0.
double square_function_ratio(const Field& f, double s, double radial_tol = 1e-8);

/// Experiment manifest for a Monte Carlo run.
nlohmann::json experiment_manifest(const GridSpec& grid, std::span<const McFunctional> functionals,
                                   std::size_t n_samples, std::uint64_t seed, double T, double dt,
                                   const McOptions& opts);

}  // namespace rwave

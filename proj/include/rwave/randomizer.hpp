#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rwave/grid.hpp"
#include "rwave/multipliers.hpp"
#include "rwave/philox.hpp"

namespace rwave {

/// Box of integer lattice points [-half_width[a], half_width[a]] per axis.
struct LatticeBox {
  int dim = 0;
  IVec lo{};
  IVec hi{};

  static LatticeBox symmetric(int dim, int half_width);
  /// The admissible box of a grid: |k_i| <= lattice_max.
  static LatticeBox for_grid(const GridSpec& grid);

  bool is_symmetric() const;
  bool contains(const IVec& k) const;
  std::size_t count() const;
  std::size_t index(const IVec& k) const;
  IVec point(std::size_t index) const;
};

/// k is in the positive half-lattice I when its first nonzero coordinate is > 0.
bool in_positive_half(const IVec& k);

/// Maps one Philox block to two independent mean-zero, unit-variance reals.
/// Only the Gaussian sampler ships; the hook keeps the ensemble swappable.
using PairSampler = std::function<std::pair<double, double>(const PhiloxCounter&)>;

PairSampler gaussian_sampler();

/// Identifies one draw: coefficient set (seed, sample, stream).
struct CoeffKey {
  std::uint64_t seed = 0;
  std::uint64_t sample = 0;
  std::uint32_t stream = 0;  // 0 for g_k (position data), 1 for h_k (velocity data)
};

/// Conjugate-symmetric coefficients g_k on a symmetric lattice box.
/// For k in I, Re g_k and Im g_k have variance 1/2; g_0 is real with
/// variance 1; g_{-k} = conj(g_k) exactly.
class CoeffSet {
 public:
  CoeffSet(LatticeBox box, CoeffKey key, std::vector<cplx> coeffs);

  const LatticeBox& box() const { return box_; }
  const CoeffKey& key() const { return key_; }
  cplx at(const IVec& k) const { return coeffs_[box_.index(k)]; }
  std::span<const cplx> values() const { return coeffs_; }

  /// Every coefficient equal to value (deterministic override).
  static CoeffSet constant(const LatticeBox& box, cplx value);

 private:
  LatticeBox box_;
  CoeffKey key_;
  std::vector<cplx> coeffs_;
};

/// Draws one coefficient; depends only on (key, k).
cplx draw_coefficient(const CoeffKey& key, const IVec& k, const PairSampler& sampler);

CoeffSet sample_coeffs(const CoeffKey& key, const LatticeBox& box,
                       const PairSampler& sampler = gaussian_sampler());
CoeffSet sample_coeffs(std::uint64_t seed, const LatticeBox& box);

struct RandomizeReport {
  double imag_residue = 0.0;  // max |Im| relative to the output L2 norm
  double truncation = 0.0;    // relative L2 mass of f outside the box coverage
  bool truncated = false;
};

/// m(xi) = sum_k g_k psi(xi - k) on the grid's frequencies.
CVec randomization_symbol(const GridSpec& grid, const CoeffSet& coeffs,
                          const BumpSpec& bump = default_bump());

/// f^omega = sum_k g_k P_k f, real part kept (residue reported).
Field randomize(const Field& f, const CoeffSet& coeffs, RandomizeReport* report = nullptr,
                const BumpSpec& bump = default_bump());

nlohmann::json to_json(const CoeffSet& coeffs);
CoeffSet coeffs_from_json(const nlohmann::json& j);

}  // namespace rwave

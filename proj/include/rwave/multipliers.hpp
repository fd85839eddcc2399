#pragma once

#include <span>
#include <vector>

#include "rwave/grid.hpp"

namespace rwave {

/// Smooth 1D step h (0 below -w, 1 above w, h(t) + h(-t) = 1) and the
/// unit-interval bump phi(t) = h(t + 1/2) - h(t - 1/2). Integer translates
/// of phi sum to one; the d-dimensional cutoff psi is the tensor product.
///
/// h is the normalized integral of exp(-1/(1 - (t/w)^2)), tabulated on
/// [-w, 0] and evaluated by cubic Hermite interpolation with the exact
/// derivative. The table is immutable after construction.
class BumpSpec {
 public:
  explicit BumpSpec(double transition_width = 0.25, int table_size = 1 << 14);

  double width() const { return width_; }
  int table_size() const { return static_cast<int>(values_.size()) - 1; }
  /// phi vanishes outside [-support_radius, support_radius].
  double support_radius() const { return 0.5 + width_; }

  double step(double t) const;
  double profile(double t) const { return step(t + 0.5) - step(t - 0.5); }

 private:
  double density(double t) const;
  double half_step(double t) const;  // t in [-w, 0]

  double width_;
  double norm_;
  double cell_;
  std::vector<double> values_;
};

const BumpSpec& default_bump();

/// psi(xi) = prod_i phi(xi_i).
double unit_bump(std::span<const double> xi, const BumpSpec& bump = default_bump());

/// max over grid frequencies of |sum_{k in Z^d} psi(xi - k) - 1|, summing
/// every lattice point whose translate can reach xi.
double partition_of_unity_defect(const GridSpec& grid, const BumpSpec& bump = default_bump());

/// Throws unless every component of k lies in [-lattice_max, lattice_max]
/// and unused trailing components are zero.
void check_lattice_point(const GridSpec& grid, const IVec& k);

/// Per-axis table of phi(freq_j - k_a); the symbol of P_k is their product.
std::vector<std::vector<double>> unit_symbol_axes(const GridSpec& grid, const IVec& k,
                                                  const BumpSpec& bump = default_bump());

/// P_k f: spectral multiplication by psi(xi - k), returned in f's rep.
Field unit_project(const Field& f, const IVec& k, const BumpSpec& bump = default_bump());

enum class DyadicMode { at, le, gt };

/// Radial cutoff chi(r): 1 for r <= 1, 0 for r >= 2, smooth in between.
double dyadic_cutoff(double r, const BumpSpec& bump = default_bump());

/// Symbol table of P_N, P_{<=N} or P_{>N} on the grid.
std::vector<double> dyadic_symbol(const GridSpec& grid, double N, DyadicMode mode,
                                  const BumpSpec& bump = default_bump());

/// Throws unless N is an exact (possibly negative) power of two.
void check_dyadic(double N);

Field dyadic_project(const Field& f, double N, DyadicMode mode,
                     const BumpSpec& bump = default_bump());

}  // namespace rwave

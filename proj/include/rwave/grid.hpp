#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rwave/aligned.hpp"

namespace rwave {

using cplx = std::complex<double>;
using CVec = std::vector<cplx, AlignedAllocator<cplx>>;

inline constexpr int kMaxDim = 4;

/// Integer lattice vector; unused trailing components are zero.
using IVec = std::array<int, kMaxDim>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Periodic box [-L/2, L/2)^d with L = 2*pi*refine and n points per axis.
///
/// Physical samples are stored in FFT-natural order: index j on an axis sits
/// at x = j*dx for j < n/2 and at (j - n)*dx otherwise, so x = 0 is index 0.
/// Spectral samples use the same wrap, with frequency m/refine for the
/// signed index m in {-n/2, ..., n/2 - 1}.
class GridSpec {
 public:
  GridSpec() = default;

  int dim() const { return dim_; }
  int n() const { return n_; }
  int refine() const { return refine_; }

  double length() const;
  double dx() const { return length() / n_; }
  double cell_volume() const;
  double volume() const;
  double freq_spacing() const { return 1.0 / refine_; }
  std::size_t size() const { return size_; }

  /// Signed index in {-n/2, ..., n/2-1} for storage index j.
  int signed_index(int j) const { return j < n_ / 2 ? j : j - n_; }
  double coord(int j) const { return signed_index(j) * dx(); }
  double freq(int j) const { return signed_index(j) / static_cast<double>(refine_); }

  /// Largest |k_i| for integer lattice points that are representable.
  int lattice_max() const { return n_ / (2 * refine_) - 1; }

  /// Storage index along one axis of a signed index (wraps modulo n).
  int storage_index(int m) const { return ((m % n_) + n_) % n_; }

  /// Decomposes a linear index into per-axis storage indices.
  IVec unravel(std::size_t linear) const;
  std::size_t ravel(const IVec& idx) const;

  /// Regularized radius max(|x|, dx/2).
  double radius_floor() const { return 0.5 * dx(); }

  bool operator==(const GridSpec&) const = default;

  std::string describe() const;

 private:
  friend GridSpec make_grid(int dim, int n_per_axis, int refine);
  int dim_ = 0;
  int n_ = 0;
  int refine_ = 1;
  std::size_t size_ = 0;
};

GridSpec make_grid(int dim, int n_per_axis, int refine);

/// Cached per-grid lookup tables: |xi|, regularized |x|, and coordinates.
struct GridGeometry {
  std::vector<double> freq_abs;    // |xi| per grid point
  std::vector<double> radius_reg;  // max(|x|, dx/2) per grid point
  std::vector<double> axis_coord;  // coordinate per axis storage index
  std::vector<double> axis_freq;   // frequency per axis storage index
};

/// Shared immutable geometry tables for a grid, built on first use.
const GridGeometry& geometry(const GridSpec& grid);

enum class Rep : std::int32_t { physical = 0, spectral = 1 };

class Field {
 public:
  Field() = default;
  Field(const GridSpec& grid, Rep rep);
  Field(const GridSpec& grid, Rep rep, CVec values);

  const GridSpec& grid() const { return grid_; }
  Rep rep() const { return rep_; }
  std::size_t size() const { return values_.size(); }

  std::span<const cplx> values() const { return values_; }
  std::span<cplx> values() { return values_; }
  cplx operator[](std::size_t i) const { return values_[i]; }
  cplx& operator[](std::size_t i) { return values_[i]; }

  bool all_finite() const;
  /// Largest |Im f| relative to max |f|; 0 for the zero field.
  double max_imag() const;
  void drop_imag();

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(cplx scale);

 private:
  void check_compatible(const Field& other) const;

  GridSpec grid_;
  Rep rep_ = Rep::physical;
  CVec values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(cplx s, Field a);

/// A wave state (v, dv/dt) at a time, both real-valued physical fields.
struct StatePair {
  Field pos;
  Field vel;
  double time = 0.0;

  static StatePair zero(const GridSpec& grid, double time = 0.0);
  const GridSpec& grid() const { return pos.grid(); }
};

/// Builds a physical field by sampling fn(x) at every grid point.
template <typename Fn>
Field sample_physical(const GridSpec& grid, Fn&& fn) {
  Field f(grid, Rep::physical);
  const auto& geo = geometry(grid);
  std::array<double, kMaxDim> x{};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    IVec idx = grid.unravel(i);
    for (int a = 0; a < grid.dim(); ++a) x[a] = geo.axis_coord[idx[a]];
    f[i] = fn(std::span<const double>(x.data(), grid.dim()));
  }
  return f;
}

/// Builds a spectral field by sampling fn(xi) at every grid frequency.
template <typename Fn>
Field sample_spectral(const GridSpec& grid, Fn&& fn) {
  Field f(grid, Rep::spectral);
  const auto& geo = geometry(grid);
  std::array<double, kMaxDim> xi{};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    IVec idx = grid.unravel(i);
    for (int a = 0; a < grid.dim(); ++a) xi[a] = geo.axis_freq[idx[a]];
    f[i] = fn(std::span<const double>(xi.data(), grid.dim()));
  }
  return f;
}

}  // namespace rwave

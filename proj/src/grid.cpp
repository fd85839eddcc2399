#include "rwave/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

namespace rwave {

GridSpec make_grid(int dim, int n_per_axis, int refine) {
  if (dim < 1 || dim > kMaxDim) {
    throw Error("make_grid: dim must be in 1..4, got " + std::to_string(dim));
  }
  if (n_per_axis < 8) {
    throw Error("make_grid: n_per_axis must be >= 8, got " + std::to_string(n_per_axis));
  }
  if (n_per_axis % 2 != 0) {
    throw Error("make_grid: n_per_axis must be even, got " + std::to_string(n_per_axis));
  }
  if (refine < 1) {
    throw Error("make_grid: refine must be >= 1, got " + std::to_string(refine));
  }
  GridSpec g;
  g.dim_ = dim;
  g.n_ = n_per_axis;
  g.refine_ = refine;
  g.size_ = 1;
  for (int a = 0; a < dim; ++a) g.size_ *= static_cast<std::size_t>(n_per_axis);
  return g;
}

double GridSpec::length() const { return 2.0 * std::numbers::pi * refine_; }

double GridSpec::cell_volume() const { return std::pow(dx(), dim_); }

double GridSpec::volume() const { return std::pow(length(), dim_); }

IVec GridSpec::unravel(std::size_t linear) const {
  IVec idx{};
  for (int a = dim_ - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(linear % n_);
    linear /= n_;
  }
  return idx;
}

std::size_t GridSpec::ravel(const IVec& idx) const {
  std::size_t linear = 0;
  for (int a = 0; a < dim_; ++a) linear = linear * n_ + static_cast<std::size_t>(idx[a]);
  return linear;
}

std::string GridSpec::describe() const {
  std::ostringstream os;
  os << "d=" << dim_ << " n=" << n_ << " P=" << refine_;
  return os.str();
}

namespace {

GridGeometry build_geometry(const GridSpec& grid) {
  GridGeometry geo;
  const int n = grid.n();
  geo.axis_coord.resize(n);
  geo.axis_freq.resize(n);
  for (int j = 0; j < n; ++j) {
    geo.axis_coord[j] = grid.coord(j);
    geo.axis_freq[j] = grid.freq(j);
  }
  geo.freq_abs.resize(grid.size());
  geo.radius_reg.resize(grid.size());
  const double floor = grid.radius_floor();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    IVec idx = grid.unravel(i);
    double xi2 = 0.0;
    double x2 = 0.0;
    for (int a = 0; a < grid.dim(); ++a) {
      xi2 += geo.axis_freq[idx[a]] * geo.axis_freq[idx[a]];
      x2 += geo.axis_coord[idx[a]] * geo.axis_coord[idx[a]];
    }
    geo.freq_abs[i] = std::sqrt(xi2);
    geo.radius_reg[i] = std::max(std::sqrt(x2), floor);
  }
  return geo;
}

}  // namespace

const GridGeometry& geometry(const GridSpec& grid) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::unique_ptr<GridGeometry>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(grid.dim(), grid.n(), grid.refine());
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::make_unique<GridGeometry>(build_geometry(grid))).first;
  }
  return *it->second;
}

Field::Field(const GridSpec& grid, Rep rep) : grid_(grid), rep_(rep), values_(grid.size()) {}

Field::Field(const GridSpec& grid, Rep rep, CVec values)
    : grid_(grid), rep_(rep), values_(std::move(values)) {
  if (values_.size() != grid.size()) {
    throw Error("Field: value count " + std::to_string(values_.size()) +
                " does not match grid size " + std::to_string(grid.size()));
  }
}

bool Field::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](const cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

double Field::max_imag() const {
  double im = 0.0;
  double mag = 0.0;
  for (const auto& z : values_) {
    im = std::max(im, std::abs(z.imag()));
    mag = std::max(mag, std::abs(z));
  }
  return mag > 0.0 ? im / mag : 0.0;
}

void Field::drop_imag() {
  for (auto& z : values_) z = cplx(z.real(), 0.0);
}

void Field::check_compatible(const Field& other) const {
  if (!(grid_ == other.grid_) || rep_ != other.rep_) {
    throw Error("Field: incompatible operands (" + grid_.describe() + " vs " +
                other.grid_.describe() + ")");
  }
}

Field& Field::operator+=(const Field& other) {
  check_compatible(other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  check_compatible(other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(cplx scale) {
  for (auto& z : values_) z *= scale;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(cplx s, Field a) { return a *= s; }

StatePair StatePair::zero(const GridSpec& grid, double time) {
  return StatePair{Field(grid, Rep::physical), Field(grid, Rep::physical), time};
}

}  // namespace rwave

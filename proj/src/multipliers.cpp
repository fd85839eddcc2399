#include "rwave/multipliers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rwave/fft.hpp"

namespace rwave {
namespace {

// 5-point Gauss-Legendre on [-1, 1].
constexpr double kGlNodes[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                0.5384693101056831, 0.9061798459386640};
constexpr double kGlWeights[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                  0.4786286704993665, 0.2369268850561891};

}  // namespace

BumpSpec::BumpSpec(double transition_width, int table_size) : width_(transition_width) {
  if (!(transition_width > 0.0 && transition_width < 0.5)) {
    throw Error("BumpSpec: transition width must lie in (0, 1/2)");
  }
  if (table_size < 16) throw Error("BumpSpec: table too small");
  cell_ = width_ / table_size;
  values_.assign(table_size + 1, 0.0);
  double cum = 0.0;
  for (int j = 0; j < table_size; ++j) {
    const double a = -width_ + j * cell_;
    const double mid = a + 0.5 * cell_;
    double cell_sum = 0.0;
    for (int q = 0; q < 5; ++q) cell_sum += kGlWeights[q] * density(mid + 0.5 * cell_ * kGlNodes[q]);
    cum += 0.5 * cell_ * cell_sum;
    values_[j + 1] = cum;
  }
  // Full integral is twice the half integral, so the table ends at exactly 1/2.
  norm_ = 2.0 * cum;
  for (auto& v : values_) v /= norm_;
}

double BumpSpec::density(double t) const {
  const double u = t / width_;
  if (std::abs(u) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - u * u));
}

double BumpSpec::half_step(double t) const {
  const double pos = (t + width_) / cell_;
  int j = static_cast<int>(pos);
  j = std::clamp(j, 0, table_size() - 1);
  const double s = pos - j;
  const double t0 = -width_ + j * cell_;
  const double d0 = density(t0) / norm_ * cell_;
  const double d1 = density(t0 + cell_) / norm_ * cell_;
  const double y0 = values_[j];
  const double y1 = values_[j + 1];
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * d0 + (-2 * s3 + 3 * s2) * y1 +
         (s3 - s2) * d1;
}

double BumpSpec::step(double t) const {
  if (t <= -width_) return 0.0;
  if (t >= width_) return 1.0;
  if (t <= 0.0) return half_step(t);
  return 1.0 - half_step(-t);
}

const BumpSpec& default_bump() {
  static const BumpSpec bump;
  return bump;
}

double unit_bump(std::span<const double> xi, const BumpSpec& bump) {
  double v = 1.0;
  for (double c : xi) {
    v *= bump.profile(c);
    if (v == 0.0) break;
  }
  return v;
}

double partition_of_unity_defect(const GridSpec& grid, const BumpSpec& bump) {
  const int n = grid.n();
  const int d = grid.dim();
  const double reach = bump.support_radius();
  // Per axis: every integer j with |xi - j| <= reach, with its phi value.
  std::vector<std::vector<double>> axis_terms(n);
  for (int j = 0; j < n; ++j) {
    const double xi = grid.freq(j);
    for (int k = static_cast<int>(std::floor(xi - reach)) - 1;
         k <= static_cast<int>(std::ceil(xi + reach)) + 1; ++k) {
      axis_terms[j].push_back(bump.profile(xi - k));
    }
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const IVec idx = grid.unravel(i);
    // Enumerate the lattice neighbourhood as a d-fold product.
    std::array<std::size_t, kMaxDim> counter{};
    double sum = 0.0;
    while (true) {
      double term = 1.0;
      for (int a = 0; a < d; ++a) term *= axis_terms[idx[a]][counter[a]];
      sum += term;
      int a = d - 1;
      while (a >= 0 && ++counter[a] == axis_terms[idx[a]].size()) counter[a--] = 0;
      if (a < 0) break;
    }
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

void check_lattice_point(const GridSpec& grid, const IVec& k) {
  const int kmax = grid.lattice_max();
  bool ok = true;
  for (int a = 0; a < kMaxDim; ++a) {
    if (a < grid.dim()) {
      ok = ok && std::abs(k[a]) <= kmax;
    } else {
      ok = ok && k[a] == 0;
    }
  }
  if (!ok) {
    std::ostringstream os;
    os << "lattice point (";
    for (int a = 0; a < kMaxDim; ++a) os << (a ? "," : "") << k[a];
    os << ") outside admissible box [-" << kmax << ", " << kmax << "]^" << grid.dim() << " for "
       << grid.describe();
    throw Error(os.str());
  }
}

std::vector<std::vector<double>> unit_symbol_axes(const GridSpec& grid, const IVec& k,
                                                  const BumpSpec& bump) {
  check_lattice_point(grid, k);
  std::vector<std::vector<double>> axes(grid.dim(), std::vector<double>(grid.n()));
  for (int a = 0; a < grid.dim(); ++a) {
    for (int j = 0; j < grid.n(); ++j) axes[a][j] = bump.profile(grid.freq(j) - k[a]);
  }
  return axes;
}

Field unit_project(const Field& f, const IVec& k, const BumpSpec& bump) {
  const GridSpec& grid = f.grid();
  const auto axes = unit_symbol_axes(grid, k, bump);
  return apply_symbol(f, [&](std::size_t i) {
    const IVec idx = grid.unravel(i);
    double v = 1.0;
    for (int a = 0; a < grid.dim(); ++a) v *= axes[a][idx[a]];
    return cplx(v, 0.0);
  });
}

double dyadic_cutoff(double r, const BumpSpec& bump) {
  const double w = bump.width();
  return bump.step(w * (3.0 - 2.0 * r));
}

void check_dyadic(double N) {
  int e = 0;
  const double m = std::frexp(N, &e);
  if (!(N > 0.0) || m != 0.5) {
    throw Error("dyadic_project: N must be a power of two, got " + std::to_string(N));
  }
}

std::vector<double> dyadic_symbol(const GridSpec& grid, double N, DyadicMode mode,
                                  const BumpSpec& bump) {
  check_dyadic(N);
  const auto& freq = geometry(grid).freq_abs;
  std::vector<double> sym(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = freq[i] / N;
    switch (mode) {
      case DyadicMode::le:
        sym[i] = dyadic_cutoff(r, bump);
        break;
      case DyadicMode::gt:
        sym[i] = 1.0 - dyadic_cutoff(r, bump);
        break;
      case DyadicMode::at:
        sym[i] = dyadic_cutoff(r, bump) - dyadic_cutoff(2.0 * r, bump);
        break;
    }
  }
  return sym;
}

Field dyadic_project(const Field& f, double N, DyadicMode mode, const BumpSpec& bump) {
  const auto sym = dyadic_symbol(f.grid(), N, mode, bump);
  return apply_symbol(f, sym);
}

}  // namespace rwave

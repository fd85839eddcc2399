#include "rwave/norms.hpp"

#include <algorithm>
#include <cmath>

#include "rwave/fft.hpp"

namespace rwave {
namespace {

void check_exponent(double q, const char* who) {
  if (!(q >= 1.0)) throw Error(std::string(who) + ": exponent must be >= 1");
}

double pow_abs(double a, double q) {
  if (q == 2.0) return a * a;
  if (q == 1.0) return a;
  return std::pow(a, q);
}

}  // namespace

double weighted_lp_norm(const Field& f, double q, double weight_pow) {
  check_exponent(q, "lp_norm");
  if (f.rep() != Rep::physical) throw Error("lp_norm: field must be in physical representation");
  if (weight_pow < 0.0) throw Error("lp_norm: weight power must be >= 0");
  const auto* radius = weight_pow != 0.0 ? &geometry(f.grid()).radius_reg : nullptr;
  auto weighted = [&](std::size_t i) {
    double a = std::abs(f[i]);
    return radius ? a * std::pow((*radius)[i], weight_pow) : a;
  };
  if (std::isinf(q)) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, weighted(i));
    return m;
  }
  double sum = 0.0;
  if (!radius && (q == 2.0 || q == 4.0 || q == 6.0)) {
    const int half = static_cast<int>(q) / 2;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double a2 = std::norm(f[i]);
      sum += half == 1 ? a2 : half == 2 ? a2 * a2 : a2 * a2 * a2;
    }
  } else {
    for (std::size_t i = 0; i < f.size(); ++i) sum += pow_abs(weighted(i), q);
  }
  return std::pow(sum * f.grid().cell_volume(), 1.0 / q);
}

double lp_norm(const Field& f, double q) { return weighted_lp_norm(f, q, 0.0); }

double spectral_l2(const Field& f) {
  Field spec = to_spectral(f);
  double sum = 0.0;
  for (const auto& z : spec.values()) sum += std::norm(z);
  return std::sqrt(sum * f.grid().cell_volume());
}

double sobolev_norm(const Field& f, double s, bool homogeneous) {
  Field spec = to_spectral(f);
  const auto& freq = geometry(f.grid()).freq_abs;
  if (homogeneous && s < 0.0) {
    double total = 0.0;
    for (const auto& z : spec.values()) total += std::norm(z);
    // Linear index 0 is the zero frequency.
    if (std::norm(spec[0]) > 1e-24 * total) {
      throw Error("sobolev_norm: homogeneous norm with s < 0 needs a mean-zero field");
    }
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double m2 = std::norm(spec[i]);
    if (homogeneous) {
      if (freq[i] > 0.0) sum += std::pow(freq[i], 2.0 * s) * m2;
    } else {
      sum += std::pow(1.0 + freq[i] * freq[i], s) * m2;
    }
  }
  return std::sqrt(sum * f.grid().cell_volume());
}

double time_lq_norm(std::span<const double> times, std::span<const double> values, double q) {
  if (times.size() != values.size()) throw Error("time_lq_norm: size mismatch");
  if (times.size() < 2) throw Error("time_lq_norm: need at least 2 samples");
  check_exponent(q, "time_lq_norm");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw Error("time_lq_norm: times must be strictly increasing");
  }
  if (std::isinf(q)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  double integral = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double a = pow_abs(std::abs(values[i - 1]), q);
    const double b = pow_abs(std::abs(values[i]), q);
    integral += 0.5 * (times[i] - times[i - 1]) * (a + b);
  }
  return std::pow(integral, 1.0 / q);
}

double mixed_norm(std::span<const TimedField> snaps, double q_t, double r_x, double weight_pow) {
  if (snaps.size() < 2) throw Error("mixed_norm: need at least 2 snapshots");
  std::vector<double> times;
  std::vector<double> spatial;
  times.reserve(snaps.size());
  spatial.reserve(snaps.size());
  for (const auto& s : snaps) {
    times.push_back(s.t);
    spatial.push_back(weighted_lp_norm(to_physical(s.field), r_x, weight_pow));
  }
  return time_lq_norm(times, spatial, q_t);
}

}  // namespace rwave

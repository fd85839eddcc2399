#include "rwave/forcing.hpp"

#include <algorithm>
#include <cmath>

#include "rwave/fft.hpp"

namespace rwave {

FreeWaveForcing::FreeWaveForcing(const StatePair& data, double amplitude, std::string label)
    : grid_(data.grid()),
      pos_hat_(to_spectral(data.pos)),
      vel_hat_(to_spectral(data.vel)),
      t0_(data.time),
      amplitude_(amplitude),
      label_(std::move(label)) {}

Field FreeWaveForcing::at(double t) const {
  const auto& freq = geometry(grid_).freq_abs;
  const double s = t - t0_;
  Field out(grid_, Rep::spectral);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double w = freq[i];
    const double sinc = w > 0.0 ? std::sin(s * w) / w : s;
    out[i] = amplitude_ * (std::cos(s * w) * pos_hat_[i] + sinc * vel_hat_[i]);
  }
  fft_inplace(out.values(), grid_, Direction::inverse);
  Field phys(grid_, Rep::physical, CVec(out.values().begin(), out.values().end()));
  phys.drop_imag();
  return phys;
}

nlohmann::json FreeWaveForcing::describe() const {
  return {{"kind", "free-evolution"}, {"label", label_}, {"t0", t0_}, {"amplitude", amplitude_}};
}

FreeWaveForcing FreeWaveForcing::scaled(double factor) const {
  FreeWaveForcing copy = *this;
  copy.amplitude_ *= factor;
  return copy;
}

SnapshotForcing::SnapshotForcing(std::vector<TimedField> snaps) : snaps_(std::move(snaps)) {
  if (snaps_.size() < 2) throw Error("SnapshotForcing: need at least 2 snapshots");
  for (std::size_t i = 1; i < snaps_.size(); ++i) {
    if (!(snaps_[i].t > snaps_[i - 1].t)) throw Error("SnapshotForcing: times must increase");
  }
  for (auto& s : snaps_) s.field = to_physical(s.field);
}

Field SnapshotForcing::at(double t) const {
  const double eps = 1e-12 * std::max(1.0, std::abs(snaps_.back().t));
  if (t < snaps_.front().t - eps || t > snaps_.back().t + eps) {
    throw Error("SnapshotForcing: time " + std::to_string(t) + " outside snapshot window");
  }
  auto it = std::upper_bound(snaps_.begin(), snaps_.end(), t,
                             [](double v, const TimedField& s) { return v < s.t; });
  if (it == snaps_.begin()) return snaps_.front().field;
  if (it == snaps_.end()) return snaps_.back().field;
  const auto& b = *it;
  const auto& a = *(it - 1);
  const double w = (t - a.t) / (b.t - a.t);
  Field out = a.field;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (1.0 - w) * a.field[i] + w * b.field[i];
  return out;
}

nlohmann::json SnapshotForcing::describe() const {
  return {{"kind", "snapshots"},
          {"count", snaps_.size()},
          {"t_begin", snaps_.front().t},
          {"t_end", snaps_.back().t}};
}

std::vector<TimedField> sample_forcing(const ForcingProvider& forcing, double t0, double t1, int n) {
  if (n < 1) throw Error("sample_forcing: need at least one interval");
  std::vector<TimedField> out;
  out.reserve(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double t = t0 + (t1 - t0) * i / n;
    out.push_back({t, forcing.at(t)});
  }
  return out;
}

}  // namespace rwave

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "rwave/grid.hpp"
#include "rwave/norms.hpp"

namespace rwave {

/// Space-time forcing F(t, x) for the forced equation, sampled on demand.
class ForcingProvider {
 public:
  virtual ~ForcingProvider() = default;
  virtual const GridSpec& grid() const = 0;
  /// Real physical field F(t).
  virtual Field at(double t) const = 0;
  virtual bool is_zero() const { return false; }
  virtual nlohmann::json describe() const = 0;
};

class ZeroForcing final : public ForcingProvider {
 public:
  explicit ZeroForcing(const GridSpec& grid) : grid_(grid) {}
  const GridSpec& grid() const override { return grid_; }
  Field at(double) const override { return Field(grid_, Rep::physical); }
  bool is_zero() const override { return true; }
  nlohmann::json describe() const override { return {{"kind", "zero"}}; }

 private:
  GridSpec grid_;
};

/// F(t) = amplitude * [S(t - t0)(f0, f1)]: exact in time.
class FreeWaveForcing final : public ForcingProvider {
 public:
  FreeWaveForcing(const StatePair& data, double amplitude = 1.0, std::string label = "free-wave");
  const GridSpec& grid() const override { return grid_; }
  Field at(double t) const override;
  nlohmann::json describe() const override;
  double amplitude() const { return amplitude_; }
  /// Same recipe with the amplitude multiplied by factor.
  FreeWaveForcing scaled(double factor) const;

 private:
  GridSpec grid_;
  Field pos_hat_;
  Field vel_hat_;
  double t0_;
  double amplitude_;
  std::string label_;
};

/// Piecewise-linear interpolation between stored snapshots.
class SnapshotForcing final : public ForcingProvider {
 public:
  explicit SnapshotForcing(std::vector<TimedField> snaps);
  const GridSpec& grid() const override { return snaps_.front().field.grid(); }
  Field at(double t) const override;
  nlohmann::json describe() const override;
  const std::vector<TimedField>& snapshots() const { return snaps_; }

 private:
  std::vector<TimedField> snaps_;
};

/// Samples a provider at n + 1 uniformly spaced times on [t0, t1].
std::vector<TimedField> sample_forcing(const ForcingProvider& forcing, double t0, double t1, int n);

}  // namespace rwave

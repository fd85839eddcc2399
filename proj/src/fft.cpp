#include "rwave/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace rwave {
namespace {

// FFTW_ESTIMATE plans are chosen without timing, so the same grid always gets
// the same plan and results are bitwise reproducible between runs.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(const GridSpec& grid, Direction dir) {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_tuple(grid.dim(), grid.n(), dir == Direction::forward);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    int dims[kMaxDim];
    for (int a = 0; a < grid.dim(); ++a) dims[a] = grid.n();
    CVec scratch(grid.size());
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft(grid.dim(), dims, buf, buf,
                                   dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD,
                                   FFTW_ESTIMATE);
    if (plan == nullptr) throw Error("fft: could not create plan for " + grid.describe());
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mu_;
  std::map<std::tuple<int, int, bool>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

}  // namespace

void fft_inplace(std::span<cplx> data, const GridSpec& grid, Direction dir) {
  if (data.size() != grid.size()) throw Error("fft: buffer size does not match grid");
  fftw_plan plan = plan_cache().get(grid, dir);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
  const double scale = 1.0 / std::sqrt(static_cast<double>(grid.size()));
  for (auto& z : data) z *= scale;
}

Field transform(const Field& f, Direction dir) {
  const Rep want = dir == Direction::forward ? Rep::physical : Rep::spectral;
  if (f.rep() != want) {
    throw Error(dir == Direction::forward ? "transform: forward needs a physical field"
                                          : "transform: inverse needs a spectral field");
  }
  if (!f.all_finite()) throw Error("transform: non-finite input");
  Field out(f.grid(), dir == Direction::forward ? Rep::spectral : Rep::physical,
            CVec(f.values().begin(), f.values().end()));
  fft_inplace(out.values(), f.grid(), dir);
  return out;
}

Field to_spectral(const Field& f) {
  return f.rep() == Rep::spectral ? f : transform(f, Direction::forward);
}

Field to_physical(const Field& f) {
  return f.rep() == Rep::physical ? f : transform(f, Direction::inverse);
}

Field apply_symbol(const Field& f, const std::function<cplx(std::size_t)>& symbol) {
  Field spec = to_spectral(f);
  for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= symbol(i);
  return f.rep() == Rep::spectral ? spec : transform(spec, Direction::inverse);
}

Field apply_symbol(const Field& f, std::span<const double> symbol) {
  if (symbol.size() != f.size()) throw Error("apply_symbol: symbol size mismatch");
  Field spec = to_spectral(f);
  for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= symbol[i];
  return f.rep() == Rep::spectral ? spec : transform(spec, Direction::inverse);
}

}  // namespace rwave

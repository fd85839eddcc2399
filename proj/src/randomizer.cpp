#include "rwave/randomizer.hpp"

#include <cmath>

#include "rwave/fft.hpp"
#include "rwave/norms.hpp"

namespace rwave {

LatticeBox LatticeBox::symmetric(int dim, int half_width) {
  if (dim < 1 || dim > kMaxDim) throw Error("LatticeBox: dim must be in 1..4");
  if (half_width < 0) throw Error("LatticeBox: negative half width");
  LatticeBox b;
  b.dim = dim;
  for (int a = 0; a < dim; ++a) {
    b.lo[a] = -half_width;
    b.hi[a] = half_width;
  }
  return b;
}

LatticeBox LatticeBox::for_grid(const GridSpec& grid) {
  return symmetric(grid.dim(), grid.lattice_max());
}

bool LatticeBox::is_symmetric() const {
  for (int a = 0; a < dim; ++a) {
    if (lo[a] != -hi[a]) return false;
  }
  return true;
}

bool LatticeBox::contains(const IVec& k) const {
  for (int a = 0; a < kMaxDim; ++a) {
    if (a < dim ? (k[a] < lo[a] || k[a] > hi[a]) : k[a] != 0) return false;
  }
  return true;
}

std::size_t LatticeBox::count() const {
  std::size_t c = 1;
  for (int a = 0; a < dim; ++a) c *= static_cast<std::size_t>(hi[a] - lo[a] + 1);
  return c;
}

std::size_t LatticeBox::index(const IVec& k) const {
  std::size_t idx = 0;
  for (int a = 0; a < dim; ++a) {
    idx = idx * static_cast<std::size_t>(hi[a] - lo[a] + 1) + static_cast<std::size_t>(k[a] - lo[a]);
  }
  return idx;
}

IVec LatticeBox::point(std::size_t index) const {
  IVec k{};
  for (int a = dim - 1; a >= 0; --a) {
    const auto extent = static_cast<std::size_t>(hi[a] - lo[a] + 1);
    k[a] = lo[a] + static_cast<int>(index % extent);
    index /= extent;
  }
  return k;
}

bool in_positive_half(const IVec& k) {
  for (int c : k) {
    if (c != 0) return c > 0;
  }
  return false;
}

PairSampler gaussian_sampler() { return [](const PhiloxCounter& b) { return gaussian_pair(b); }; }

CoeffSet::CoeffSet(LatticeBox box, CoeffKey key, std::vector<cplx> coeffs)
    : box_(box), key_(key), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != box_.count()) throw Error("CoeffSet: coefficient count mismatch");
}

CoeffSet CoeffSet::constant(const LatticeBox& box, cplx value) {
  return CoeffSet(box, CoeffKey{}, std::vector<cplx>(box.count(), value));
}

namespace {

PhiloxCounter coefficient_counter(const CoeffKey& key, const IVec& k) {
  std::uint32_t packed = 0;
  for (int a = 0; a < kMaxDim; ++a) {
    if (k[a] < -127 || k[a] > 127) throw Error("draw_coefficient: |k_i| > 127 not encodable");
    packed |= static_cast<std::uint32_t>(k[a] + 128) << (8 * a);
  }
  return {packed, key.stream, static_cast<std::uint32_t>(key.sample),
          static_cast<std::uint32_t>(key.sample >> 32)};
}

IVec negate(const IVec& k) {
  IVec m{};
  for (int a = 0; a < kMaxDim; ++a) m[a] = -k[a];
  return m;
}

cplx draw_half_lattice(const CoeffKey& key, const IVec& k, const PairSampler& sampler) {
  const auto block = philox4x32(coefficient_counter(key, k), philox_key(key.seed));
  const auto [z1, z2] = sampler(block);
  const bool is_zero = k == IVec{};
  if (is_zero) return cplx(z1, 0.0);
  return cplx(z1, z2) * std::sqrt(0.5);
}

}  // namespace

cplx draw_coefficient(const CoeffKey& key, const IVec& k, const PairSampler& sampler) {
  if (k == IVec{} || in_positive_half(k)) return draw_half_lattice(key, k, sampler);
  return std::conj(draw_half_lattice(key, negate(k), sampler));
}

CoeffSet sample_coeffs(const CoeffKey& key, const LatticeBox& box, const PairSampler& sampler) {
  if (!box.is_symmetric()) throw Error("sample_coeffs: lattice box must be symmetric under k -> -k");
  std::vector<cplx> coeffs(box.count());
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const IVec k = box.point(i);
    if (k == IVec{} || in_positive_half(k)) {
      coeffs[i] = draw_half_lattice(key, k, sampler);
      if (k != IVec{}) coeffs[box.index(negate(k))] = std::conj(coeffs[i]);
    }
  }
  return CoeffSet(box, key, std::move(coeffs));
}

CoeffSet sample_coeffs(std::uint64_t seed, const LatticeBox& box) {
  return sample_coeffs(CoeffKey{seed, 0, 0}, box);
}

namespace {

struct AxisTerm {
  std::size_t offset;  // (k_a - lo_a) * stride_a
  double weight;       // phi(xi_j - k_a)
};

// Per axis storage index j: lattice components k_a in the box whose bump
// reaches xi_j.
std::vector<std::vector<std::vector<AxisTerm>>> axis_terms(const GridSpec& grid,
                                                           const LatticeBox& box,
                                                           const BumpSpec& bump) {
  std::vector<std::size_t> stride(grid.dim(), 1);
  for (int a = grid.dim() - 2; a >= 0; --a) {
    stride[a] = stride[a + 1] * static_cast<std::size_t>(box.hi[a + 1] - box.lo[a + 1] + 1);
  }
  const double reach = bump.support_radius();
  std::vector<std::vector<std::vector<AxisTerm>>> terms(grid.dim());
  for (int a = 0; a < grid.dim(); ++a) {
    terms[a].resize(grid.n());
    for (int j = 0; j < grid.n(); ++j) {
      const double xi = grid.freq(j);
      const int k_lo = std::max(box.lo[a], static_cast<int>(std::ceil(xi - reach)));
      const int k_hi = std::min(box.hi[a], static_cast<int>(std::floor(xi + reach)));
      for (int k = k_lo; k <= k_hi; ++k) {
        const double w = bump.profile(xi - k);
        if (w != 0.0) terms[a][j].push_back({static_cast<std::size_t>(k - box.lo[a]) * stride[a], w});
      }
    }
  }
  return terms;
}

void check_box_fits(const GridSpec& grid, const LatticeBox& box) {
  if (box.dim != grid.dim()) throw Error("randomize: coefficient box dimension does not match grid");
  for (int a = 0; a < box.dim; ++a) {
    if (box.lo[a] < -grid.lattice_max() || box.hi[a] > grid.lattice_max()) {
      throw Error("randomize: coefficient box exceeds the grid's admissible lattice box [-" +
                  std::to_string(grid.lattice_max()) + ", " + std::to_string(grid.lattice_max()) +
                  "]");
    }
  }
}

}  // namespace

CVec randomization_symbol(const GridSpec& grid, const CoeffSet& coeffs, const BumpSpec& bump) {
  check_box_fits(grid, coeffs.box());
  const auto terms = axis_terms(grid, coeffs.box(), bump);
  const auto g = coeffs.values();
  const int d = grid.dim();
  CVec sym(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const IVec idx = grid.unravel(i);
    const std::vector<AxisTerm>* lists[kMaxDim];
    bool empty = false;
    for (int a = 0; a < d; ++a) {
      lists[a] = &terms[a][idx[a]];
      empty = empty || lists[a]->empty();
    }
    if (empty) continue;
    std::array<std::size_t, kMaxDim> c{};
    cplx sum = 0.0;
    while (true) {
      std::size_t off = 0;
      double w = 1.0;
      for (int a = 0; a < d; ++a) {
        const AxisTerm& t = (*lists[a])[c[a]];
        off += t.offset;
        w *= t.weight;
      }
      sum += w * g[off];
      int a = d - 1;
      while (a >= 0 && ++c[a] == lists[a]->size()) c[a--] = 0;
      if (a < 0) break;
    }
    sym[i] = sum;
  }
  return sym;
}

Field randomize(const Field& f, const CoeffSet& coeffs, RandomizeReport* report,
                const BumpSpec& bump) {
  const GridSpec& grid = f.grid();
  check_box_fits(grid, coeffs.box());
  Field spec = to_spectral(f);
  const CVec sym = randomization_symbol(grid, coeffs, bump);

  if (report) {
    // Coverage of the box: sum_{k in box} psi(xi - k), 1 where fully covered.
    const CoeffSet ones = CoeffSet::constant(coeffs.box(), 1.0);
    const CVec cover = randomization_symbol(grid, ones, bump);
    double lost = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < spec.size(); ++i) {
      const double m2 = std::norm(spec[i]);
      total += m2;
      lost += m2 * std::norm(1.0 - cover[i]);
    }
    report->truncation = total > 0.0 ? std::sqrt(lost / total) : 0.0;
    report->truncated = report->truncation > 1e-10;
  }

  for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= sym[i];
  Field out = transform(spec, Direction::inverse);
  if (report) {
    double im = 0.0;
    for (const auto& z : out.values()) im = std::max(im, std::abs(z.imag()));
    const double l2 = lp_norm(out, 2.0);
    report->imag_residue = l2 > 0.0 ? im / l2 : 0.0;
  }
  out.drop_imag();
  if (f.rep() == Rep::spectral) return transform(out, Direction::forward);
  return out;
}

nlohmann::json to_json(const CoeffSet& coeffs) {
  nlohmann::json j;
  j["seed"] = coeffs.key().seed;
  j["sample"] = coeffs.key().sample;
  j["stream"] = coeffs.key().stream;
  j["dim"] = coeffs.box().dim;
  j["half_width"] = std::vector<int>(coeffs.box().hi.begin(), coeffs.box().hi.begin() + coeffs.box().dim);
  j["index_rule"] = "first-nonzero-coordinate-positive";
  auto& list = j["coeffs"] = nlohmann::json::array();
  for (std::size_t i = 0; i < coeffs.values().size(); ++i) {
    const IVec k = coeffs.box().point(i);
    list.push_back({{"k", std::vector<int>(k.begin(), k.begin() + coeffs.box().dim)},
                    {"g", {coeffs.values()[i].real(), coeffs.values()[i].imag()}}});
  }
  return j;
}

CoeffSet coeffs_from_json(const nlohmann::json& j) {
  LatticeBox box;
  box.dim = j.at("dim").get<int>();
  const auto hw = j.at("half_width").get<std::vector<int>>();
  if (static_cast<int>(hw.size()) != box.dim) throw Error("coeffs_from_json: half_width size");
  for (int a = 0; a < box.dim; ++a) {
    box.lo[a] = -hw[a];
    box.hi[a] = hw[a];
  }
  CoeffKey key{j.at("seed").get<std::uint64_t>(), j.at("sample").get<std::uint64_t>(),
               j.at("stream").get<std::uint32_t>()};
  std::vector<cplx> values(box.count());
  for (const auto& e : j.at("coeffs")) {
    const auto kv = e.at("k").get<std::vector<int>>();
    IVec k{};
    for (int a = 0; a < box.dim; ++a) k[a] = kv.at(a);
    if (!box.contains(k)) throw Error("coeffs_from_json: k outside box");
    values[box.index(k)] = cplx(e.at("g").at(0).get<double>(), e.at("g").at(1).get<double>());
  }
  return CoeffSet(box, key, std::move(values));
}

}  // namespace rwave

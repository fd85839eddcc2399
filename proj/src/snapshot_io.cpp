#include "rwave/snapshot_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace rwave {
namespace {

constexpr char kMagic[4] = {'R', 'W', 'F', '1'};

template <typename T>
void put_le(std::ostream& os, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  }
  os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get_le(std::istream& is) {
  unsigned char bytes[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw Error("read_field: truncated snapshot");
  }
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  }
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void write_field(std::ostream& os, const Field& f) {
  os.write(kMagic, 4);
  put_le<std::int32_t>(os, f.grid().dim());
  put_le<std::int32_t>(os, f.grid().n());
  put_le<std::int32_t>(os, f.grid().refine());
  put_le<std::int32_t>(os, static_cast<std::int32_t>(f.rep()));
  for (const auto& z : f.values()) {
    put_le<double>(os, z.real());
    put_le<double>(os, z.imag());
  }
  if (!os) throw Error("write_field: stream error");
}

Field read_field(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    throw Error("read_field: bad magic (expected RWF1)");
  }
  const auto dim = get_le<std::int32_t>(is);
  const auto n = get_le<std::int32_t>(is);
  const auto refine = get_le<std::int32_t>(is);
  const auto rep = get_le<std::int32_t>(is);
  if (rep != 0 && rep != 1) throw Error("read_field: bad representation flag");
  GridSpec grid = make_grid(dim, n, refine);
  CVec values(grid.size());
  for (auto& z : values) {
    const double re = get_le<double>(is);
    const double im = get_le<double>(is);
    z = cplx(re, im);
  }
  return Field(grid, static_cast<Rep>(rep), std::move(values));
}

void save_field(const std::string& path, const Field& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("save_field: cannot open " + path);
  write_field(os, f);
}

Field load_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("load_field: cannot open " + path);
  return read_field(is);
}

}  // namespace rwave

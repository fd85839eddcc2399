#pragma once

#include <iosfwd>
#include <string>

#include "rwave/grid.hpp"

namespace rwave {

// Binary field snapshot: "RWF1", then dim, n_per_axis, refine, rep as int32
// little-endian, then interleaved re/im float64 little-endian values in
// row-major axis order (the Field storage order).
void write_field(std::ostream& os, const Field& f);
Field read_field(std::istream& is);

void save_field(const std::string& path, const Field& f);
Field load_field(const std::string& path);

}  // namespace rwave

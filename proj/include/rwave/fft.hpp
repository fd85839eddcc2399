#pragma once

#include <functional>
#include <span>

#include "rwave/grid.hpp"

namespace rwave {

enum class Direction { forward, inverse };

/// Unitary DFT in place: forward uses e^{-i x.xi} and both directions carry
/// a 1/sqrt(N) factor, so the round trip is the identity.
void fft_inplace(std::span<cplx> data, const GridSpec& grid, Direction dir);

/// Returns f in the requested representation (forward: physical -> spectral).
Field transform(const Field& f, Direction dir);

Field to_spectral(const Field& f);
Field to_physical(const Field& f);

/// Multiplies the spectrum of f by symbol(i), where i is the linear grid
/// index, and returns the result in f's representation.
Field apply_symbol(const Field& f, const std::function<cplx(std::size_t)>& symbol);

/// Same, for a real symbol table with one entry per grid point.
Field apply_symbol(const Field& f, std::span<const double> symbol);

}  // namespace rwave

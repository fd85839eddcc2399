#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace rwave {

/// Philox4x32-10 (Salmon et al., SC'11): a keyed bijection on 128-bit
/// counters. Equal (key, counter) always yields equal output, which is what
/// makes per-coefficient and per-sample streams independent of scheduling.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key);

PhiloxKey philox_key(std::uint64_t seed);

/// Uniform double in (0, 1) from two 32-bit words (52 random bits).
double uniform_open(std::uint32_t hi, std::uint32_t lo);

/// Two independent standard normals from one Philox block (Box-Muller).
std::pair<double, double> gaussian_pair(const PhiloxCounter& block);

}  // namespace rwave

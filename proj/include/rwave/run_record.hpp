#pragma once

#include <chrono>
#include <string>

#include "json.hpp"
#include "rwave/config.hpp"

namespace rwave {

inline constexpr const char* kVersion = "0.1.0";

/// Header carried by every CLI artifact.
struct RunRecord {
  std::string command;
  std::string config_digest;
  std::uint64_t seed = 0;
  int grid_dim = 0;
  int grid_n = 0;
  int grid_refine = 0;
  int thread_count = 1;
  double wall_time = 0.0;  // seconds
  nlohmann::json config;   // resolved key/value pairs
  nlohmann::json reports = nlohmann::json::object();
};

RunRecord make_record(const std::string& command, const Config& cfg, int thread_count);

nlohmann::json to_json(const RunRecord& r);

/// The record without wall_time: the part that must reproduce bitwise.
nlohmann::json reproducible_payload(const RunRecord& r);

/// Measures wall time from construction.
class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace rwave

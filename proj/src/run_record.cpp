#include "rwave/run_record.hpp"

namespace rwave {

RunRecord make_record(const std::string& command, const Config& cfg, int thread_count) {
  RunRecord r;
  r.command = command;
  r.config_digest = cfg.digest();
  r.seed = cfg.unsigned_integer("seed");
  r.grid_dim = static_cast<int>(cfg.integer("grid.dim"));
  r.grid_n = static_cast<int>(cfg.integer("grid.n"));
  r.grid_refine = static_cast<int>(cfg.integer("grid.refine"));
  r.thread_count = thread_count;
  r.config = nlohmann::json::object();
  for (const auto& e : config_schema()) r.config[e.key] = cfg.raw(e.key);
  return r;
}

nlohmann::json reproducible_payload(const RunRecord& r) {
  nlohmann::json j;
  j["version"] = kVersion;
  j["command"] = r.command;
  j["config_digest"] = r.config_digest;
  j["seed"] = r.seed;
  j["grid"] = {{"dim", r.grid_dim}, {"n", r.grid_n}, {"refine", r.grid_refine}};
  j["thread_count"] = r.thread_count;
  j["config"] = r.config;
  j["reports"] = r.reports;
  return j;
}

nlohmann::json to_json(const RunRecord& r) {
  nlohmann::json j = reproducible_payload(r);
  j["wall_time"] = r.wall_time;
  return j;
}

}  // namespace rwave

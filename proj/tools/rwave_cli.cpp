// rwave: command-line driver for the randomized-data wave toolkit.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "rwave/config.hpp"
#include "rwave/datasets.hpp"
#include "rwave/deviation_lab.hpp"
#include "rwave/fft.hpp"
#include "rwave/invariant_suite.hpp"
#include "rwave/morawetz.hpp"
#include "rwave/multipliers.hpp"
#include "rwave/nlw_solver.hpp"
#include "rwave/norms.hpp"
#include "rwave/propagator.hpp"
#include "rwave/randomizer.hpp"
#include "rwave/run_record.hpp"
#include "rwave/scattering.hpp"
#include "rwave/snapshot_io.hpp"

namespace fs = std::filesystem;
using namespace rwave;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

struct Flags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string out = ".";
  std::optional<std::string> grid;
  std::optional<double> dt;
  std::optional<double> T;
  std::optional<long> samples;
  std::optional<std::string> threshold;
};

Config resolve_config(const Flags& f) {
  Config cfg = f.config_path.empty() ? Config() : Config::load(f.config_path);
  if (f.seed) cfg.set("seed", std::to_string(*f.seed));
  if (f.threads) cfg.set("threads", std::to_string(*f.threads));
  if (f.dt) cfg.set("dt", std::to_string(*f.dt));
  if (f.T) cfg.set("T", std::to_string(*f.T));
  if (f.samples) cfg.set("samples", std::to_string(*f.samples));
  if (f.threshold) cfg.set("threshold", *f.threshold);
  if (f.grid) {
    std::stringstream ss(*f.grid);
    std::string part;
    const char* keys[] = {"grid.dim", "grid.n", "grid.refine"};
    int i = 0;
    while (std::getline(ss, part, ',')) {
      if (i >= 3) throw ConfigError("--grid: expected d,n,P");
      cfg.set(keys[i++], part);
    }
    if (i != 3) throw ConfigError("--grid: expected d,n,P");
  }
  return cfg;
}

int resolve_threads(const Config& cfg) {
  const long configured = cfg.integer("threads");
  if (configured > 0) return static_cast<int>(configured);
  if (const char* env = std::getenv("RWAVE_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
    throw ConfigError("RWAVE_THREADS: expected a positive integer, got '" + std::string(env) + "'");
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

GridSpec grid_of(const Config& cfg) {
  return make_grid(static_cast<int>(cfg.integer("grid.dim")), static_cast<int>(cfg.integer("grid.n")),
                   static_cast<int>(cfg.integer("grid.refine")));
}

StatePair initial_data(const Config& cfg, const GridSpec& grid) {
  if (cfg.raw("data.kind") == "zero") return StatePair::zero(grid);
  return gaussian_data(grid, cfg.real("data.amplitude"), cfg.real("data.width"));
}

std::unique_ptr<ForcingProvider> forcing_of(const Config& cfg, const GridSpec& grid) {
  if (cfg.raw("forcing.kind") == "zero") return std::make_unique<ZeroForcing>(grid);
  return std::make_unique<FreeWaveForcing>(randomized_forcing(
      grid, cfg.unsigned_integer("seed"), 0, cfg.real("forcing.amplitude"), cfg.real("forcing.width"),
      cfg.real("threshold")));
}

SolverOptions solver_options(const Config& cfg) {
  SolverOptions o;
  o.nonlinear = cfg.boolean("solve.nonlinear");
  o.dealias = cfg.boolean("solve.dealias");
  return o;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path.string());
  os << j.dump(2) << '\n';
}

/// "# rwave <version> seed=<s> grid=<d,n,P> digest=<hex>" for text artifacts.
std::string text_header(const RunRecord& r) {
  std::ostringstream os;
  os << "# rwave " << kVersion << " seed=" << r.seed << " grid=" << r.grid_dim << ',' << r.grid_n
     << ',' << r.grid_refine << " digest=" << r.config_digest;
  return os.str();
}

int cmd_randomize(const Config& cfg, RunRecord& rec, const fs::path& out) {
  const GridSpec grid = grid_of(cfg);
  const StatePair data = initial_data(cfg, grid);
  const LatticeBox box = LatticeBox::for_grid(grid);
  const CoeffSet g = sample_coeffs(CoeffKey{cfg.unsigned_integer("seed"), 0, 0}, box);
  RandomizeReport rep;
  const Field fw = randomize(data.pos, g, &rep);
  save_field((out / "f_omega.rwf").string(), fw);
  write_json(out / "coeffs.json", to_json(g));
  rec.reports["randomize"] = {{"imag_residue", rep.imag_residue},
                              {"truncation", rep.truncation},
                              {"truncated", rep.truncated},
                              {"l2_input", lp_norm(data.pos, 2.0)},
                              {"l2_output", lp_norm(fw, 2.0)}};
  return kOk;
}

int cmd_free_evolve(const Config& cfg, RunRecord& rec, const fs::path& out) {
  const GridSpec grid = grid_of(cfg);
  const StatePair data = initial_data(cfg, grid);
  const double T = cfg.real("T");
  const double dt = cfg.real("dt");
  const long n = std::max<long>(1, static_cast<long>(std::ceil(T / dt - 1e-9)));
  std::ofstream os(out / "trajectory.jsonl");
  os << nlohmann::json({{"record", reproducible_payload(rec)}}).dump() << '\n';
  StatePair last = data;
  for (long j = 0; j <= n; ++j) {
    const double t = T * j / n;
    last = free_evolve(data, t);
    os << nlohmann::json({{"t", t},
                          {"linear_energy", linear_energy(last)},
                          {"l6", lp_norm(last.pos, 6.0)},
                          {"linf", lp_norm(last.pos, kInf)}})
              .dump()
       << '\n';
  }
  save_field((out / "final_pos.rwf").string(), last.pos);
  save_field((out / "final_vel.rwf").string(), last.vel);
  rec.reports["free_evolve"] = {{"T", T}, {"snapshots", n + 1}};
  return kOk;
}

int cmd_solve(const Config& cfg, RunRecord& rec, const fs::path& out) {
  const GridSpec grid = grid_of(cfg);
  const StatePair data = initial_data(cfg, grid);
  const auto forcing = forcing_of(cfg, grid);
  SolverOptions opts = solver_options(cfg);
  MorawetzRecorder recorder;
  if (grid.dim() == 4) opts.observer = recorder.observer();
  const Trajectory tr = solve(data, *forcing, cfg.real("T"), cfg.real("dt"),
                              static_cast<int>(cfg.integer("solve.snap_every")), opts);
  {
    std::ofstream os(out / "monitors.jsonl");
    os << nlohmann::json({{"record", reproducible_payload(rec)}}).dump() << '\n';
    write_monitors_jsonl(os, tr);
  }
  save_field((out / "final_pos.rwf").string(), tr.states.back().pos);
  save_field((out / "final_vel.rwf").string(), tr.states.back().vel);
  rec.reports["solve"] = {{"steps", tr.monitors.size() - 1},
                          {"dt", tr.dt},
                          {"forcing", tr.forcing_ref},
                          {"blowup", tr.blowup},
                          {"energy_initial", tr.monitors.front().energy},
                          {"energy_final", tr.monitors.back().energy}};
  if (grid.dim() == 4 && !recorder.samples().empty()) {
    rec.reports["bootstrap"] = to_json(bootstrap_quantities(recorder.samples()));
  }
  if (tr.blowup) {
    std::cerr << "solve: blowup detected at t = " << tr.blowup_time << '\n';
    return kCheckFailed;
  }
  return kOk;
}

int cmd_montecarlo(const Config& cfg, RunRecord& rec, const fs::path& out) {
  const GridSpec grid = grid_of(cfg);
  const Field f0 = initial_data(cfg, grid).pos;
  const Field f1(grid, Rep::physical);
  std::vector<McFunctional> fns;
  for (const auto& name : cfg.list("montecarlo.functionals")) fns.push_back(parse_functional(name));
  McOptions opts;
  opts.threshold = cfg.real("threshold");
  opts.hs_s = cfg.real("montecarlo.hs_s");
  opts.threads = rec.thread_count;
  const auto n = static_cast<std::size_t>(cfg.integer("samples"));
  const std::uint64_t seed = cfg.unsigned_integer("seed");
  const double T = cfg.real("T");
  const double dt = cfg.real("dt");
  const auto results = mc_functionals(f0, f1, fns, n, seed, T, dt, opts);

  nlohmann::json manifest = experiment_manifest(grid, fns, n, seed, T, dt, opts);
  manifest["record"] = reproducible_payload(rec);
  write_json(out / "manifest.json", manifest);
  nlohmann::json tails = nlohmann::json::object();
  for (const auto& [fn, samples] : results) {
    const std::string id = to_string(fn);
    std::ofstream os(out / ("samples_" + id + ".csv"));
    os << text_header(rec) << "\nindex,value\n";
    os.precision(17);
    for (std::size_t i = 0; i < samples.size(); ++i) os << i << ',' << samples[i] << '\n';
    if (samples.size() >= 1000) {
      const TailCurve c = tail_estimate(samples, default_lambda_grid(samples), id);
      std::ofstream cs(out / ("tail_" + id + ".csv"));
      cs << text_header(rec) << '\n';
      write_csv(cs, c);
      tails[id] = to_json(c);
    }
  }
  rec.reports["montecarlo"] = {{"manifest", experiment_manifest(grid, fns, n, seed, T, dt, opts)},
                               {"tails", tails}};
  return kOk;
}

int cmd_verify(const Config& cfg, RunRecord& rec, const fs::path&) {
  const auto checks = run_invariant_suite(grid_of(cfg), cfg.unsigned_integer("seed"));
  bool all = true;
  for (const auto& c : checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << "  value=" << c.value
              << " bound=" << c.tolerance;
    if (!c.detail.empty()) std::cout << "  " << c.detail;
    std::cout << '\n';
    all = all && c.passed;
  }
  std::cout << (all ? "all checks passed" : "some checks failed") << '\n';
  rec.reports["verify"] = to_json(checks);
  return all ? kOk : kCheckFailed;
}

int cmd_partition(const Config& cfg, RunRecord& rec, const fs::path&) {
  const GridSpec grid = grid_of(cfg);
  const StatePair data = initial_data(cfg, grid);
  const auto forcing = forcing_of(cfg, grid);
  const double T = cfg.real("T");
  const double dt = cfg.real("dt");
  const long n = std::max<long>(1, static_cast<long>(std::ceil(T / dt - 1e-9)));
  const auto snaps = sample_forcing(*forcing, 0.0, T, static_cast<int>(n + 1));
  const PartitionPlan plan = partition_by_forcing(snaps, cfg.real("partition.eps"));
  const SolverOptions opts = solver_options(cfg);
  nlohmann::json gaps = nlohmann::json::array();
  StatePair u = data;
  bool blowup = false;
  for (const auto& iv : plan.intervals) {
    if (!(iv[1] > iv[0])) continue;
    StatePair next;
    const GapReport g = perturbation_gap(iv, u, *forcing, dt, opts, &next);
    gaps.push_back(to_json(g));
    if (g.blowup_forced || g.blowup_unforced) {
      blowup = true;
      break;
    }
    u = std::move(next);
  }
  rec.reports["partition"] = {{"plan", to_json(plan)}, {"gaps", gaps}, {"blowup", blowup}};
  return blowup ? kCheckFailed : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rwave: randomized-data energy-critical wave toolkit"};
  app.require_subcommand(1);
  Flags flags;
  app.add_option("--config", flags.config_path, "key = value configuration file");
  app.add_option("--seed", flags.seed, "master seed (u64)");
  app.add_option("--threads", flags.threads, "worker threads (default: $RWAVE_THREADS or hardware)");
  app.add_option("--out", flags.out, "output directory")->capture_default_str();
  app.add_option("--grid", flags.grid, "grid as d,n,P");
  app.add_option("--dt", flags.dt, "time step");
  app.add_option("--T", flags.T, "time window");
  app.add_option("--samples", flags.samples, "Monte Carlo samples");
  app.add_option("--threshold", flags.threshold, "dyadic high-pass threshold {1|4}");

  using Handler = int (*)(const Config&, RunRecord&, const fs::path&);
  const std::vector<std::pair<std::string, std::pair<std::string, Handler>>> commands = {
      {"randomize", {"emit a randomized snapshot f^omega", cmd_randomize}},
      {"free-evolve", {"emit a free-evolution trajectory", cmd_free_evolve}},
      {"solve", {"forced or unforced nonlinear run with monitors", cmd_solve}},
      {"montecarlo", {"Monte Carlo samples and tail curves", cmd_montecarlo}},
      {"verify", {"run the invariant suite", cmd_verify}},
      {"partition", {"forcing partition plan and perturbation gaps", cmd_partition}},
  };
  for (const auto& [name, info] : commands) {
    auto* sub = app.add_subcommand(name, info.first);
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  std::string command;
  Handler handler = nullptr;
  for (const auto& [name, info] : commands) {
    if (app.got_subcommand(name)) {
      command = name;
      handler = info.second;
    }
  }

  try {
    const Config cfg = resolve_config(flags);
    const int threads = resolve_threads(cfg);
    const fs::path out(flags.out);
    fs::create_directories(out);
    RunRecord rec = make_record(command, cfg, threads);
    const Stopwatch clock;
    const int status = handler(cfg, rec, out);
    rec.wall_time = clock.seconds();
    write_json(out / (command + ".record.json"), to_json(rec));
    return status;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}

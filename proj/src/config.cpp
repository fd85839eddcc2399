#include "rwave/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace rwave {

const std::vector<SchemaEntry>& config_schema() {
  static const std::vector<SchemaEntry> schema = {
      {"grid.dim", ValueType::integer, "4", {}, "spatial dimension, 1..4"},
      {"grid.n", ValueType::integer, "16", {}, "points per axis, even, >= 8"},
      {"grid.refine", ValueType::integer, "1", {}, "torus refinement P; side length 2 pi P"},
      {"seed", ValueType::unsigned_integer, "1", {}, "master seed"},
      {"threads", ValueType::integer, "0", {}, "worker threads; 0 = environment or hardware"},
      {"dt", ValueType::real, "0.05", {}, "time step"},
      {"T", ValueType::real, "1", {}, "time window length"},
      {"samples", ValueType::integer, "1000", {}, "Monte Carlo sample count"},
      {"threshold", ValueType::choice, "1", {"1", "4"}, "dyadic high-pass threshold"},
      {"data.kind", ValueType::choice, "gaussian", {"gaussian", "zero"}, "initial data family"},
      {"data.amplitude", ValueType::real, "0.5", {}, "initial data amplitude"},
      {"data.width", ValueType::real, "0.7", {}, "Gaussian width of the initial data"},
      {"forcing.kind", ValueType::choice, "zero", {"zero", "free"},
       "zero, or the free evolution of randomized high-frequency data"},
      {"forcing.amplitude", ValueType::real, "0.05", {}, "forcing data amplitude"},
      {"forcing.width", ValueType::real, "0.7", {}, "Gaussian width of the forcing data"},
      {"solve.nonlinear", ValueType::boolean, "true", {}, "include the cubic term"},
      {"solve.dealias", ValueType::boolean, "true", {}, "2/3-rule truncation"},
      {"solve.snap_every", ValueType::integer, "10", {}, "steps between stored states"},
      {"montecarlo.functionals", ValueType::list, "l3l6_free",
       {"l3l6_free", "weighted_l2linf_free", "hs_norm"}, "comma-separated functionals"},
      {"montecarlo.hs_s", ValueType::real, "0", {}, "Sobolev index of hs_norm"},
      {"partition.eps", ValueType::real, "0.05", {}, "forcing norm per interval"},
  };
  return schema;
}

namespace {

const SchemaEntry& entry_for(const std::string& key) {
  for (const auto& e : config_schema()) {
    if (e.key == key) return e;
  }
  throw ConfigError("config: unknown key '" + key + "'");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
bool parse_number(const std::string& s, T& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

/// Validates and canonicalizes a value.
std::string canonical(const SchemaEntry& e, const std::string& value) {
  const std::string v = trim(value);
  auto fail = [&](const std::string& what) -> std::string {
    throw ConfigError("config: " + e.key + ": expected " + what + ", got '" + v + "'");
  };
  switch (e.type) {
    case ValueType::integer: {
      long x = 0;
      if (!parse_number(v, x)) fail("an integer");
      return std::to_string(x);
    }
    case ValueType::unsigned_integer: {
      std::uint64_t x = 0;
      if (!parse_number(v, x)) fail("an unsigned 64-bit integer");
      return std::to_string(x);
    }
    case ValueType::real: {
      double x = 0.0;
      if (!parse_number(v, x) || !std::isfinite(x)) fail("a finite real number");
      std::ostringstream os;
      os << std::setprecision(17) << x;
      return os.str();
    }
    case ValueType::boolean:
      if (v == "true" || v == "1" || v == "yes") return "true";
      if (v == "false" || v == "0" || v == "no") return "false";
      return fail("true or false");
    case ValueType::choice:
      if (std::find(e.choices.begin(), e.choices.end(), v) == e.choices.end()) {
        std::string opts;
        for (const auto& c : e.choices) opts += (opts.empty() ? "" : "|") + c;
        fail("one of " + opts);
      }
      return v;
    case ValueType::list: {
      const auto items = split_list(v);
      if (items.empty()) fail("a non-empty list");
      std::string out;
      for (const auto& item : items) {
        if (std::find(e.choices.begin(), e.choices.end(), item) == e.choices.end()) {
          throw ConfigError("config: " + e.key + ": unknown item '" + item + "'");
        }
        out += (out.empty() ? "" : ",") + item;
      }
      return out;
    }
  }
  return v;
}

}  // namespace

Config::Config() {
  for (const auto& e : config_schema()) values_[e.key] = canonical(e, e.default_value);
}

Config Config::parse(std::istream& is, const std::string& source) {
  Config cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    try {
      cfg.set(key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

Config Config::parse_string(const std::string& text) {
  std::istringstream is(text);
  return parse(is);
}

Config Config::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config: cannot open " + path);
  return parse(is, path);
}

void Config::set(const std::string& key, const std::string& value) {
  values_[key] = canonical(entry_for(key), value);
}

const std::string& Config::raw(const std::string& key) const {
  entry_for(key);
  return values_.at(key);
}

long Config::integer(const std::string& key) const { return std::stol(raw(key)); }

std::uint64_t Config::unsigned_integer(const std::string& key) const {
  return std::stoull(raw(key));
}

double Config::real(const std::string& key) const { return std::stod(raw(key)); }

bool Config::boolean(const std::string& key) const { return raw(key) == "true"; }

std::vector<std::string> Config::list(const std::string& key) const { return split_list(raw(key)); }

std::string Config::serialize() const {
  std::string out;
  for (const auto& e : config_schema()) out += e.key + " = " + values_.at(e.key) + "\n";
  return out;
}

std::string Config::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : serialize()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

}  // namespace rwave

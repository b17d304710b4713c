#pragma once

// Run configuration in a flat `section.key = value` line format with `#`
// comments. Every error carries the offending line number.

#include <charconv>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "relaxns/errors.hpp"
#include "relaxns/solver.hpp"

namespace relaxns {

enum class RunMode { relaxed, classical };

struct SweepAxes {
  std::vector<double> L, gamma, tau2, M;
  std::vector<int> N;
  bool empty() const { return L.empty() && gamma.empty() && tau2.empty() && M.empty() && N.empty(); }
};

struct RunConfig {
  SimulationConfig sim;
  RunMode mode = RunMode::relaxed;
  std::string output = "out";
  int workers = 1;
  SweepAxes sweep;
  std::vector<double> limit_taus{0.1, 0.05, 0.025, 0.0125};
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(const std::string& key, const std::string& v, int line) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError(key + ": expected a number, got '" + v + "'", line);
  }
  return out;
}

inline int parse_int(const std::string& key, const std::string& v, int line) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'", line);
  }
  return out;
}

inline std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace detail

/// Parses and validates a configuration. Required keys: the eight gas.*
/// keys, grid.xmin, grid.xmax, grid.N and time.t_end. Defaults:
/// cfl = 0.45, order = 1, snapshot_every = 100.
inline RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  SimulationConfig& sim = cfg.sim;
  std::map<std::string, int> seen;

  enum class Range { any, positive, nonneg, unit_open_closed, alpha, order, mode, kind, preset, list, list_int, text };
  struct Key {
    Range range;
  };
  // clang-format off
  const std::map<std::string, Range> keys{
      {"gas.Cv", Range::positive}, {"gas.R", Range::positive}, {"gas.mu", Range::positive},
      {"gas.tau2", Range::positive}, {"gas.kappa0", Range::positive}, {"gas.Zk", Range::positive},
      {"gas.Zalpha", Range::alpha}, {"gas.sigma", Range::positive},
      {"grid.xmin", Range::any}, {"grid.xmax", Range::any}, {"grid.N", Range::positive},
      {"time.cfl", Range::unit_open_closed}, {"time.t_end", Range::positive},
      {"time.dt_floor", Range::positive}, {"time.snapshot_every", Range::nonneg},
      {"breakdown.grad_threshold", Range::positive}, {"breakdown.theta_min", Range::positive},
      {"breakdown.rho_min", Range::positive}, {"breakdown.amplification", Range::positive},
      {"init.preset", Range::preset}, {"init.epsilon", Range::nonneg},
      {"run.mode", Range::mode}, {"run.order", Range::order}, {"run.output", Range::text},
      {"run.support_tol", Range::nonneg}, {"run.workers", Range::positive},
      {"sweep.L", Range::list}, {"sweep.gamma", Range::list}, {"sweep.tau2", Range::list},
      {"sweep.M", Range::list}, {"sweep.N", Range::list_int}, {"limit.taus", Range::list},
  };
  // clang-format on
  auto lookup = [&](const std::string& key) -> std::optional<Range> {
    if (auto it = keys.find(key); it != keys.end()) return it->second;
    for (const char* var : {"rho", "u", "theta", "q", "S"}) {
      const std::string base = std::string("init.") + var + ".";
      if (key == base + "kind") return Range::kind;
      if (key == base + "amplitude") return Range::any;
      if (key == base + "halfwidth") return Range::positive;
    }
    return std::nullopt;
  };
  auto profile = [&](const std::string& var) -> ProfileSpec& {
    InitSpec& in = sim.init;
    if (var == "rho") return in.rho;
    if (var == "u") return in.u;
    if (var == "theta") return in.theta;
    if (var == "q") return in.q;
    return in.S;
  };

  std::string preset = "none";
  double epsilon = 1e-3;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string body = detail::trim(raw);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'section.key = value'", line);
    const std::string key = detail::trim(std::string_view(body).substr(0, eq));
    const std::string val = detail::trim(std::string_view(body).substr(eq + 1));
    const auto range = lookup(key);
    if (!range) throw ConfigError("unknown key '" + key + "'", line);
    if (seen.count(key)) throw ConfigError("duplicate key '" + key + "'", line);
    if (val.empty()) throw ConfigError(key + ": missing value", line);
    seen[key] = line;

    auto number = [&] {
      const double x = detail::parse_double(key, val, line);
      switch (*range) {
        case Range::positive:
          if (!(x > 0.0)) throw ConfigError(key + " must be positive, got " + val, line);
          break;
        case Range::nonneg:
          if (!(x >= 0.0)) throw ConfigError(key + " must be nonnegative, got " + val, line);
          break;
        case Range::unit_open_closed:
          if (!(x > 0.0 && x <= 1.0)) throw ConfigError(key + " must lie in (0, 1], got " + val, line);
          break;
        case Range::alpha:
          if (!(x >= 1.0 && x < 2.0)) throw ConfigError(key + " must lie in [1, 2), got " + val, line);
          break;
        default:
          break;
      }
      return x;
    };

    if (key == "gas.Cv") sim.gas.Cv = number();
    else if (key == "gas.R") sim.gas.R = number();
    else if (key == "gas.mu") sim.gas.mu = number();
    else if (key == "gas.tau2") sim.gas.tau2 = number();
    else if (key == "gas.kappa0") sim.gas.kappa0 = number();
    else if (key == "gas.Zk") sim.gas.Zk = number();
    else if (key == "gas.Zalpha") sim.gas.Zalpha = number();
    else if (key == "gas.sigma") sim.gas.sigma = number();
    else if (key == "grid.xmin") sim.grid.xmin = number();
    else if (key == "grid.xmax") sim.grid.xmax = number();
    else if (key == "grid.N") {
      sim.grid.N = detail::parse_int(key, val, line);
      if (sim.grid.N < 16) throw ConfigError("grid.N must be at least 16", line);
    } else if (key == "time.cfl") sim.time.cfl = number();
    else if (key == "time.t_end") sim.time.t_end = number();
    else if (key == "time.dt_floor") sim.time.dt_floor = number();
    else if (key == "time.snapshot_every") {
      sim.time.snapshot_every = detail::parse_int(key, val, line);
      if (sim.time.snapshot_every < 0) throw ConfigError(key + " must be nonnegative", line);
    } else if (key == "breakdown.grad_threshold") sim.breakdown.grad_threshold = number();
    else if (key == "breakdown.theta_min") sim.breakdown.theta_min = number();
    else if (key == "breakdown.rho_min") sim.breakdown.rho_min = number();
    else if (key == "breakdown.amplification") sim.breakdown.amplification = number();
    else if (key == "init.preset") {
      if (val != "none" && val != "small_data") throw ConfigError("init.preset must be none or small_data", line);
      preset = val;
    } else if (key == "init.epsilon") epsilon = number();
    else if (key == "run.mode") {
      if (val == "relaxed") cfg.mode = RunMode::relaxed;
      else if (val == "classical") cfg.mode = RunMode::classical;
      else throw ConfigError("run.mode must be relaxed or classical", line);
    } else if (key == "run.order") {
      sim.order = detail::parse_int(key, val, line);
      if (sim.order != 1 && sim.order != 2) throw ConfigError("run.order must be 1 or 2", line);
    } else if (key == "run.output") cfg.output = val;
    else if (key == "run.support_tol") sim.support_tol = number();
    else if (key == "run.workers") cfg.workers = detail::parse_int(key, val, line);
    else if (key.starts_with("sweep.") || key == "limit.taus") {
      std::vector<double> xs;
      for (const auto& item : detail::split_list(val)) xs.push_back(detail::parse_double(key, item, line));
      if (xs.empty()) throw ConfigError(key + ": empty list", line);
      if (key == "sweep.L") cfg.sweep.L = xs;
      else if (key == "sweep.gamma") {
        for (double g : xs) if (!(g > 1.0 && g < 3.0)) throw ConfigError("sweep.gamma values must lie in (1, 3)", line);
        cfg.sweep.gamma = xs;
      } else if (key == "sweep.tau2") cfg.sweep.tau2 = xs;
      else if (key == "sweep.M") cfg.sweep.M = xs;
      else if (key == "sweep.N") {
        for (double n : xs) cfg.sweep.N.push_back(static_cast<int>(n));
      } else {
        for (double tau : xs) if (!(tau > 0.0)) throw ConfigError("limit.taus must be positive", line);
        cfg.limit_taus = xs;
      }
    } else {
      // init.<var>.<field>
      const auto dot = key.find('.', 5);
      const std::string var = key.substr(5, dot - 5);
      const std::string field = key.substr(dot + 1);
      ProfileSpec& p = profile(var);
      try {
        if (field == "kind") p.kind = parse_profile_kind(val);
        else if (field == "amplitude") p.amplitude = number();
        else p.halfwidth = number();
      } catch (const ConfigError& e) {
        if (e.line() > 0) throw;
        throw ConfigError(key + ": " + e.what(), line);
      }
    }
  }

  for (const char* req : {"gas.Cv", "gas.R", "gas.mu", "gas.tau2", "gas.kappa0", "gas.Zk", "gas.Zalpha",
                          "gas.sigma", "grid.xmin", "grid.xmax", "grid.N", "time.t_end"}) {
    if (!seen.count(req)) throw ConfigError(std::string("missing required key '") + req + "'");
  }
  if (preset == "small_data") {
    for (const char* var : {"rho", "u", "theta", "q", "S"}) {
      if (seen.count(std::string("init.") + var + ".kind")) {
        throw ConfigError("init.preset = small_data cannot be combined with per-variable profiles",
                          seen[std::string("init.") + var + ".kind"]);
      }
    }
    sim.init = small_data_spec(epsilon);
  }
  try {
    sim.validate();
  } catch (const ConfigError& e) {
    // Attribute cross-key failures to the most specific line we know.
    const std::string msg = e.what();
    int at = 0;
    if (msg.find("gamma") != std::string::npos) at = seen.count("gas.R") ? seen["gas.R"] : 0;
    else if (msg.find("xmax") != std::string::npos) at = seen["grid.xmax"];
    else if (msg.find("sideris") != std::string::npos && seen.count("init.u.halfwidth")) at = seen["init.u.halfwidth"];
    throw ConfigError(msg, at);
  }
  return cfg;
}

}  // namespace relaxns

#pragma once

// Command implementations behind the relaxns executable. Each returns the
// process exit code; files go under the output directory.

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "relaxns/classical.hpp"
#include "relaxns/config.hpp"
#include "relaxns/hyperbolic.hpp"
#include "relaxns/io.hpp"
#include "relaxns/riccati.hpp"
#include "relaxns/solver.hpp"

namespace relaxns {

namespace exit_code {
inline constexpr int completed = 0;
inline constexpr int config_error = 2;
inline constexpr int runtime_error = 3;
inline constexpr int breakdown = 10;
}  // namespace exit_code

inline int exit_code_for(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return exit_code::completed;
    case RunStatus::breakdown: return exit_code::breakdown;
    case RunStatus::dt_floor_hit:
    case RunStatus::domain_error: return exit_code::runtime_error;
  }
  return exit_code::runtime_error;
}

// ---------------------------------------------------------------------------
// Threshold report

struct LFeasibility {
  double L_min = 0.0;  // AS1 holds for L > L_min
  double L_max = 0.0;  // AS3 holds for L <= L_max
  bool feasible = false;
};

struct ThresholdSummary {
  bool has_constants = false;  // false when the initial data has no support
  RiccatiData data;
  ThresholdReport report;
  double sigma_num = 0.0;
  double G0 = 0.0;
  std::optional<LFeasibility> feasibility;  // sideris velocity only
};

/// AS1 is affine in the velocity amplitude L and AS3 is quadratic in it;
/// the other profiles are held fixed.
inline LFeasibility sideris_feasibility(const SimulationConfig& cfg, const ThresholdSummary& s) {
  auto at = [&](double L) {
    InitSpec spec = cfg.init;
    spec.u.amplitude = L;
    const auto f = sample_field(spec, cfg.grid);
    return std::pair{moment_F(f, cfg.grid, cfg.gas), u_l2sq(f, cfg.grid)};
  };
  const auto [f0, n0] = at(0.0);
  const auto [f1, n1] = at(1.0);
  const RiccatiData& d = s.data;
  const double g3 = 3.0 - d.gamma;
  LFeasibility out;
  out.L_min = f1 > f0 ? (s.report.AS1_threshold - f0) / (f1 - f0) : std::numeric_limits<double>::infinity();
  const double coef = 4.0 * (g3 * d.mu * d.tau2 / (d.M * d.M) + d.gamma - 1.0);
  const double room = s.report.AS3_rhs / coef - d.H0;
  out.L_max = room > 0.0 && n1 > n0 ? std::sqrt(room / (0.5 * d.max_rho0 * (n1 - n0))) : 0.0;
  out.feasible = room >= 0.0 && out.L_min < out.L_max;
  return out;
}

inline ThresholdSummary threshold_summary(const SimulationConfig& cfg, const AdmissibilityReport& init,
                                          const InitialBudget& budget, double sigma_num) {
  ThresholdSummary s;
  s.sigma_num = sigma_num;
  s.G0 = init.G0;
  s.data.F0 = init.F0;
  s.data.H0 = budget.H0;
  s.data.sigma = cfg.gas.sigma;
  if (init.M > 0.0) {
    s.has_constants = true;
    s.data = riccati_constants(cfg.gas, init.M, init.F0, budget);
    s.report = check_thresholds(s.data);
    if (cfg.init.u.kind == ProfileKind::sideris) s.feasibility = sideris_feasibility(cfg, s);
  }
  return s;
}

inline KeyValueBlock threshold_block(const ThresholdSummary& s, const InitialBudget& budget) {
  KeyValueBlock b;
  const auto& r = s.report;
  const auto& d = s.data;
  b.add("AS1", s.has_constants && r.AS1);
  b.add("AS3", s.has_constants && r.AS3);
  b.add("both", s.has_constants && r.both());
  if (s.has_constants) {
    b.add("AS1_threshold", r.AS1_threshold);
    b.add("AS1_margin", r.AS1_margin);
    b.add("AS3_lhs", r.AS3_lhs);
    b.add("AS3_rhs", r.AS3_rhs);
    b.add("AS3_margin", r.AS3_margin);
    b.add("AS3_rhs_from_c", r.rhs_from_c);
    b.add("c2", d.c2);
    b.add("c3", d.c3);
    b.add("blowup_threshold", d.blowup_threshold());
    b.add("Tstar", d.Tstar);
    b.add("M", d.M);
  } else {
    b.add("note", "initial data has no support; constants undefined");
  }
  b.add("F0", s.data.F0);
  b.add("sigma", s.data.sigma);
  b.add("sigma_num", s.sigma_num);
  b.add("sigma_below_num", s.data.sigma < s.sigma_num);
  b.add("G0", s.G0);
  b.add("H0", budget.H0);
  b.add("I0", budget.I0);
  b.add("max_rho0", budget.max_rho0);
  b.add("u0_l2sq", budget.u0_l2sq);
  if (s.feasibility) {
    b.add("L_min_AS1", s.feasibility->L_min);
    b.add("L_max_AS3", s.feasibility->L_max);
    b.add("jointly_feasible", s.feasibility->feasible);
  }
  return b;
}

// ---------------------------------------------------------------------------
// Summary rows shared by simulate and sweep

inline constexpr const char* kSummaryHeader =
    "L,gamma,tau2,M,N,status,breakdown_time,t_final,Tstar,AS1,AS3,sigma,sigma_num,sigma_below_num,steps,error";

struct SummaryRow {
  double L = 0.0, gamma = 0.0, tau2 = 0.0, M = 0.0;
  int N = 0;
  std::string status;
  double breakdown_time = std::numeric_limits<double>::quiet_NaN();
  double t_final = 0.0;
  double Tstar = std::numeric_limits<double>::infinity();
  bool AS1 = false, AS3 = false;
  double sigma = 0.0, sigma_num = 0.0;
  long steps = 0;
  std::string error;
};

inline void write_summary_row(std::ostream& os, const SummaryRow& r) {
  std::string err = r.error;
  std::replace(err.begin(), err.end(), ',', ';');
  std::replace(err.begin(), err.end(), '\n', ' ');
  os << fmt(r.L) << ',' << fmt(r.gamma) << ',' << fmt(r.tau2) << ',' << fmt(r.M) << ',' << r.N << ',' << r.status
     << ',' << fmt(r.breakdown_time) << ',' << fmt(r.t_final) << ',' << fmt(r.Tstar) << ',' << int(r.AS1) << ','
     << int(r.AS3) << ',' << fmt(r.sigma) << ',' << fmt(r.sigma_num) << ',' << int(r.sigma < r.sigma_num) << ','
     << r.steps << ',' << err << '\n';
}

inline SummaryRow summary_seed(const SimulationConfig& c) {
  SummaryRow row;
  row.L = c.init.u.amplitude;
  row.gamma = c.gas.gamma();
  row.tau2 = c.gas.tau2;
  row.M = c.init.support_halfwidth();
  row.N = c.grid.N;
  row.sigma = c.gas.sigma;
  return row;
}

/// Result of one configured run together with the derived diagnostics.
struct RunBundle {
  RunResult result;
  ThresholdSummary thresholds;
  std::optional<RiccatiTrajectory> riccati;
  SummaryRow summary;
};

inline RunResult run_mode(const SimulationConfig& sim, RunMode mode) {
  return mode == RunMode::classical ? run_classical(sim) : run(sim);
}

inline RunBundle run_bundle(const SimulationConfig& sim, RunMode mode) {
  RunBundle b;
  b.result = run_mode(sim, mode);
  const RunResult& r = b.result;
  const double sigma_num = r.series.empty() ? 0.0 : r.series.back().sigma_num;
  b.thresholds = threshold_summary(sim, r.init_report, r.budget, sigma_num);
  if (b.thresholds.has_constants) {
    const double horizon = std::max(r.t_final, 1e-12);
    b.riccati = riccati_ode_solve(b.thresholds.data, horizon, horizon / 4000.0);
  }
  SummaryRow& s = b.summary;
  s = summary_seed(sim);
  s.status = to_string(r.status);
  if (r.breakdown) s.breakdown_time = r.breakdown->t;
  s.t_final = r.t_final;
  s.Tstar = b.thresholds.data.Tstar;
  s.AS1 = b.thresholds.has_constants && b.thresholds.report.AS1;
  s.AS3 = b.thresholds.has_constants && b.thresholds.report.AS3;
  s.sigma_num = sigma_num;
  s.steps = r.steps;
  s.error = r.error;
  return b;
}

inline KeyValueBlock run_block(const RunResult& r) {
  KeyValueBlock b;
  b.add("status", to_string(r.status));
  b.add("t_final", r.t_final);
  b.add("steps", r.steps);
  if (r.breakdown) {
    b.add("breakdown_kind", to_string(r.breakdown->kind));
    b.add("breakdown_t", r.breakdown->t);
    b.add("breakdown_x", r.breakdown->x);
    b.add("breakdown_value", r.breakdown->value);
  }
  if (!r.error.empty()) b.add("error", r.error);
  for (std::size_t i = 0; i < r.warnings.size(); ++i) b.add("warning" + std::to_string(i), r.warnings[i]);
  return b;
}

inline std::string snapshot_name(std::size_t k) {
  std::ostringstream os;
  os << "snapshot_" << std::setw(5) << std::setfill('0') << k << ".csv";
  return os.str();
}

/// Writes series.csv, snapshots/, thresholds.txt, riccati.csv, run.txt and
/// summary.csv.
inline void write_bundle(const std::filesystem::path& out, const SimulationConfig& sim, const RunBundle& b) {
  namespace fs = std::filesystem;
  fs::create_directories(out / "snapshots");
  const RunResult& r = b.result;
  write_file(out / "series.csv", [&](std::ostream& os) { write_series_csv(os, r.series); });
  {
    std::ofstream idx(out / "snapshots" / "index.csv");
    idx << "k,t\n";
    for (std::size_t k = 0; k < r.snapshots.size(); ++k) {
      idx << k << ',' << fmt(r.snapshots[k].t) << '\n';
      write_file(out / "snapshots" / snapshot_name(k),
                 [&](std::ostream& os) { write_snapshot_csv(os, r.snapshots[k].field, sim.grid); });
    }
  }
  write_file(out / "thresholds.txt", [&](std::ostream& os) { os << threshold_block(b.thresholds, r.budget); });
  if (b.riccati) {
    write_file(out / "riccati.csv",
               [&](std::ostream& os) { write_riccati_csv(os, r.series, b.thresholds.data, *b.riccati); });
  }
  write_file(out / "run.txt", [&](std::ostream& os) { os << run_block(r); });
  write_file(out / "summary.csv", [&](std::ostream& os) {
    os << kSummaryHeader << '\n';
    write_summary_row(os, b.summary);
  });
}

// ---------------------------------------------------------------------------
// Commands

inline int cmd_simulate(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  const RunBundle b = run_bundle(cfg.sim, cfg.mode);
  write_bundle(out, cfg.sim, b);
  log << run_block(b.result);
  return exit_code_for(b.result.status);
}

/// Every combination of the sweep axes, in lexicographic axis order
/// (L, gamma, tau2, M, N). Missing axes keep the template value.
inline std::vector<SimulationConfig> sweep_points(const RunConfig& cfg) {
  const SimulationConfig& base = cfg.sim;
  auto or_base = [](const std::vector<double>& v, double b) { return v.empty() ? std::vector<double>{b} : v; };
  const auto Ls = or_base(cfg.sweep.L, base.init.u.amplitude);
  const auto gammas = or_base(cfg.sweep.gamma, base.gas.gamma());
  const auto taus = or_base(cfg.sweep.tau2, base.gas.tau2);
  const auto Ms = or_base(cfg.sweep.M, base.init.u.halfwidth);
  const auto Ns = cfg.sweep.N.empty() ? std::vector<int>{base.grid.N} : cfg.sweep.N;
  std::vector<SimulationConfig> pts;
  for (double L : Ls)
    for (double gm : gammas)
      for (double tau : taus)
        for (double M : Ms)
          for (int N : Ns) {
            SimulationConfig c = base;
            c.init.u.amplitude = L;
            if (!cfg.sweep.gamma.empty()) c.gas.R = (gm - 1.0) * c.gas.Cv;
            c.gas.tau2 = tau;
            c.init.u.halfwidth = M;
            c.grid.N = N;
            pts.push_back(c);
          }
  return pts;
}

/// One row per point, computed by up to `workers` threads and written in
/// point order. Points that fail validation or throw are marked error.
inline std::vector<SummaryRow> run_sweep(const RunConfig& cfg, int workers) {
  const auto pts = sweep_points(cfg);
  std::vector<SummaryRow> rows(pts.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < pts.size(); i = next++) {
      try {
        rows[i] = run_bundle(pts[i], cfg.mode).summary;
      } catch (const std::exception& e) {
        rows[i] = summary_seed(pts[i]);
        rows[i].status = "error";
        rows[i].error = e.what();
      }
    }
  };
  const int n = std::clamp(workers, 1, static_cast<int>(std::max<std::size_t>(pts.size(), 1)));
  std::vector<std::thread> pool;
  for (int k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

inline int cmd_sweep(const RunConfig& cfg, const std::filesystem::path& out, int workers, std::ostream& log) {
  const auto rows = run_sweep(cfg, workers);
  write_file(out / "sweep.csv", [&](std::ostream& os) {
    os << kSummaryHeader << '\n';
    for (const auto& r : rows) write_summary_row(os, r);
  });
  std::size_t errors = 0;
  for (const auto& r : rows) errors += r.status == "error";
  log << "points = " << rows.size() << "\nerrors = " << errors << '\n';
  return exit_code::completed;
}

inline int cmd_thresholds(const RunConfig& cfg, const std::filesystem::path* out, std::ostream& log) {
  const SimulationConfig& sim = cfg.sim;
  const InitialField init = build_initial_field(sim.init, sim.grid, sim.gas);
  const InitialBudget budget = initial_budget(init.field, sim.grid, sim.gas);
  const ThresholdSummary s = threshold_summary(sim, init.report, budget, max_speed(init.field, sim.gas));
  const KeyValueBlock b = threshold_block(s, budget);
  log << b;
  if (out) write_file(*out / "thresholds.txt", [&](std::ostream& os) { os << b; });
  return exit_code::completed;
}

/// Characteristic speeds of every cell of the initial field, plus a
/// structure report and an independent check with a general eigensolver.
inline int cmd_hyperbolicity_check(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  const SimulationConfig& sim = cfg.sim;
  const InitialField init = build_initial_field(sim.init, sim.grid, sim.gas);
  bool a0 = true, sym = true, bnn = true, src = true;
  double max_imag = 0.0, max_dev = 0.0, max_abs = 0.0;
  write_file(out / "hyperbolicity.csv", [&](std::ostream& os) {
    os << "rho,u,theta,q,S,lambda1,lambda2,lambda3,lambda4,lambda5\n";
    for (const auto& s : init.field) {
      const auto rep = verify_structure(s, sim.gas);
      a0 = a0 && rep.A0_positive;
      sym = sym && rep.A1_symmetric;
      bnn = bnn && rep.B_nonnegative;
      src = src && rep.source_matches;
      const auto ev = char_speeds(s, sim.gas);
      const auto m = assemble(s, sim.gas);
      const Mat5 G = m.A0.cwiseInverse().asDiagonal() * m.A1;
      Eigen::EigenSolver<Mat5> es(G, false);
      std::vector<double> re;
      for (int k = 0; k < 5; ++k) {
        max_imag = std::max(max_imag, std::abs(es.eigenvalues()(k).imag()));
        re.push_back(es.eigenvalues()(k).real());
      }
      std::sort(re.begin(), re.end());
      for (int k = 0; k < 5; ++k) {
        max_dev = std::max(max_dev, std::abs(re[k] - ev[k]));
        max_abs = std::max(max_abs, std::abs(ev[k]));
      }
      detail::csv_row(os, s.rho, s.u, s.theta, s.q, s.S, ev[0], ev[1], ev[2], ev[3], ev[4]);
    }
  });
  KeyValueBlock b;
  b.add("states", static_cast<long>(init.field.size()));
  b.add("A0_positive", a0);
  b.add("A1_symmetric", sym);
  b.add("B_nonnegative", bnn);
  b.add("source_matches", src);
  b.add("max_imag_part", max_imag);
  b.add("max_speed_discrepancy", max_dev);
  b.add("max_abs_speed", max_abs);
  b.add("hyperbolic", a0 && sym && max_imag <= 1e-8 * std::max(1.0, max_abs));
  log << b;
  write_file(out / "hyperbolicity.txt", [&](std::ostream& os) { os << b; });
  return a0 && sym ? exit_code::completed : exit_code::runtime_error;
}

inline int cmd_limit_study(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  const LimitStudy st = relaxation_limit_study(cfg.sim, cfg.limit_taus);
  write_file(out / "limit.csv", [&](std::ostream& os) {
    os << "tau,gap,order,status\n";
    for (const auto& r : st.rows) os << fmt(r.tau) << ',' << fmt(r.gap) << ',' << fmt(r.order) << ',' << to_string(r.status) << '\n';
  });
  KeyValueBlock b;
  b.add("classical_status", to_string(st.classical_status));
  b.add("fitted_order", st.fitted_order);
  log << b;
  return exit_code::completed;
}

inline int cmd_init_preview(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  const SimulationConfig& sim = cfg.sim;
  const InitialField init = build_initial_field(sim.init, sim.grid, sim.gas);
  write_file(out / "initial.csv", [&](std::ostream& os) { write_snapshot_csv(os, init.field, sim.grid); });
  const KeyValueBlock b = admissibility_block(init.report);
  write_file(out / "admissibility.txt", [&](std::ostream& os) { os << b; });
  log << b;
  return exit_code::completed;
}

/// --workers, then RELAXNS_WORKERS, then run.workers.
inline int resolve_workers(std::optional<int> flag, const RunConfig& cfg) {
  if (flag) return std::max(1, *flag);
  if (const char* env = std::getenv("RELAXNS_WORKERS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      throw ConfigError(std::string("RELAXNS_WORKERS is not an integer: ") + env);
    }
  }
  return std::max(1, cfg.workers);
}

}  // namespace relaxns

#pragma once

// CSV and key=value text emission, plus a small CSV reader used to read
// back anything written here.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "relaxns/errors.hpp"
#include "relaxns/field.hpp"
#include "relaxns/functionals.hpp"
#include "relaxns/initdata.hpp"
#include "relaxns/riccati.hpp"

namespace relaxns {

inline constexpr const char* kSnapshotHeader = "x,rho,u,theta,q,S";
inline constexpr const char* kSeriesHeader =
    "t,F,G,kinetic,Fdot_rhs,entropy_total,dissipation_rate,dissipation_cum,support_radius,max_grad_u,min_theta,"
    "min_rho,dt";
inline constexpr const char* kRiccatiHeader = "t,F_measured,y_riccati,F_lowerbound_412";

inline std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

namespace detail {
template <class... Ts>
void csv_row(std::ostream& os, const Ts&... vs) {
  bool first = true;
  ((os << (first ? "" : ",") << fmt(vs), first = false), ...);
  os << '\n';
}
}  // namespace detail

inline void write_snapshot_csv(std::ostream& os, std::span<const PrimitiveState> f, const Grid& g) {
  os << kSnapshotHeader << '\n';
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto& s = f[i];
    detail::csv_row(os, g.x(static_cast<int>(i)), s.rho, s.u, s.theta, s.q, s.S);
  }
}

inline void write_series_csv(std::ostream& os, const FunctionalSeries& s) {
  os << kSeriesHeader << '\n';
  for (const auto& r : s) {
    detail::csv_row(os, r.t, r.F, r.G, r.kinetic, r.Fdot_rhs, r.entropy_total, r.dissipation_rate,
                    r.dissipation_cum, r.support_radius, r.max_grad_u, r.min_theta, r.min_rho, r.dt);
  }
}

/// One row per series sample: measured F, comparison ODE value and the
/// lower bound 4 c2 (1 + c2 t)^2 / c3.
inline void write_riccati_csv(std::ostream& os, const FunctionalSeries& s, const RiccatiData& d,
                              const RiccatiTrajectory& y) {
  os << kRiccatiHeader << '\n';
  for (const auto& r : s) detail::csv_row(os, r.t, r.F, y.at(r.t), d.F_lower_bound(r.t));
}

/// Ordered key=value block.
class KeyValueBlock {
 public:
  void add(const std::string& key, const std::string& value) { rows_.emplace_back(key, value); }
  void add(const std::string& key, double value) { add(key, fmt(value)); }
  void add(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }
  void add(const std::string& key, const char* value) { add(key, std::string(value)); }
  void add(const std::string& key, int value) { add(key, std::to_string(value)); }
  void add(const std::string& key, long value) { add(key, std::to_string(value)); }

  const std::vector<std::pair<std::string, std::string>>& rows() const { return rows_; }

  std::string find(const std::string& key) const {
    for (const auto& [k, v] : rows_) {
      if (k == key) return v;
    }
    return {};
  }

  friend std::ostream& operator<<(std::ostream& os, const KeyValueBlock& b) {
    for (const auto& [k, v] : b.rows_) os << k << " = " << v << '\n';
    return os;
  }

 private:
  std::vector<std::pair<std::string, std::string>> rows_;
};

inline KeyValueBlock admissibility_block(const AdmissibilityReport& r) {
  KeyValueBlock b;
  b.add("min_rho0", r.min_rho0);
  b.add("min_theta0", r.min_theta0);
  b.add("max_rho0", r.max_rho0);
  b.add("M", r.M);
  b.add("support_radius", r.support_radius);
  b.add("support_inside_domain", r.support_inside_domain);
  b.add("G0", r.G0);
  b.add("G0_positive", r.G0 > 0.0);
  b.add("H0", r.H0);
  b.add("I0", r.I0);
  b.add("F0", r.F0);
  b.add("u0_l2sq", r.u0_l2sq);
  b.add("c1_junctions_ok", r.c1_junctions_ok);
  return b;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw std::out_of_range("no column '" + name + "'");
  }

  const std::string& cell(std::size_t row, const std::string& name) const { return rows.at(row).at(column(name)); }

  /// Numeric value of a cell; throws on text that is not a complete number.
  double number(std::size_t row, const std::string& name) const { return parse_number(cell(row, name)); }

  std::vector<double> numbers(const std::string& name) const {
    std::vector<double> out;
    for (std::size_t r = 0; r < rows.size(); ++r) out.push_back(number(r, name));
    return out;
  }

  static double parse_number(const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (text.empty() || used != text.size()) throw std::runtime_error("bad number '" + text + "'");
    return v;
  }
};

/// Reads a CSV with a header line. Cells are kept as text and must not
/// contain commas; every row must have as many cells as the header.
inline CsvTable read_csv(std::istream& is) {
  auto split = [](const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
  };
  CsvTable t;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("empty CSV");
  t.header = split(line);
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto row = split(line);
    if (row.size() != t.header.size()) {
      throw std::runtime_error("line " + std::to_string(lineno) + ": expected " +
                               std::to_string(t.header.size()) + " cells, got " + std::to_string(row.size()));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline CsvTable read_csv_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  return read_csv(in);
}

inline std::string read_text_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw ConfigError("cannot open " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

template <class Writer>
void write_file(const std::filesystem::path& p, Writer&& w) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  w(out);
}

}  // namespace relaxns

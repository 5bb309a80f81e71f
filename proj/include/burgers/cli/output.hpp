#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "burgers/cli/config.hpp"
#include "burgers/engine.hpp"

namespace burgers::cli {

/// Shortest decimal that parses back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline json table_to_json(const SolutionTable& table) {
  json rows = json::array();
  for (std::size_t n = 0; n < table.grid.nt(); ++n)
    for (std::size_t i = 0; i < table.grid.nx(); ++i) {
      const double w = table.at(n, i);
      rows.push_back({{"x", table.grid.xs[i]},
                      {"t", table.grid.ts[n]},
                      {"w", std::isfinite(w) ? json(w) : json(nullptr)},
                      {"status", to_string(table.status_at(n, i))}});
    }
  json timings = json::object();
  for (const auto& [stage, secs] : table.meta.timings) timings[stage] = secs;
  return {{"rows", std::move(rows)},
          {"meta",
           {{"solver", table.meta.solver},
            {"config", table.meta.config},
            {"timings", std::move(timings)},
            {"warnings", table.meta.warnings}}}};
}

inline void write_csv(const SolutionTable& table, std::ostream& out) {
  out << "x,t,w,status\n";
  for (std::size_t n = 0; n < table.grid.nt(); ++n)
    for (std::size_t i = 0; i < table.grid.nx(); ++i)
      out << format_double(table.grid.xs[i]) << ',' << format_double(table.grid.ts[n]) << ','
          << format_double(table.at(n, i)) << ',' << to_string(table.status_at(n, i)) << '\n';
}

/// Writes `table` to `path`; `config_echo` is attached to JSON meta.
inline void emit_table(const SolutionTable& table, Format format, const std::filesystem::path& path,
                       const json& config_echo = json()) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  if (format == Format::csv) {
    write_csv(table, out);
  } else {
    json doc = table_to_json(table);
    if (!config_echo.is_null()) doc["meta"]["run_config"] = config_echo;
    out << doc.dump(2) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

namespace detail {

inline double parse_double(std::string_view s, const std::string& context) {
  double v = 0.0;
  if (s == "nan" || s == "-nan") return std::nan("");
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) throw std::runtime_error(context + ": bad number '" +
                                                                                     std::string(s) + "'");
  return v;
}

inline CellStatus parse_status(const std::string& s, const std::string& context) {
  if (s == "ok") return CellStatus::ok;
  if (s == "degraded") return CellStatus::degraded;
  if (s == "denominator-guard") return CellStatus::denominator_guard;
  throw std::runtime_error(context + ": unknown status '" + s + "'");
}

}  // namespace detail

/// Reads a table written by write_csv back into grid, values and status.
inline SolutionTable read_csv(std::istream& in, const std::string& name = "csv") {
  std::string line;
  if (!std::getline(in, line) || line != "x,t,w,status") throw std::runtime_error(name + ": bad header");
  struct Row {
    double x, t, w;
    CellStatus s;
  };
  std::vector<Row> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string ctx = name + ":" + std::to_string(lineno);
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 4) throw std::runtime_error(ctx + ": expected 4 columns");
    rows.push_back({detail::parse_double(f[0], ctx), detail::parse_double(f[1], ctx), detail::parse_double(f[2], ctx),
                    detail::parse_status(f[3], ctx)});
  }
  SpaceTimeGrid g;
  for (const Row& r : rows) {
    if (g.ts.empty() || r.t != g.ts.back()) g.ts.push_back(r.t);
    if (g.ts.size() == 1) g.xs.push_back(r.x);
  }
  if (rows.size() != g.nx() * g.nt()) throw std::runtime_error(name + ": rows do not form a t-major grid");
  SolutionTable table(g);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].x != g.xs[k % g.nx()]) throw std::runtime_error(name + ": rows do not form a t-major grid");
    table.w[k] = rows[k].w;
    table.status[k] = rows[k].s;
  }
  return table;
}

}  // namespace burgers::cli

#pragma once

// Run configuration read from JSON. Schema violations raise ConfigError
// carrying a JSON pointer to the offending value.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "burgers/engine.hpp"
#include "burgers/ilt.hpp"
#include "burgers/reference.hpp"

namespace burgers::cli {

using nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string pointer, const std::string& message)
      : std::runtime_error(pointer.empty() ? message : pointer + ": " + message), pointer_(std::move(pointer)) {}
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

enum class Preset { example1, example2, sampled };
enum class Solver { ilt, fd, exact1, cole };
enum class Format { csv, json };

inline const char* to_string(Solver s) {
  switch (s) {
    case Solver::ilt: return "ilt";
    case Solver::fd: return "fd";
    case Solver::exact1: return "exact1";
    case Solver::cole: return "cole";
  }
  return "?";
}

struct ProblemBlock {
  Preset preset = Preset::example1;
  double a_sq = 1.0;
  double sigma = 2.0;
  double T = 1.0;
  double u00 = 1.0;
  double l1 = 0.0;
  double l2 = 1.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  std::filesystem::path w0_file;
};

struct GridBlock {
  std::optional<double> dx, dt;
  std::vector<double> xs, ts;
};

struct OutputBlock {
  std::filesystem::path path = ".";
  Format format = Format::csv;
};

struct RunConfig {
  ProblemBlock problem;
  GridBlock grid;
  std::vector<Solver> solvers;
  ilt::IltConfig ilt;
  reference::FdScheme fd;
  int cole_terms = 20;
  OutputBlock output;
  /// The parsed document, echoed into every output.
  json echo;

  BurgersProblem burgers_problem() const;
  SpaceTimeGrid space_time_grid() const;
};

namespace detail {

inline void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items())
    if (!keys.count(key)) throw ConfigError(where + "/" + key, "unknown key");
}

inline const json& require_object(const json& parent, const std::string& key, const std::string& where) {
  if (!parent.contains(key)) throw ConfigError(where + "/" + key, "required");
  const json& v = parent.at(key);
  if (!v.is_object()) throw ConfigError(where + "/" + key, "must be an object");
  return v;
}

inline std::optional<double> number(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) return std::nullopt;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "/" + key, "must be a number");
  return v.get<double>();
}

inline double positive(const json& obj, const std::string& key, const std::string& where, double fallback) {
  const auto v = number(obj, key, where);
  if (!v) return fallback;
  if (!(*v > 0.0)) throw ConfigError(where + "/" + key, "must be > 0");
  return *v;
}

inline std::vector<double> number_list(const json& obj, const std::string& key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_array() || v.empty()) throw ConfigError(where + "/" + key, "must be a non-empty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ConfigError(where + "/" + key + "/" + std::to_string(i), "must be a number");
    out.push_back(v[i].get<double>());
    if (i > 0 && !(out[i] > out[i - 1]))
      throw ConfigError(where + "/" + key + "/" + std::to_string(i), "values must be strictly increasing");
  }
  return out;
}

inline std::string string(const json& obj, const std::string& key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(where + "/" + key, "must be a string");
  return v.get<std::string>();
}

}  // namespace detail

/// Two-column numeric table (x, w0); header and comment lines are skipped.
inline std::pair<std::vector<double>, std::vector<double>> read_profile_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open profile table " + path.string());
  std::vector<double> xs, ys;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    for (char& c : line)
      if (c == ',' || c == ';' || c == '\t') c = ' ';
    std::istringstream fields(line);
    std::string a, b;
    if (!(fields >> a)) continue;
    if (a[0] == '#') continue;
    double x = 0.0, y = 0.0;
    const auto rx = std::from_chars(a.data(), a.data() + a.size(), x);
    if (rx.ec != std::errc{}) {
      if (xs.empty()) continue;  // header
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": not a number");
    }
    if (!(fields >> b) || std::from_chars(b.data(), b.data() + b.size(), y).ec != std::errc{})
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected two numeric columns");
    xs.push_back(x);
    ys.push_back(y);
  }
  return {std::move(xs), std::move(ys)};
}

/// Validates and converts a parsed document. Relative file paths resolve
/// against `base_dir`.
inline RunConfig parse_config(const json& doc, const std::filesystem::path& base_dir = ".") {
  using namespace detail;
  if (!doc.is_object()) throw ConfigError("", "config must be a JSON object");
  reject_unknown(doc, "", {"problem", "grid", "solvers", "ilt", "fd", "cole", "output"});
  RunConfig cfg;
  cfg.echo = doc;

  const json& pj = require_object(doc, "problem", "");
  const std::string pw = "/problem";
  if (!pj.contains("preset")) throw ConfigError(pw + "/preset", "required");
  const std::string preset = string(pj, "preset", pw);
  auto& pb = cfg.problem;
  if (preset == "example1") {
    pb.preset = Preset::example1;
    reject_unknown(pj, pw, {"preset", "a_sq", "sigma", "T", "u00"});
    if (!pj.contains("sigma")) throw ConfigError(pw + "/sigma", "required for preset example1");
    pb.sigma = *number(pj, "sigma", pw);
    if (!(std::abs(pb.sigma) > 1.0)) throw ConfigError(pw + "/sigma", "|sigma| must exceed 1");
  } else if (preset == "example2") {
    pb.preset = Preset::example2;
    reject_unknown(pj, pw, {"preset", "a_sq", "T", "u00"});
  } else if (preset == "sampled") {
    pb.preset = Preset::sampled;
    reject_unknown(pj, pw, {"preset", "a_sq", "T", "u00", "l1", "l2", "alpha1", "alpha2", "w0_file"});
    if (!pj.contains("w0_file")) throw ConfigError(pw + "/w0_file", "required for preset sampled");
    pb.w0_file = string(pj, "w0_file", pw);
    if (pb.w0_file.is_relative()) pb.w0_file = base_dir / pb.w0_file;
    pb.l1 = number(pj, "l1", pw).value_or(0.0);
    pb.l2 = number(pj, "l2", pw).value_or(1.0);
    if (!(pb.l1 < pb.l2)) throw ConfigError(pw + "/l2", "must exceed l1");
    pb.alpha1 = number(pj, "alpha1", pw).value_or(0.0);
    pb.alpha2 = number(pj, "alpha2", pw).value_or(0.0);
  } else {
    throw ConfigError(pw + "/preset", "must be one of example1, example2, sampled");
  }
  pb.a_sq = positive(pj, "a_sq", pw, 1.0);
  pb.T = positive(pj, "T", pw, 1.0);
  pb.u00 = number(pj, "u00", pw).value_or(1.0);
  if (pb.u00 == 0.0) throw ConfigError(pw + "/u00", "must be non-zero");

  const json& gj = require_object(doc, "grid", "");
  const std::string gw = "/grid";
  reject_unknown(gj, gw, {"dx", "dt", "xs", "ts"});
  if (gj.contains("xs")) {
    if (gj.contains("dx")) throw ConfigError(gw + "/dx", "give either dx or xs, not both");
    cfg.grid.xs = number_list(gj, "xs", gw);
    if (cfg.grid.xs.front() < pb.l1 || cfg.grid.xs.back() > pb.l2)
      throw ConfigError(gw + "/xs", "values must lie in [l1, l2]");
  } else {
    if (!gj.contains("dx")) throw ConfigError(gw + "/dx", "required (or give xs)");
    cfg.grid.dx = positive(gj, "dx", gw, 0.0);
  }
  if (gj.contains("ts")) {
    if (gj.contains("dt")) throw ConfigError(gw + "/dt", "give either dt or ts, not both");
    cfg.grid.ts = number_list(gj, "ts", gw);
    if (cfg.grid.ts.front() < 0.0 || cfg.grid.ts.back() > pb.T)
      throw ConfigError(gw + "/ts", "values must lie in [0, T]");
  } else {
    if (!gj.contains("dt")) throw ConfigError(gw + "/dt", "required (or give ts)");
    cfg.grid.dt = positive(gj, "dt", gw, 0.0);
  }

  if (!doc.contains("solvers")) throw ConfigError("/solvers", "required");
  const json& sj = doc.at("solvers");
  if (!sj.is_array()) throw ConfigError("/solvers", "must be an array");
  if (sj.empty()) throw ConfigError("/solvers", "no solver selected");
  for (std::size_t i = 0; i < sj.size(); ++i) {
    const std::string where = "/solvers/" + std::to_string(i);
    if (!sj[i].is_string()) throw ConfigError(where, "must be a string");
    const std::string name = sj[i].get<std::string>();
    Solver s;
    if (name == "ilt") s = Solver::ilt;
    else if (name == "fd") s = Solver::fd;
    else if (name == "exact1") s = Solver::exact1;
    else if (name == "cole") s = Solver::cole;
    else throw ConfigError(where, "unknown solver '" + name + "' (expected ilt, fd, exact1, cole)");
    if (s == Solver::exact1 && pb.preset != Preset::example1)
      throw ConfigError(where, "exact1 requires preset example1");
    if (s == Solver::cole && pb.preset != Preset::example2) throw ConfigError(where, "cole requires preset example2");
    for (Solver seen : cfg.solvers)
      if (seen == s) throw ConfigError(where, "duplicate solver '" + name + "'");
    cfg.solvers.push_back(s);
  }

  if (doc.contains("ilt")) {
    const json& ij = require_object(doc, "ilt", "");
    reject_unknown(ij, "/ilt", {"tol", "M", "scale_factor", "gamma_shift"});
    cfg.ilt.tol = positive(ij, "tol", "/ilt", cfg.ilt.tol);
    if (ij.contains("M")) {
      if (!ij.at("M").is_number_integer() || ij.at("M").get<long long>() < 5)
        throw ConfigError("/ilt/M", "must be an integer >= 5");
      cfg.ilt.M = ij.at("M").get<int>();
    }
    cfg.ilt.scale_factor = number(ij, "scale_factor", "/ilt").value_or(cfg.ilt.scale_factor);
    if (!(cfg.ilt.scale_factor > 1.0)) throw ConfigError("/ilt/scale_factor", "must be > 1");
    cfg.ilt.gamma_shift = number(ij, "gamma_shift", "/ilt").value_or(0.0);
  }
  if (doc.contains("fd")) {
    const json& fj = require_object(doc, "fd", "");
    reject_unknown(fj, "/fd", {"dx", "dt"});
    cfg.fd.dx = positive(fj, "dx", "/fd", cfg.fd.dx);
    cfg.fd.dt = positive(fj, "dt", "/fd", cfg.fd.dt);
  }
  if (doc.contains("cole")) {
    const json& cj = require_object(doc, "cole", "");
    reject_unknown(cj, "/cole", {"n_terms"});
    if (cj.contains("n_terms")) {
      if (!cj.at("n_terms").is_number_integer() || cj.at("n_terms").get<long long>() < 1)
        throw ConfigError("/cole/n_terms", "must be an integer >= 1");
      cfg.cole_terms = cj.at("n_terms").get<int>();
    }
  }
  if (doc.contains("output")) {
    const json& oj = require_object(doc, "output", "");
    reject_unknown(oj, "/output", {"path", "format"});
    if (oj.contains("path")) cfg.output.path = string(oj, "path", "/output");
    if (oj.contains("format")) {
      const std::string f = string(oj, "format", "/output");
      if (f == "csv") cfg.output.format = Format::csv;
      else if (f == "json") cfg.output.format = Format::json;
      else throw ConfigError("/output/format", "must be csv or json");
    }
  }
  if (cfg.output.path.is_relative()) cfg.output.path = base_dir / cfg.output.path;

  // Solvers that sample in time need the grid to be representable.
  for (std::size_t i = 0; i < cfg.solvers.size(); ++i) {
    if (cfg.solvers[i] != Solver::fd) continue;
    const SpaceTimeGrid g = cfg.space_time_grid();
    for (double t : g.ts) {
      const double k = t / cfg.fd.dt;
      if (std::abs(k - std::round(k)) > 1e-6)
        throw ConfigError(gj.contains("ts") ? "/grid/ts" : "/grid/dt", "grid times must be multiples of fd.dt");
    }
  }
  return cfg;
}

inline RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON in ") + path.string() + ": " + e.what());
  }
  return parse_config(doc, path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

inline BurgersProblem RunConfig::burgers_problem() const {
  const auto& p = problem;
  switch (p.preset) {
    case Preset::example1: return reference::example1_problem({p.a_sq, p.sigma}, p.T);
    case Preset::example2: return reference::example2_problem(p.a_sq, p.T);
    case Preset::sampled: {
      auto [xs, ys] = read_profile_table(p.w0_file);
      BurgersProblem pb;
      pb.a_sq = p.a_sq;
      pb.l1 = p.l1;
      pb.l2 = p.l2;
      pb.alpha1 = p.alpha1;
      pb.alpha2 = p.alpha2;
      pb.T = p.T;
      pb.w0 = InitialProfile::sampled(std::move(xs), std::move(ys));
      return pb;
    }
  }
  throw std::logic_error("unknown preset");
}

inline SpaceTimeGrid RunConfig::space_time_grid() const {
  const auto& p = problem;
  SpaceTimeGrid g;
  if (grid.dx) g.xs = SpaceTimeGrid::uniform(p.l1, p.l2, *grid.dx, p.T, p.T).xs;
  else g.xs = grid.xs;
  if (grid.dt) g.ts = SpaceTimeGrid::uniform(p.l1, p.l2, p.l2 - p.l1, p.T, *grid.dt).ts;
  else g.ts = grid.ts;
  return g;
}

}  // namespace burgers::cli

#include "periwave/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace periwave {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

using Section = std::map<std::string, std::string>;
using Sections = std::map<std::string, Section>;

Sections read_sections(const std::string& text, const std::string& origin) {
  Sections out;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        throw ConfigError(origin + ":" + std::to_string(lineno) +
                          ": malformed section header");
      section = trim(s.substr(1, s.size() - 2));
      if (out.count(section))
        throw ConfigError(origin + ":" + std::to_string(lineno) +
                          ": duplicate section [" + section + "]");
      out[section];
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": expected 'key = value'");
    if (section.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": key outside of any section");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key or value");
    if (!out[section].emplace(key, value).second)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" +
                        key + "'");
  }
  return out;
}

double parse_number(const std::string& v, const std::string& where) {
  double out = 0.0;
  const char* b = v.data();
  const char* e = v.data() + v.size();
  auto res = std::from_chars(b, e, out);
  if (res.ec != std::errc{} || res.ptr != e)
    throw ConfigError(where + ": expected a number, got '" + v + "'");
  return out;
}

int parse_int(const std::string& v, const std::string& where) {
  int out = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
    throw ConfigError(where + ": expected an integer, got '" + v + "'");
  return out;
}

bool parse_bool(const std::string& v, const std::string& where) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError(where + ": expected true or false, got '" + v + "'");
}

std::string unquote(const std::string& v, const std::string& where) {
  if (v.size() < 2 || v.front() != '"' || v.back() != '"')
    throw ConfigError(where + ": expression values must be double-quoted");
  return v.substr(1, v.size() - 2);
}

expr::Expr parse_expr(const std::string& v, double T, const std::string& where) {
  try {
    return expr::Expr::parse(unquote(v, where), {{"T", T}});
  } catch (const expr::ParseError& err) {
    throw ConfigError(where + ": " + err.what());
  }
}

void check_known_keys(const Section& sec, const std::set<std::string>& known,
                      const std::string& name) {
  for (const auto& [key, _] : sec)
    if (!known.count(key))
      throw ConfigError("[" + name + "]: unknown key '" + key + "'");
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& origin) {
  const Sections sections = read_sections(text, origin);
  for (const auto& [name, _] : sections)
    if (name != "problem" && name != "grid" && name != "solve" &&
        name != "manufactured" && name != "sweep")
      throw ConfigError(origin + ": unknown section [" + name + "]");

  RunConfig cfg;
  auto it = sections.find("problem");
  if (it == sections.end()) throw ConfigError(origin + ": missing [problem] section");
  const Section& prob = it->second;
  check_known_keys(prob,
                   {"a", "a1", "a2", "a3", "f", "r0", "r1", "T", "k", "swap_endpoints"},
                   "problem");
  auto need = [&](const Section& sec, const char* key, const char* name) {
    auto kit = sec.find(key);
    if (kit == sec.end())
      throw ConfigError(std::string("[") + name + "]: missing required key '" + key +
                        "'");
    return kit->second;
  };
  const double T = parse_number(need(prob, "T", "problem"), "[problem] T");
  if (!(T > 0.0)) throw ConfigError("[problem] T: must be positive");
  cfg.problem.T = T;
  cfg.problem.a = parse_expr(need(prob, "a", "problem"), T, "[problem] a");
  cfg.problem.r0 = parse_expr(need(prob, "r0", "problem"), T, "[problem] r0");
  cfg.problem.r1 = parse_expr(need(prob, "r1", "problem"), T, "[problem] r1");
  auto opt_expr = [&](const char* key) {
    auto kit = prob.find(key);
    return kit == prob.end()
               ? expr::Expr::constant(0.0)
               : parse_expr(kit->second, T, std::string("[problem] ") + key);
  };
  cfg.problem.a1 = opt_expr("a1");
  cfg.problem.a2 = opt_expr("a2");
  cfg.problem.a3 = opt_expr("a3");
  cfg.problem.f = opt_expr("f");
  if (auto kit = prob.find("k"); kit != prob.end())
    cfg.problem.k = parse_int(kit->second, "[problem] k");
  if (cfg.problem.k < 0) throw ConfigError("[problem] k: must be >= 0");

  it = sections.find("grid");
  if (it == sections.end()) throw ConfigError(origin + ": missing [grid] section");
  check_known_keys(it->second, {"nx", "nt"}, "grid");
  cfg.grid.nx = parse_int(need(it->second, "nx", "grid"), "[grid] nx");
  cfg.grid.nt = parse_int(need(it->second, "nt", "grid"), "[grid] nt");
  try {
    cfg.grid.validate();
  } catch (const std::invalid_argument& err) {
    throw ConfigError(std::string("[grid]: ") + err.what());
  }

  if (auto sit = sections.find("solve"); sit != sections.end()) {
    const Section& sol = sit->second;
    check_known_keys(
        sol, {"strategy", "tol_abs", "max_iter", "relaxation", "second_iterate"},
        "solve");
    if (auto kit = sol.find("strategy"); kit != sol.end()) {
      if (kit->second == "auto")
        cfg.solve.strategy = SolveOptions::Strategy::Auto;
      else if (kit->second == "picard")
        cfg.solve.strategy = SolveOptions::Strategy::Picard;
      else if (kit->second == "dense")
        cfg.solve.strategy = SolveOptions::Strategy::Dense;
      else
        throw ConfigError("[solve] strategy: expected auto|picard|dense");
    }
    if (auto kit = sol.find("tol_abs"); kit != sol.end())
      cfg.solve.tol_abs = parse_number(kit->second, "[solve] tol_abs");
    if (auto kit = sol.find("max_iter"); kit != sol.end())
      cfg.solve.max_iter = parse_int(kit->second, "[solve] max_iter");
    if (auto kit = sol.find("relaxation"); kit != sol.end())
      cfg.solve.relaxation = parse_number(kit->second, "[solve] relaxation");
    if (auto kit = sol.find("second_iterate"); kit != sol.end())
      cfg.solve.second_iterate = parse_bool(kit->second, "[solve] second_iterate");
    try {
      cfg.solve.validate();
    } catch (const std::invalid_argument& err) {
      throw ConfigError(std::string("[solve]: ") + err.what());
    }
  }

  if (auto mit = sections.find("manufactured"); mit != sections.end()) {
    check_known_keys(mit->second, {"w_star"}, "manufactured");
    cfg.w_star =
        parse_expr(need(mit->second, "w_star", "manufactured"), T, "[manufactured] w_star");
  }

  if (auto wit = sections.find("sweep"); wit != sections.end()) {
    check_known_keys(wit->second, {"eps"}, "sweep");
    std::istringstream list(need(wit->second, "eps", "sweep"));
    std::string item;
    while (std::getline(list, item, ','))
      cfg.sweep_eps.push_back(parse_number(trim(item), "[sweep] eps"));
    if (cfg.sweep_eps.empty()) throw ConfigError("[sweep] eps: empty list");
    const bool uses_eps =
        cfg.problem.a.references(expr::Var::Eps) ||
        cfg.problem.a1.references(expr::Var::Eps) ||
        cfg.problem.a2.references(expr::Var::Eps) ||
        cfg.problem.a3.references(expr::Var::Eps) ||
        cfg.problem.f.references(expr::Var::Eps) ||
        cfg.problem.r0.references(expr::Var::Eps) ||
        cfg.problem.r1.references(expr::Var::Eps) ||
        (cfg.w_star && cfg.w_star->references(expr::Var::Eps));
    if (!uses_eps)
      throw ConfigError("[sweep]: present but no expression references eps");
  }

  if (auto kit = prob.find("swap_endpoints"); kit != prob.end()) {
    if (parse_bool(kit->second, "[problem] swap_endpoints")) {
      if (cfg.w_star)
        throw ConfigError(
            "swap_endpoints cannot be combined with a [manufactured] section");
      cfg.problem = swap_endpoints(cfg.problem);
      cfg.swapped = true;
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace periwave

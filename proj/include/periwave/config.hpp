#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "periwave/expr.hpp"
#include "periwave/problem.hpp"
#include "periwave/solver.hpp"

namespace periwave {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A run configuration loaded from the flat INI-style file:
//
//   [problem]
//   a = "1"            # coefficient expressions, double-quoted
//   a1 = "-1"
//   r0 = "1"
//   r1 = "1"
//   T = 1.0            # the identifier T may be used inside expressions and
//   k = 1              # is substituted as a numeric literal at parse time
//   swap_endpoints = false
//   [grid]
//   nx = 65
//   nt = 64
//   [solve]
//   strategy = auto    # auto | picard | dense
//   tol_abs = 1e-10
//   max_iter = 10000
//   relaxation = 1.0
//   [manufactured]
//   w_star = "exp(x)*(2+sin(2*pi*t))"
//   [sweep]
//   eps = 0, 0.005, 0.01, 0.015, 0.02
struct RunConfig {
  ProblemSpec problem;
  GridSpec grid;
  SolveOptions solve;
  std::optional<expr::Expr> w_star;
  std::vector<double> sweep_eps;
  bool swapped = false;
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& origin = "config");

}  // namespace periwave

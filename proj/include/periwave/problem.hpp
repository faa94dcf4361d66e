#pragma once

#include <map>
#include <string>
#include <vector>

#include "periwave/expr.hpp"
#include "periwave/grid.hpp"

namespace periwave {

// A validated problem instance:
//
//   d_t^2 w - a^2 d_x^2 w + a1 d_t w + a2 d_x w + a3 w = f   on (0,1),
//   w(x, t+T) = w(x, t),
//   d_x w(0,t) = r0(t) w(0,t),   d_x w(1,t) = r1(t) w(1,t),
//
// with a > 0 and the nondegeneracy constant C = int_0^T a(0,t) r0(t) dt != 0.
struct ProblemSpec {
  expr::Expr a = expr::Expr::constant(1.0);
  expr::Expr a1, a2, a3, f, r0, r1;  // default to the constant 0
  double T = 1.0;
  int k = 1;  // requested regularity order for the level-l diagnostics
};

// Relabels x -> 1-x, swapping the roles of the two endpoints. Used when the
// nondegeneracy integral holds at x = 1 instead of x = 0.
ProblemSpec swap_endpoints(const ProblemSpec& spec);

struct ValidationReport {
  bool pass = false;
  double min_a = 0.0;
  double C = 0.0;
  double C_tolerance = 0.0;
  int k = 1;
  std::map<std::string, double> periodicity_defect;
  std::vector<std::string> violations;
  std::string sampling_caveat;
};

ValidationReport validate(const ProblemSpec& spec, const GridSpec& grid);

// Periodic trapezoid approximation of C = int_0^T a(0,t) r0(t) dt.
double compute_C(const ProblemSpec& spec, const GridSpec& grid);

// Samples an expression on the tensor grid (eps fixed).
GridFunction sample(const expr::Expr& e, const GridSpec& grid, double T,
                    double eps = 0.0);

}  // namespace periwave

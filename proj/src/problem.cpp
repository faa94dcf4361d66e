#include "periwave/problem.hpp"

#include <algorithm>
#include <cmath>

#include "periwave/quadrature.hpp"

namespace periwave {

namespace {

struct NamedExpr {
  const char* name;
  const expr::Expr* e;
  bool boundary_only;  // r0, r1 depend on t only
};

std::vector<NamedExpr> coefficients(const ProblemSpec& s) {
  return {{"a", &s.a, false},   {"a1", &s.a1, false}, {"a2", &s.a2, false},
          {"a3", &s.a3, false}, {"f", &s.f, false},   {"r0", &s.r0, true},
          {"r1", &s.r1, true}};
}

}  // namespace

ProblemSpec swap_endpoints(const ProblemSpec& spec) {
  using expr::Expr;
  using expr::Var;
  const Expr mirrored = Expr::constant(1.0) - Expr::variable(Var::X);
  ProblemSpec out = spec;
  out.a = spec.a.substitute(Var::X, mirrored);
  out.a1 = spec.a1.substitute(Var::X, mirrored);
  out.a2 = -spec.a2.substitute(Var::X, mirrored);
  out.a3 = spec.a3.substitute(Var::X, mirrored);
  out.f = spec.f.substitute(Var::X, mirrored);
  // d_x w~(0) = -d_x w(1) = -r1 w(1), so the mirrored Robin data flip sign.
  out.r0 = -spec.r1;
  out.r1 = -spec.r0;
  return out;
}

GridFunction sample(const expr::Expr& e, const GridSpec& grid, double T, double eps) {
  GridFunction g(grid, T);
  for (int i = 0; i < grid.nx; ++i)
    for (int n = 0; n < grid.nt; ++n)
      g(i, n) = e(g.x(i), g.t(n), eps);
  return g;
}

double compute_C(const ProblemSpec& spec, const GridSpec& grid) {
  return quadrature::periodic_trapezoid(
      [&](double t) { return spec.a(0.0, t) * spec.r0(0.0, t); }, spec.T, grid.nt);
}

ValidationReport validate(const ProblemSpec& spec, const GridSpec& grid) {
  grid.validate();
  ValidationReport rep;
  rep.k = spec.k;
  rep.sampling_caveat =
      "pointwise conditions are tested on the validation grid only; behaviour "
      "between grid nodes is not certified";

  if (!(spec.T > 0.0)) {
    rep.violations.push_back("period: T must be positive");
    return rep;
  }
  if (spec.k < 0) rep.violations.push_back("regularity order: k must be >= 0");

  const double hx = 1.0 / (grid.nx - 1);
  const double ht = spec.T / grid.nt;

  try {
    // Positivity of a on the grid.
    rep.min_a = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid.nx; ++i)
      for (int n = 0; n < grid.nt; ++n)
        rep.min_a = std::min(rep.min_a, spec.a(i * hx, n * ht));
    if (!(rep.min_a > 0.0))
      rep.violations.push_back("positivity: a(x,t) > 0 fails on the grid (min " +
                               std::to_string(rep.min_a) + ")");

    // Nondegeneracy of C = int_0^T a(0,t) r0(t) dt, scale-invariant tolerance.
    rep.C = compute_C(spec, grid);
    double max_ar = 0.0;
    for (int n = 0; n < grid.nt; ++n)
      max_ar = std::max(max_ar, std::abs(spec.a(0.0, n * ht) * spec.r0(0.0, n * ht)));
    rep.C_tolerance = 1e-8 * spec.T * max_ar;
    if (!(std::abs(rep.C) > rep.C_tolerance))
      rep.violations.push_back(
          "nondegeneracy: |C| = |int a(0,t) r0(t) dt| is below tolerance");

    // T-periodicity of every coefficient, relative to its magnitude.
    for (const auto& ne : coefficients(spec)) {
      double defect = 0.0, mag = 0.0;
      const int ni = ne.boundary_only ? 1 : grid.nx;
      for (int i = 0; i < ni; ++i) {
        for (int n = 0; n < grid.nt; ++n) {
          const double x = i * hx, t = n * ht;
          const double g0 = (*ne.e)(x, t);
          const double g1 = (*ne.e)(x, t + spec.T);
          defect = std::max(defect, std::abs(g0 - g1));
          mag = std::max(mag, std::abs(g0));
        }
      }
      rep.periodicity_defect[ne.name] = defect;
      if (defect > 1e-10 * (1.0 + mag))
        rep.violations.push_back(std::string("periodicity: ") + ne.name +
                                 " is not T-periodic (defect " +
                                 std::to_string(defect) + ")");
    }
  } catch (const expr::EvalError& err) {
    rep.violations.push_back(std::string("evaluation: ") + err.what());
  }

  rep.pass = rep.violations.empty();
  return rep;
}

}  // namespace periwave

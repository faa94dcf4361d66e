#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "periwave/problem.hpp"
#include "periwave/solver.hpp"

namespace periwave {

// A problem built backwards from a chosen exact solution w*: f and the Robin
// data are derived symbolically, so the solver output can be compared with a
// known answer.
struct ManufacturedProblem {
  expr::Expr w_star;
  ProblemSpec spec;
  ValidationReport validation;
};

// f = d_t^2 w* - a^2 d_x^2 w* + a1 d_t w* + a2 d_x w* + a3 w*,
// r_i = d_x w*(i,.) / w*(i,.). Throws std::domain_error when w* vanishes at a
// boundary grid time.
ManufacturedProblem manufacture(const expr::Expr& w_star, const expr::Expr& a,
                                const expr::Expr& a1, const expr::Expr& a2,
                                const expr::Expr& a3, double T, const GridSpec& grid,
                                int k = 1);

// Sup-norm of the second-order equation's defect. The grid overload uses
// 4th-order finite differences (periodic in t, one-sided at the x ends) and
// sups over interior x columns; the symbolic overload differentiates exactly.
double residual_pde(const GridFunction& w, const ProblemSpec& spec,
                    const GridSpec& grid, double eps = 0.0);
double residual_pde(const expr::Expr& w, const ProblemSpec& spec, const GridSpec& grid,
                    double eps = 0.0);

// Sup over t of |d_x w(i,t) - r_i(t) w(i,t)| at the two endpoints.
std::pair<double, double> residual_boundary(const GridFunction& w,
                                            const ProblemSpec& spec, double eps = 0.0);

struct KernelDimension {
  int dimension = 0;
  double sigma_max = 0.0;
  std::vector<double> tail;  // up to 10 smallest singular values, ascending
};

// SVD-based null-space dimension of the dense collocation operator: counts
// singular values below rel_threshold * sigma_max.
KernelDimension kernel_dimension(const Eigen::MatrixXd& M, double rel_threshold = 1e-8);

struct ConvergenceStudy {
  std::vector<GridSpec> grids;
  std::vector<double> errors;  // sup error vs w* per grid
  std::vector<double> orders;  // fitted order between consecutive grids
  bool convergent = false;
};

ConvergenceStudy convergence_study(const ManufacturedProblem& mp,
                                   const std::vector<GridSpec>& grids,
                                   const SolveOptions& opts = {});

struct SmoothnessRow {
  double x = 0.0;
  bool band_limited = false;  // too few resolved modes for a decay fit
  double slope = 0.0;         // least-squares slope of log|c_k| vs log k
  int modes_used = 0;
};

// Discrete Fourier decay per x-row; nt must be a power of two.
std::vector<SmoothnessRow> smoothness_indicator(const GridFunction& w);

struct EpsFamily {
  ProblemSpec base;                // expressions may reference eps
  std::vector<double> eps_values;  // sorted, in [0,1)
};

struct SweepRow {
  double eps = 0.0;
  double sup_err = 0.0;       // sup |w_eps - w_eps0|
  double deriv_est = 0.0;     // sup-norm finite-difference estimate of d_eps w
  double deriv_est_dt = 0.0;  // same for d_t w
};

struct RichardsonRow {
  double eps_center = 0.0;
  double est_coarse = 0.0;  // |d_eps w| estimate with the doubled step
  double est_fine = 0.0;
  double agreement = 0.0;  // |coarse - fine| / max(|fine|, eps)
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<RichardsonRow> richardson;
  std::vector<GridFunction> solutions;
  double max_pairwise_diff = 0.0;
};

class SweepAbort : public std::runtime_error {
public:
  SweepAbort(const std::string& msg, double eps)
      : std::runtime_error(msg), eps_(eps) {}
  double eps() const { return eps_; }

private:
  double eps_;
};

// Solves the family instance per eps; aborts (SweepAbort) when an instance
// fails validation or no non-resonance condition holds.
SweepResult sweep_epsilon(const EpsFamily& family, const GridSpec& grid,
                          const SolveOptions& opts = {});

}  // namespace periwave

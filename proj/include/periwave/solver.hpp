#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "periwave/kernels.hpp"
#include "periwave/problem.hpp"
#include "periwave/resonance.hpp"
#include "periwave/riemann.hpp"

namespace periwave {

struct SolveOptions {
  enum class Strategy { Auto, Picard, Dense };
  Strategy strategy = Strategy::Auto;
  double tol_abs = 1e-10;  // sup-norm update tolerance
  int max_iter = 10000;
  double relaxation = 1.0;  // in (0,1]
  bool second_iterate = false;  // apply the Picard map twice per outer step

  void validate() const;
};

struct TraceIterationStats {
  int iterations = 0;
  std::vector<double> update_norms;
  std::string direction;  // e.g. "iso2-forward", "iso3-backward"
  double contraction_estimate = 0.0;
};

struct SolveResult {
  GridPair u;
  GridFunction w;
  int iterations = 0;  // outer Picard iterations (0 on the dense path)
  double final_update = 0.0;
  double rep_residual = 0.0;  // sup defect of the integral representation
  std::string strategy_used;
  double q0_used = 0.0;
  bool converged = false;
  std::vector<std::string> warnings;
  TraceIterationStats trace_stats;  // from the last invert_ImB call
};

// Raised by invert_ImB when no uniform contraction direction is available.
class NearResonanceError : public std::runtime_error {
public:
  explicit NearResonanceError(const std::string& what) : std::runtime_error(what) {}
};

class SizeGuardError : public std::runtime_error {
public:
  explicit SizeGuardError(const std::string& what) : std::runtime_error(what) {}
};

// Grid discretization of the operators of u = Bu + Au + Du + Rf: collocation
// on the tensor grid, quadrature along cached characteristics, periodic cubic
// interpolation of traces at off-grid times.
class DiscreteOperators {
public:
  DiscreteOperators(const ProblemSpec& spec, const GridSpec& grid, double eps = 0.0);

  const ProblemSpec& spec() const { return spec_; }
  const GridSpec& grid() const { return grid_; }
  const GridFunction& a_grid() const { return a_grid_; }
  const KernelField& kernels() const { return *kf_; }
  const CharField& characteristics() const { return *cf_; }
  const RiemannCoeffs& coeffs() const { return *rc_; }

  GridPair apply_B(const GridPair& u) const;
  GridPair apply_A(const GridPair& u) const;
  GridPair apply_D(const GridPair& u) const;
  GridPair apply_R(const GridFunction& f) const;

  // Boundary-to-boundary multipliers of the two trace routes.
  double q_lambda_max() const { return lam_max_; }
  double q_lambda_min() const { return lam_min_; }
  double q_pi_max() const { return pi_max_; }
  double q_pi_min() const { return pi_min_; }

  // Solves (I - B)u = g through the contracting trace fixed point, then
  // refines until the algebraic residual of the discrete system is at
  // rounding level. Throws NearResonanceError when no direction contracts.
  GridPair invert_ImB(const GridPair& g, const SolveOptions& opts,
                      TraceIterationStats* stats = nullptr) const;

  // Dense collocation matrix of I - B - A - D acting on flattened pairs.
  // Refuses sizes with 2*nx*nt > 40000.
  Eigen::MatrixXd assemble_dense() const;

  Eigen::VectorXd flatten(const GridPair& u) const;
  GridPair unflatten(const Eigen::VectorXd& v) const;

private:
  struct RouteData {
    std::vector<double> mult;         // multiplier at grid times
    std::vector<double> comp;         // composed (unwrapped) argument time
    std::vector<double> sig;          // backward composed time
    std::vector<double> mult_at_sig;  // multiplier evaluated at sig
  };

  enum class Route { Iso2, Alt };

  GridPair trace_solve(const GridPair& g, Route route, bool forward,
                       TraceIterationStats* stats, double inner_tol,
                       int max_iter) const;

  // G and J of the current iterate (F = G + J).
  struct GF {
    TraceFunction G;
    GridFunction J;
    double f_at(int i, double tau) const { return G(tau) + J.interp_t(i, tau); }
  };
  GF compute_gf(const GridPair& u) const;

  ProblemSpec spec_;
  GridSpec grid_;
  double eps_ = 0.0;
  double C_ = 0.0;
  bool have_a3_ = false;

  std::unique_ptr<CharField> cf_;
  std::unique_ptr<RiemannCoeffs> rc_;
  std::unique_ptr<KernelField> kf_;

  GridFunction a_grid_;
  std::vector<double> ar0_row_;         // a(0,t_n) r0(t_n)
  ArrayRM afac1_, afac2_;               // boundary factors of A
  TriangleField w1_, w2_;               // d_j * b_(12|21) along characteristics
  TriangleField v1_, v2_;               // d_j * a3 along characteristics (if a3 != 0)

  RouteData iso2_, alt_;
  double lam_max_ = 0.0, lam_min_ = 0.0, pi_max_ = 0.0, pi_min_ = 0.0;
  std::vector<double> ct1_, tt1_per_;   // c_1(0,1,t_n), tau_1(0,1,t_n) - t_n
  std::vector<double> ct2_, tt2_per_;   // c_2(1,0,t_n), tau_2(1,0,t_n) - t_n
};

// Full pipeline: strategy selection, Picard outer iteration with the trace
// inversion, dense fallback, reconstruction of w and the residual check.
SolveResult solve(const ProblemSpec& spec, const GridSpec& grid,
                  const SolveOptions& opts = {}, double eps = 0.0);

Eigen::MatrixXd assemble_dense(const ProblemSpec& spec, const GridSpec& grid,
                               double eps = 0.0);

}  // namespace periwave

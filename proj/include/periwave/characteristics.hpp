#pragma once

#include <string>
#include <vector>

#include "periwave/expr.hpp"
#include "periwave/grid.hpp"
#include "periwave/problem.hpp"

namespace periwave {

// The coefficient a together with its compiled symbolic partial derivatives,
// evaluated at a fixed eps.
struct Speed {
  expr::Expr a, ax, at;
  double eps = 0.0;

  static Speed from(const ProblemSpec& spec, double eps = 0.0) {
    return Speed{spec.a, spec.a.derivative(expr::Var::X),
                 spec.a.derivative(expr::Var::T), eps};
  }

  double v(double x, double t) const { return a(x, t, eps); }
  double vx(double x, double t) const { return ax(x, t, eps); }
  double vt(double x, double t) const { return at(x, t, eps); }
};

// One characteristic curve xi -> tau_j(xi, x0, t0), the solution of
//   d tau/d xi = (-1)^j / a(xi, tau),  tau(x0) = t0,
// sampled at all xi-grid nodes by classical RK4 with step hx. Times are kept
// unwrapped (not reduced modulo T).
struct TracedCurve {
  int j = 1;
  double x0 = 0.0;
  double t0 = 0.0;
  double hx = 0.0;
  std::vector<double> tau;  // tau[m] at xi_m = m*hx, m = 0 .. nx-1

  int nx() const { return static_cast<int>(tau.size()); }
};

TracedCurve trace(int j, double x, double t, const Speed& speed, int nx);

// Monotone cubic Hermite interpolation of the traced time at arbitrary xi,
// using the exact node slopes (-1)^j / a.
double curve_time(const TracedCurve& curve, const Speed& speed, double xi);

// Signed integral int_{from}^{to} g(eta, tau(eta)) deta along the curve by
// composite trapezoid on the RK4 nodes (partial end segments included).
double integrate_along(const TracedCurve& curve, const Speed& speed,
                       const std::function<double(double, double)>& g, double from,
                       double to);

struct TauPartials {
  double dtau_dx = 0.0;
  double dtau_dt = 0.0;
};

// Closed-form partial derivatives of tau_j(xi, x, t) with respect to the base
// point, evaluated by quadrature along the traced curve.
TauPartials tau_partials(int j, double xi, double x, double t, const Speed& speed,
                         int nx);

// Inverse trace: the xi where the j-curve through (x,t) passes time tau.
// Throws std::domain_error when tau is outside the time range swept by the
// curve over xi in [0,1].
double inverse_trace(int j, double tau, double x, double t, const Speed& speed, int nx);

struct TildePartials {
  double dxi_dx = 0.0;
  double dxi_dt = 0.0;
};

// Closed-form partials of the inverse trace, for validation against finite
// differences of inverse_trace.
TildePartials tilde_partials(int j, double tau, double x, double t, const Speed& speed,
                             int nx);

// Storage for per-curve values over (xi_m, x_i, t_n) where xi_m runs over the
// j-side of x_i only (m <= i for j=1, m >= i for j=2); the m-range for fixed
// (i,n) is contiguous.
class TriangleField {
public:
  TriangleField() = default;
  TriangleField(int j, int nx, int nt);

  int m_begin(int i) const { return j_ == 1 ? 0 : i; }
  int m_end(int i) const { return j_ == 1 ? i + 1 : nx_; }
  int width(int i) const { return m_end(i) - m_begin(i); }

  double* row(int i, int n) {
    return data_.data() + offset_[i] + static_cast<std::size_t>(n) * width(i);
  }
  const double* row(int i, int n) const {
    return data_.data() + offset_[i] + static_cast<std::size_t>(n) * width(i);
  }
  double at(int m, int i, int n) const { return row(i, n)[m - m_begin(i)]; }
  double& at(int m, int i, int n) { return row(i, n)[m - m_begin(i)]; }

private:
  int j_ = 1;
  int nx_ = 0;
  int nt_ = 0;
  std::vector<std::size_t> offset_;
  std::vector<double> data_;
};

// Cached characteristic times tau_j(xi_m, x_i, t_n) for all grid base points,
// marched on the side of x_i that the integral representation uses.
class CharField {
public:
  CharField(const ProblemSpec& spec, const GridSpec& grid, double eps = 0.0);

  const GridSpec& grid() const { return grid_; }
  double period() const { return T_; }
  const Speed& speed() const { return speed_; }

  const TriangleField& tau(int j) const { return j == 1 ? tau1_ : tau2_; }
  // Far-end times: tau_1(0, x_i, t_n) for j=1, tau_2(1, x_i, t_n) for j=2.
  double tau_far(int j, int i, int n) const {
    return j == 1 ? tau1_.at(0, i, n) : tau2_.at(grid_.nx - 1, i, n);
  }

private:
  GridSpec grid_;
  double T_ = 1.0;
  Speed speed_;
  TriangleField tau1_, tau2_;
};

// Debug dump with header "j,x,t,xi,tau".
void write_trace_csv(const std::string& path, const std::vector<TracedCurve>& curves);

}  // namespace periwave

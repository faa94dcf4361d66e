#pragma once

#include <vector>

#include "periwave/expr.hpp"
#include "periwave/grid.hpp"
#include "periwave/problem.hpp"

namespace periwave {

// Coefficients of the first-order Riemann system,
//
//   b11 = a1/2 + a2/(2a) + (a d_x a - d_t a)/(2a),
//   b12 = a1/2 - a2/(2a) + (a d_x a - d_t a)/(2a),
//   b21 = a1/2 + a2/(2a) + (a d_x a + d_t a)/(2a),
//   b22 = a1/2 - a2/(2a) - (a d_x a + d_t a)/(2a),
//
// with the derivatives of a taken symbolically.
class RiemannCoeffs {
public:
  RiemannCoeffs(const ProblemSpec& spec, const GridSpec& grid, double eps = 0.0);

  const GridFunction& b11() const { return b11_; }
  const GridFunction& b12() const { return b12_; }
  const GridFunction& b21() const { return b21_; }
  const GridFunction& b22() const { return b22_; }
  const GridFunction& dxa_grid() const { return dxa_; }
  const GridFunction& dta_grid() const { return dta_; }

  // Exact point evaluation through the compiled expressions.
  double b(int row, int col, double x, double t) const;
  double bjj_over_a(int j, double x, double t) const {
    return b(j, j, x, t) / a(x, t);
  }
  double dta_over_a2(double x, double t) const {
    const double av = a(x, t);
    return at_(x, t, eps_) / (av * av);
  }
  double a(double x, double t) const { return a_(x, t, eps_); }
  double a1(double x, double t) const { return a1_(x, t, eps_); }
  double a2(double x, double t) const { return a2_(x, t, eps_); }
  double a3(double x, double t) const { return a3_(x, t, eps_); }
  double eps() const { return eps_; }

private:
  expr::Expr a_, a1_, a2_, a3_, ax_, at_;
  double eps_ = 0.0;
  GridFunction b11_, b12_, b21_, b22_, dxa_, dta_;
};

inline RiemannCoeffs compute_bij(const ProblemSpec& spec, const GridSpec& grid,
                                 double eps = 0.0) {
  return RiemannCoeffs(spec, grid, eps);
}

// A trace function of time of the form value(tau) = P(tau mod T) + rate*tau
// with P continuous and T-periodic. Iu is of this form: its periodic part is
// interpolated with the periodic cubic, the drift accounts for a nonzero mean
// of the integrand, so evaluation at unwrapped times is exact.
class TraceFunction {
public:
  TraceFunction() = default;
  TraceFunction(std::vector<double> periodic_samples, double rate, double T)
      : p_(std::move(periodic_samples)), rate_(rate), T_(T) {}

  double operator()(double tau) const {
    return periodic_cubic_interp(p_.data(), static_cast<int>(p_.size()), T_, tau) +
           rate_ * tau;
  }
  double at_grid(int n) const {
    const double t = T_ * n / static_cast<double>(p_.size());
    return p_[n] + rate_ * t;
  }
  double rate() const { return rate_; }
  int nt() const { return static_cast<int>(p_.size()); }
  double period() const { return T_; }

  TraceFunction& operator+=(double c) {
    for (double& v : p_) v += c;
    return *this;
  }

private:
  std::vector<double> p_;
  double rate_ = 0.0;
  double T_ = 1.0;
};

// [Iu](t) = int_0^t (u1(0,s) + u2(0,s))/2 ds by cumulative trapezoid.
TraceFunction apply_I(const GridPair& u);

// [Ju](x,t) = int_0^x (u1 - u2)/(2a) dxi by cumulative trapezoid in x.
GridFunction apply_J(const GridPair& u, const GridFunction& a_grid);

// Nu = (1/C) int_0^T [ (u1(0,t) - u2(0,t))/2 - a(0,t) r0(t) [Iu](t) ] dt.
double compute_N(const GridPair& u, const ProblemSpec& spec, const GridSpec& grid);

TraceFunction apply_G(const GridPair& u, const ProblemSpec& spec, const GridSpec& grid);

// [Fu](x,t) = [Gu](t) + [Ju](x,t), evaluable off-grid in t per x-row.
struct FTrace {
  TraceFunction G;
  GridFunction J;

  double at_grid(int i, int n) const { return G.at_grid(n) + J(i, n); }
  double at(int i, double tau) const { return G(tau) + J.interp_t(i, tau); }
};

FTrace apply_F(const GridPair& u, const ProblemSpec& spec, const GridSpec& grid);

// w = Iu + Ju + Nu (equivalently Fu) on the grid.
GridFunction riemann_to_w(const GridPair& u, const ProblemSpec& spec,
                          const GridSpec& grid);

// u1 = d_t w + a d_x w, u2 = d_t w - a d_x w from supplied derivative grids.
GridPair w_to_riemann(const GridFunction& w, const GridFunction& wt,
                      const GridFunction& wx, const GridFunction& a_grid);

// Overload computing the derivative grids by 4th-order finite differences.
GridPair w_to_riemann(const GridFunction& w, const GridFunction& a_grid);

}  // namespace periwave

#include "periwave/riemann.hpp"

#include <cmath>
#include <stdexcept>

#include "periwave/quadrature.hpp"

namespace periwave {

RiemannCoeffs::RiemannCoeffs(const ProblemSpec& spec, const GridSpec& grid, double eps)
    : a_(spec.a),
      a1_(spec.a1),
      a2_(spec.a2),
      a3_(spec.a3),
      ax_(spec.a.derivative(expr::Var::X)),
      at_(spec.a.derivative(expr::Var::T)),
      eps_(eps),
      b11_(grid, spec.T),
      b12_(grid, spec.T),
      b21_(grid, spec.T),
      b22_(grid, spec.T),
      dxa_(grid, spec.T),
      dta_(grid, spec.T) {
  for (int i = 0; i < grid.nx; ++i) {
    for (int n = 0; n < grid.nt; ++n) {
      const double x = b11_.x(i), t = b11_.t(n);
      dxa_(i, n) = ax_(x, t, eps_);
      dta_(i, n) = at_(x, t, eps_);
      b11_(i, n) = b(1, 1, x, t);
      b12_(i, n) = b(1, 2, x, t);
      b21_(i, n) = b(2, 1, x, t);
      b22_(i, n) = b(2, 2, x, t);
    }
  }
}

double RiemannCoeffs::b(int row, int col, double x, double t) const {
  const double a = a_(x, t, eps_);
  const double half_a1 = 0.5 * a1_(x, t, eps_);
  const double a2_term = 0.5 * a2_(x, t, eps_) / a;
  const double ax = ax_(x, t, eps_);
  const double at = at_(x, t, eps_);
  const double minus = 0.5 * (a * ax - at) / a;
  const double plus = 0.5 * (a * ax + at) / a;
  if (row == 1 && col == 1) return half_a1 + a2_term + minus;
  if (row == 1 && col == 2) return half_a1 - a2_term + minus;
  if (row == 2 && col == 1) return half_a1 + a2_term + plus;
  return half_a1 - a2_term - plus;
}

TraceFunction apply_I(const GridPair& u) {
  const int nt = u.u1.nt();
  const double T = u.u1.period();
  const double ht = T / nt;
  std::vector<double> g(nt);
  for (int n = 0; n < nt; ++n) g[n] = 0.5 * (u.u1(0, n) + u.u2(0, n));
  std::vector<double> I = quadrature::cumulative_trapezoid(g, ht);
  const double mean_increment = I[nt - 1] + 0.5 * ht * (g[nt - 1] + g[0]);
  const double rate = mean_increment / T;
  std::vector<double> p(nt);
  for (int n = 0; n < nt; ++n) p[n] = I[n] - rate * (n * ht);
  return TraceFunction(std::move(p), rate, T);
}

GridFunction apply_J(const GridPair& u, const GridFunction& a_grid) {
  GridFunction J(u.u1.spec(), u.u1.period());
  const int nx = J.nx(), nt = J.nt();
  const double hx = J.hx();
  for (int n = 0; n < nt; ++n) {
    double acc = 0.0;
    double prev = (u.u1(0, n) - u.u2(0, n)) / (2.0 * a_grid(0, n));
    J(0, n) = 0.0;
    for (int i = 1; i < nx; ++i) {
      const double cur = (u.u1(i, n) - u.u2(i, n)) / (2.0 * a_grid(i, n));
      acc += 0.5 * hx * (prev + cur);
      J(i, n) = acc;
      prev = cur;
    }
  }
  return J;
}

double compute_N(const GridPair& u, const ProblemSpec& spec, const GridSpec& grid) {
  const double C = compute_C(spec, grid);
  if (C == 0.0) throw std::domain_error("compute_N: C is zero");
  const TraceFunction I = apply_I(u);
  const double ht = spec.T / grid.nt;
  double s = 0.0;
  for (int n = 0; n < grid.nt; ++n) {
    const double t = n * ht;
    s += 0.5 * (u.u1(0, n) - u.u2(0, n)) -
         spec.a(0.0, t) * spec.r0(0.0, t) * I.at_grid(n);
  }
  return s * ht / C;
}

TraceFunction apply_G(const GridPair& u, const ProblemSpec& spec,
                      const GridSpec& grid) {
  TraceFunction G = apply_I(u);
  G += compute_N(u, spec, grid);
  return G;
}

FTrace apply_F(const GridPair& u, const ProblemSpec& spec, const GridSpec& grid) {
  return FTrace{apply_G(u, spec, grid), apply_J(u, sample(spec.a, grid, spec.T))};
}

GridFunction riemann_to_w(const GridPair& u, const ProblemSpec& spec,
                          const GridSpec& grid) {
  const FTrace F = apply_F(u, spec, grid);
  GridFunction w(grid, spec.T);
  for (int i = 0; i < grid.nx; ++i)
    for (int n = 0; n < grid.nt; ++n) w(i, n) = F.at_grid(i, n);
  return w;
}

GridPair w_to_riemann(const GridFunction& w, const GridFunction& wt,
                      const GridFunction& wx, const GridFunction& a_grid) {
  GridPair u(w.spec(), w.period());
  u.u1.values() = wt.values() + a_grid.values() * wx.values();
  u.u2.values() = wt.values() - a_grid.values() * wx.values();
  return u;
}

GridPair w_to_riemann(const GridFunction& w, const GridFunction& a_grid) {
  return w_to_riemann(w, d_dt(w), d_dx(w), a_grid);
}

}  // namespace periwave

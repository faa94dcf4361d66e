#pragma once

#include "periwave/characteristics.hpp"
#include "periwave/riemann.hpp"

namespace periwave {

// Exponential weight along the j-th characteristic through (x,t):
//
//   c_j^l(xi,x,t) = exp int_x^xi (-1)^j (b_jj/a - l d_t a/a^2)(eta, tau_j(eta)) deta,
//
// traced on demand; c_j = c_j^0.
double compute_c(int j, int l, double xi, double x, double t, const RiemannCoeffs& rc,
                 const Speed& speed, int nx);

// d_j(xi,x,t) = (-1)^j c_j(xi,x,t) / a(xi, tau_j(xi,x,t)).
double compute_d(int j, double xi, double x, double t, const RiemannCoeffs& rc,
                 const Speed& speed, int nx);

// Bulk kernels on the CharField nodes. Instead of holding (k+1) copies of
// c_j^l, the two cumulative integrals
//
//   Ib(m,i,n) = int_{x_i}^{xi_m} (b_jj/a)(eta, tau_j(eta, x_i, t_n)) deta
//   Ia(m,i,n) = int_{x_i}^{xi_m} (d_t a/a^2)(eta, tau_j(eta, x_i, t_n)) deta
//
// are stored; c_j^l = exp((-1)^j (Ib - l Ia)) for every l at once.
class KernelField {
public:
  KernelField(const CharField& cf, const RiemannCoeffs& rc, int k);

  int k() const { return k_; }

  double c(int j, int l, int m, int i, int n) const {
    const double e = ib(j).at(m, i, n) - l * ia(j).at(m, i, n);
    return std::exp(j == 1 ? -e : e);
  }
  double d(int j, int m, int i, int n) const { return d_field(j).at(m, i, n); }

  const TriangleField& d_field(int j) const { return j == 1 ? d1_ : d2_; }
  const TriangleField& ib(int j) const { return j == 1 ? ib1_ : ib2_; }
  const TriangleField& ia(int j) const { return j == 1 ? ia1_ : ia2_; }

  // Endpoint weights used by the boundary operators:
  // c_far(1)(i,n) = c_1(0, x_i, t_n), c_far(2)(i,n) = c_2(1, x_i, t_n).
  const ArrayRM& c_far(int j) const { return j == 1 ? c1_far_ : c2_far_; }

private:
  int k_ = 1;
  TriangleField ib1_, ib2_, ia1_, ia2_, d1_, d2_;
  ArrayRM c1_far_, c2_far_;
};

}  // namespace periwave

#include "periwave/kernels.hpp"

#include <cmath>
#include <exception>

namespace periwave {

double compute_c(int j, int l, double xi, double x, double t, const RiemannCoeffs& rc,
                 const Speed& speed, int nx) {
  const TracedCurve curve = trace(j, x, t, speed, nx);
  const double sgn = (j == 1) ? -1.0 : 1.0;
  const double integral = integrate_along(
      curve, speed,
      [&](double e, double tau) {
        return sgn * (rc.bjj_over_a(j, e, tau) - l * rc.dta_over_a2(e, tau));
      },
      x, xi);
  return std::exp(integral);
}

double compute_d(int j, double xi, double x, double t, const RiemannCoeffs& rc,
                 const Speed& speed, int nx) {
  const TracedCurve curve = trace(j, x, t, speed, nx);
  const double c = compute_c(j, 0, xi, x, t, rc, speed, nx);
  const double tau_xi = curve_time(curve, speed, xi);
  return (j == 1 ? -1.0 : 1.0) * c / speed.v(xi, tau_xi);
}

KernelField::KernelField(const CharField& cf, const RiemannCoeffs& rc, int k)
    : k_(k) {
  const GridSpec grid = cf.grid();
  const int nx = grid.nx, nt = grid.nt;
  const double hx = 1.0 / (nx - 1);
  ib1_ = TriangleField(1, nx, nt);
  ib2_ = TriangleField(2, nx, nt);
  ia1_ = TriangleField(1, nx, nt);
  ia2_ = TriangleField(2, nx, nt);
  d1_ = TriangleField(1, nx, nt);
  d2_ = TriangleField(2, nx, nt);
  c1_far_ = ArrayRM::Zero(nx, nt);
  c2_far_ = ArrayRM::Zero(nx, nt);

  // Cumulative trapezoid of the two integrands outward from the base x_i,
  // reusing the cached characteristic times.
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < nx; ++i) {
    try {
    for (int n = 0; n < nt; ++n) {
      {  // j = 1: integrate from x_i down to 0; signed integral int_{x_i}^{xi_m}
        const double* tau = cf.tau(1).row(i, n);
        double* ib = ib1_.row(i, n);
        double* ia = ia1_.row(i, n);
        double* d = d1_.row(i, n);
        double gb_prev = 0.0, ga_prev = 0.0;
        for (int m = i; m >= 0; --m) {
          const double e = m * hx;
          const double a = rc.a(e, tau[m]);
          const double gb = rc.b(1, 1, e, tau[m]) / a;
          const double ga = rc.dta_over_a2(e, tau[m]);
          if (m == i) {
            ib[m] = 0.0;
            ia[m] = 0.0;
          } else {
            ib[m] = ib[m + 1] - 0.5 * hx * (gb + gb_prev);
            ia[m] = ia[m + 1] - 0.5 * hx * (ga + ga_prev);
          }
          d[m] = -std::exp(-ib[m]) / a;  // (-1)^1 c_1 / a
          gb_prev = gb;
          ga_prev = ga;
        }
        c1_far_(i, n) = std::exp(-ib[0]);
      }
      {  // j = 2: integrate from x_i up to 1
        const double* tau = cf.tau(2).row(i, n);
        double* ib = ib2_.row(i, n);
        double* ia = ia2_.row(i, n);
        double* d = d2_.row(i, n);
        const int base = i;  // rows are indexed m - i
        double gb_prev = 0.0, ga_prev = 0.0;
        for (int m = i; m < nx; ++m) {
          const int idx = m - base;
          const double e = m * hx;
          const double a = rc.a(e, tau[idx]);
          const double gb = rc.b(2, 2, e, tau[idx]) / a;
          const double ga = rc.dta_over_a2(e, tau[idx]);
          if (m == i) {
            ib[idx] = 0.0;
            ia[idx] = 0.0;
          } else {
            ib[idx] = ib[idx - 1] + 0.5 * hx * (gb + gb_prev);
            ia[idx] = ia[idx - 1] + 0.5 * hx * (ga + ga_prev);
          }
          d[idx] = std::exp(ib[idx]) / a;  // (-1)^2 c_2 / a
          gb_prev = gb;
          ga_prev = ga;
        }
        c2_far_(i, n) = std::exp(ib[nx - 1 - base]);
      }
    }
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace periwave

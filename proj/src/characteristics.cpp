#include "periwave/characteristics.hpp"

#include <algorithm>
#include <exception>
#include <cmath>
#include <fstream>
#include <functional>
#include <stdexcept>

namespace periwave {

namespace {

// One classical RK4 step for d tau/d xi = sgn / a(xi, tau).
double rk4_step(double xi, double tau, double h, double sgn, const Speed& s) {
  const double k1 = sgn / s.v(xi, tau);
  const double k2 = sgn / s.v(xi + 0.5 * h, tau + 0.5 * h * k1);
  const double k3 = sgn / s.v(xi + 0.5 * h, tau + 0.5 * h * k2);
  const double k4 = sgn / s.v(xi + h, tau + h * k3);
  return tau + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
}

constexpr double kNodeTol = 1e-13;

}  // namespace

TracedCurve trace(int j, double x, double t, const Speed& speed, int nx) {
  const double hx = 1.0 / (nx - 1);
  const double sgn = (j == 1) ? -1.0 : 1.0;
  TracedCurve c;
  c.j = j;
  c.x0 = x;
  c.t0 = t;
  c.hx = hx;
  c.tau.assign(nx, 0.0);

  const int i_near = static_cast<int>(std::lround(x / hx));
  const bool on_node =
      i_near >= 0 && i_near < nx && std::abs(x - i_near * hx) < kNodeTol;

  // March right from the base.
  {
    double xi = x, tau = t;
    int m0;
    if (on_node) {
      c.tau[i_near] = t;
      m0 = i_near + 1;
    } else {
      m0 = static_cast<int>(std::ceil(x / hx - kNodeTol));
      if (m0 < nx && m0 * hx > xi) {
        tau = rk4_step(xi, tau, m0 * hx - xi, sgn, speed);
        xi = m0 * hx;
        c.tau[m0] = tau;
      } else if (m0 < nx) {
        c.tau[m0] = tau;
      }
      ++m0;
    }
    for (int m = m0; m < nx; ++m) {
      tau = rk4_step(xi, tau, hx, sgn, speed);
      xi = m * hx;
      c.tau[m] = tau;
    }
  }
  // March left from the base.
  {
    double xi = x, tau = t;
    int m0;
    if (on_node) {
      m0 = i_near - 1;
    } else {
      m0 = static_cast<int>(std::floor(x / hx + kNodeTol));
      if (m0 >= 0 && m0 * hx < xi) {
        tau = rk4_step(xi, tau, m0 * hx - xi, sgn, speed);
        xi = m0 * hx;
        c.tau[m0] = tau;
      } else if (m0 >= 0) {
        c.tau[m0] = tau;
      }
      --m0;
    }
    for (int m = m0; m >= 0; --m) {
      tau = rk4_step(xi, tau, -hx, sgn, speed);
      xi = m * hx;
      c.tau[m] = tau;
    }
  }
  return c;
}

double curve_time(const TracedCurve& curve, const Speed& speed, double xi) {
  const int nx = curve.nx();
  const double hx = curve.hx;
  const double sgn = (curve.j == 1) ? -1.0 : 1.0;
  if (xi <= 0.0) return curve.tau.front();
  if (xi >= 1.0) return curve.tau.back();
  int m = static_cast<int>(std::floor(xi / hx));
  m = std::clamp(m, 0, nx - 2);
  const double u = (xi - m * hx) / hx;
  if (u < kNodeTol) return curve.tau[m];
  const double tm = curve.tau[m], tp = curve.tau[m + 1];
  const double km = sgn / speed.v(m * hx, tm);
  const double kp = sgn / speed.v((m + 1) * hx, tp);
  const double u2 = u * u, u3 = u2 * u;
  return (2.0 * u3 - 3.0 * u2 + 1.0) * tm + (u3 - 2.0 * u2 + u) * hx * km +
         (-2.0 * u3 + 3.0 * u2) * tp + (u3 - u2) * hx * kp;
}

double integrate_along(const TracedCurve& curve, const Speed& speed,
                       const std::function<double(double, double)>& g, double from,
                       double to) {
  if (from == to) return 0.0;
  const double sign = (to > from) ? 1.0 : -1.0;
  const double lo = std::min(from, to), hi = std::max(from, to);
  const double hx = curve.hx;
  const int nx = curve.nx();

  // Sample points: lo, interior grid nodes, hi.
  std::vector<std::pair<double, double>> pts;  // (xi, integrand value)
  auto value_at = [&](double xi) {
    const int m = static_cast<int>(std::lround(xi / hx));
    const bool node = m >= 0 && m < nx && std::abs(xi - m * hx) < kNodeTol;
    const double tau = node ? curve.tau[m] : curve_time(curve, speed, xi);
    return g(xi, tau);
  };
  pts.emplace_back(lo, value_at(lo));
  const int m_first = static_cast<int>(std::ceil(lo / hx + kNodeTol));
  const int m_last = static_cast<int>(std::floor(hi / hx - kNodeTol));
  for (int m = std::max(m_first, 0); m <= std::min(m_last, nx - 1); ++m)
    pts.emplace_back(m * hx, g(m * hx, curve.tau[m]));
  pts.emplace_back(hi, value_at(hi));

  double acc = 0.0;
  for (std::size_t s = 1; s < pts.size(); ++s)
    acc += 0.5 * (pts[s].first - pts[s - 1].first) *
           (pts[s].second + pts[s - 1].second);
  return sign * acc;
}

TauPartials tau_partials(int j, double xi, double x, double t, const Speed& speed,
                         int nx) {
  const TracedCurve curve = trace(j, x, t, speed, nx);
  const double sgn = (j == 1) ? -1.0 : 1.0;
  const double integral = integrate_along(
      curve, speed,
      [&](double e, double tau) {
        const double a = speed.v(e, tau);
        return sgn * speed.vt(e, tau) / (a * a);
      },
      xi, x);
  const double e = std::exp(integral);
  TauPartials p;
  p.dtau_dt = e;
  p.dtau_dx = -sgn / speed.v(x, t) * e;  // (-1)^{j+1} / a(x,t) * exp(...)
  return p;
}

double inverse_trace(int j, double tau, double x, double t, const Speed& speed,
                     int nx) {
  const TracedCurve curve = trace(j, x, t, speed, nx);
  const double sgn = (j == 1) ? -1.0 : 1.0;
  // tau_1 decreases in xi, tau_2 increases.
  const double tau_at_0 = curve.tau.front(), tau_at_1 = curve.tau.back();
  const double lo_val = std::min(tau_at_0, tau_at_1);
  const double hi_val = std::max(tau_at_0, tau_at_1);
  const double slack = 1e-12 * (1.0 + std::abs(hi_val));
  if (tau < lo_val - slack || tau > hi_val + slack)
    throw std::domain_error("inverse_trace: tau outside the range swept by the curve");

  // Locate the bracketing node interval, then solve on the Hermite interpolant.
  const double hx = curve.hx;
  int m = 0;
  for (int i = 0; i + 1 < nx; ++i) {
    const double a = curve.tau[i], b = curve.tau[i + 1];
    if ((tau >= std::min(a, b) - slack) && (tau <= std::max(a, b) + slack)) {
      m = i;
      break;
    }
  }
  const double tm = curve.tau[m], tp = curve.tau[m + 1];
  const double km = sgn / speed.v(m * hx, tm);
  const double kp = sgn / speed.v((m + 1) * hx, tp);
  auto hermite = [&](double u) {
    const double u2 = u * u, u3 = u2 * u;
    return (2.0 * u3 - 3.0 * u2 + 1.0) * tm + (u3 - 2.0 * u2 + u) * hx * km +
           (-2.0 * u3 + 3.0 * u2) * tp + (u3 - u2) * hx * kp;
  };
  auto hermite_d = [&](double u) {
    const double u2 = u * u;
    return (6.0 * u2 - 6.0 * u) * tm + (3.0 * u2 - 4.0 * u + 1.0) * hx * km +
           (-6.0 * u2 + 6.0 * u) * tp + (3.0 * u2 - 2.0 * u) * hx * kp;
  };

  double a = 0.0, b = 1.0;
  double fa = hermite(a) - tau;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (a + b);
    const double fm = hermite(mid) - tau;
    if ((fa <= 0.0) == (fm <= 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  double u = 0.5 * (a + b);
  const double du = hermite_d(u);
  if (du != 0.0) u -= (hermite(u) - tau) / du;  // Newton polish
  u = std::clamp(u, 0.0, 1.0);
  return (m + u) * hx;
}

TildePartials tilde_partials(int j, double tau, double x, double t, const Speed& speed,
                             int nx) {
  const double xi = inverse_trace(j, tau, x, t, speed, nx);
  const TracedCurve curve = trace(j, x, t, speed, nx);
  // exp int_t^tau (-1)^j d_1 a(tilde tau_j(s), s) ds, re-parameterized by xi:
  // the integrand becomes (d_x a / a)(eta, tau_j(eta)) over eta in [x, xi].
  const double integral = integrate_along(
      curve, speed,
      [&](double e, double s) { return speed.vx(e, s) / speed.v(e, s); }, x, xi);
  TildePartials p;
  p.dxi_dx = std::exp(integral);
  p.dxi_dt = (j == 1 ? 1.0 : -1.0) * speed.v(x, t) * p.dxi_dx;  // (-1)^{j+1} a(x,t) exp
  return p;
}

TriangleField::TriangleField(int j, int nx, int nt) : j_(j), nx_(nx), nt_(nt) {
  offset_.resize(nx);
  std::size_t off = 0;
  for (int i = 0; i < nx; ++i) {
    offset_[i] = off;
    off += static_cast<std::size_t>(width(i)) * nt_;
  }
  data_.assign(off, 0.0);
}

CharField::CharField(const ProblemSpec& spec, const GridSpec& grid, double eps)
    : grid_(grid), T_(spec.T), speed_(Speed::from(spec, eps)) {
  grid.validate();
  const int nx = grid.nx, nt = grid.nt;
  const double hx = 1.0 / (nx - 1);
  const double ht = T_ / nt;
  tau1_ = TriangleField(1, nx, nt);
  tau2_ = TriangleField(2, nx, nt);

  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < nx; ++i) {
    try {
      for (int n = 0; n < nt; ++n) {
        const double t = n * ht;
        {  // j = 1: march left from x_i to 0
          double* row = tau1_.row(i, n);
          row[i] = t;
          double tau = t;
          for (int m = i - 1; m >= 0; --m) {
            tau = rk4_step((m + 1) * hx, tau, -hx, -1.0, speed_);
            row[m] = tau;
          }
        }
        {  // j = 2: march right from x_i to 1
          double* row = tau2_.row(i, n);
          row[i - tau2_.m_begin(i)] = t;
          double tau = t;
          for (int m = i + 1; m < nx; ++m) {
            tau = rk4_step((m - 1) * hx, tau, hx, 1.0, speed_);
            row[m - i] = tau;
          }
        }
      }
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

void write_trace_csv(const std::string& path, const std::vector<TracedCurve>& curves) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "j,x,t,xi,tau\n";
  char buf[128];
  for (const TracedCurve& c : curves) {
    for (int m = 0; m < c.nx(); ++m) {
      std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g\n", c.j, c.x0, c.t0,
                    m * c.hx, c.tau[m]);
      out << buf;
    }
  }
}

}  // namespace periwave

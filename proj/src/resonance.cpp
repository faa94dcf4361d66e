#include "periwave/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "periwave/quadrature.hpp"

namespace periwave {

namespace {

constexpr double kStrictEps = 1e-6;  // strict-inequality threshold

// Trapezoid over the full xi range of an edge-to-edge curve.
double full_integral(const TracedCurve& c, const std::function<double(double, double)>& g) {
  const int nx = c.nx();
  double acc = 0.0;
  double prev = g(0.0, c.tau[0]);
  for (int m = 1; m < nx; ++m) {
    const double cur = g(m * c.hx, c.tau[m]);
    acc += 0.5 * c.hx * (prev + cur);
    prev = cur;
  }
  return acc;
}

}  // namespace

BoundaryProducts boundary_products(const ProblemSpec& spec, const GridSpec& grid,
                                   int samples_per_period, double eps) {
  const Speed speed = Speed::from(spec, eps);
  const RiemannCoeffs rc(spec, grid, eps);
  const int nx = grid.nx;
  const int ns = samples_per_period;
  BoundaryProducts bp;
  bp.t_samples.resize(ns);
  bp.lambda_b.resize(ns);
  bp.lambda_a.resize(ns);
  bp.pi_b.resize(ns);
  bp.pi_a.resize(ns);

  auto g_b11 = [&](double e, double tau) { return rc.bjj_over_a(1, e, tau); };
  auto g_b22 = [&](double e, double tau) { return rc.bjj_over_a(2, e, tau); };
  auto g_a = [&](double e, double tau) { return rc.dta_over_a2(e, tau); };

  for (int s = 0; s < ns; ++s) {
    const double t = spec.T * s / ns;
    bp.t_samples[s] = t;

    // Lambda: along tau_1(.,1,t) then tau_2(.,0,tau_1(0,1,t)).
    const TracedCurve c1 = trace(1, 1.0, t, speed, nx);
    const TracedCurve c2 = trace(2, 0.0, c1.tau.front(), speed, nx);
    bp.lambda_b[s] = full_integral(c1, g_b11) + full_integral(c2, g_b22);
    bp.lambda_a[s] = full_integral(c1, g_a) + full_integral(c2, g_a);

    // Pi: along tau_2(.,0,t) then tau_1(.,1,tau_2(1,0,t)).
    const TracedCurve d2 = trace(2, 0.0, t, speed, nx);
    const TracedCurve d1 = trace(1, 1.0, d2.tau.back(), speed, nx);
    bp.pi_b[s] = full_integral(d2, g_b22) + full_integral(d1, g_b11);
    bp.pi_a[s] = full_integral(d2, g_a) + full_integral(d1, g_a);
  }
  return bp;
}

void check_small(const ProblemSpec& spec, const GridSpec& grid, ResonanceReport& rep,
                 double eps) {
  const Speed speed = Speed::from(spec, eps);
  const RiemannCoeffs rc(spec, grid, eps);
  const int nx = grid.nx;
  const int ns = 2 * grid.nt;  // grid plus midpoints

  auto g_b11 = [&](double e, double tau) { return rc.bjj_over_a(1, e, tau); };
  auto g_b22 = [&](double e, double tau) { return rc.bjj_over_a(2, e, tau); };

  rep.t_samples.resize(ns);
  rep.small_integral.resize(ns);
  rep.small_plus_integral.resize(ns);
  for (int s = 0; s < ns; ++s) {
    const double t = spec.T * s / ns;
    rep.t_samples[s] = t;

    const TracedCurve c1 = trace(1, 1.0, t, speed, nx);
    const TracedCurve c2 = trace(2, 0.0, c1.tau.front(), speed, nx);
    rep.small_integral[s] = full_integral(c1, g_b11) + full_integral(c2, g_b22);

    const TracedCurve e2 = trace(2, 0.0, t, speed, nx);        // tau_2(.,0,t)
    const TracedCurve e2r = trace(2, 1.0, t, speed, nx);       // for tau_2(0,1,t)
    const TracedCurve e1 = trace(1, 1.0, e2r.tau.front(), speed, nx);
    rep.small_plus_integral[s] = full_integral(e2, g_b22) + full_integral(e1, g_b11);
  }
  auto min_abs = [](const std::vector<double>& v) {
    double m = std::numeric_limits<double>::infinity();
    for (double x : v) m = std::min(m, std::abs(x));
    return m;
  };
  rep.small_min_abs = min_abs(rep.small_integral);
  rep.small_plus_min_abs = min_abs(rep.small_plus_integral);
  rep.small_pass = rep.small_min_abs > kStrictEps;
  rep.small_plus_pass = rep.small_plus_min_abs > kStrictEps;
  rep.margin_small = rep.small_min_abs - kStrictEps;
}

std::pair<double, double> compute_ql(const ProblemSpec& spec, const GridSpec& grid,
                                     int l, double eps) {
  const BoundaryProducts bp = boundary_products(spec, grid, grid.nt, eps);
  std::vector<double> lam(grid.nt);
  for (int n = 0; n < grid.nt; ++n) lam[n] = bp.lambda(l, n);
  double q = 0.0;
  for (double v : lam) q = std::max(q, std::abs(v));
  const std::vector<double> dl = d_dt_periodic(lam, spec.T / grid.nt);
  double qp = 0.0;
  for (double v : dl) qp = std::max(qp, std::abs(v));
  return {q, qp};
}

void check_small_l(const ProblemSpec& spec, const GridSpec& grid, int k,
                   ResonanceReport& rep, double eps) {
  const BoundaryProducts bp = boundary_products(spec, grid, 2 * grid.nt, eps);
  const int ns = static_cast<int>(bp.t_samples.size());

  double lam_max = 0.0, lam_min = std::numeric_limits<double>::infinity();
  double pi_max = 0.0, pi_min = std::numeric_limits<double>::infinity();
  for (int l = 0; l <= k; ++l) {
    for (int s = 0; s < ns; ++s) {
      const double lam = bp.lambda(l, s);
      const double pi = bp.pi(l, s);
      lam_max = std::max(lam_max, lam);
      lam_min = std::min(lam_min, lam);
      pi_max = std::max(pi_max, pi);
      pi_min = std::min(pi_min, pi);
    }
  }
  rep.small1 = lam_max < 1.0 - kStrictEps;
  rep.small11 = lam_min > 1.0 + kStrictEps;
  rep.small111 = pi_max < 1.0 - kStrictEps;
  rep.small1111 = pi_min > 1.0 + kStrictEps;
  rep.margin_small1 = (1.0 - kStrictEps) - lam_max;
  rep.margin_small11 = lam_min - (1.0 + kStrictEps);
  rep.margin_small111 = (1.0 - kStrictEps) - pi_max;
  rep.margin_small1111 = pi_min - (1.0 + kStrictEps);
}

double stationary_simplification(const ProblemSpec& spec, const GridSpec& grid,
                                 double eps) {
  const expr::Expr at = spec.a.derivative(expr::Var::T);
  double max_at = 0.0;
  for (int i = 0; i < grid.nx; ++i)
    for (int n = 0; n < grid.nt; ++n)
      max_at = std::max(max_at,
                        std::abs(at(i / double(grid.nx - 1), spec.T * n / grid.nt, eps)));
  if (max_at > 1e-12)
    throw std::invalid_argument(
        "stationary_simplification: a depends on t (max |d_t a| = " +
        std::to_string(max_at) + ")");

  const expr::Expr ax = spec.a.derivative(expr::Var::X);
  auto integrand = [&](double e) {
    const double a = spec.a(e, 0.0, eps);
    const double a1 = spec.a1(e, 0.0, eps);
    return (a * a1 + a * ax(e, 0.0, eps)) / (a * a);
  };
  const int sub = std::max(64, 2 * (grid.nx - 1));
  return quadrature::simpson(integrand, 0.0, 1.0, sub);
}

ResonanceReport analyze_resonance(const ProblemSpec& spec, const GridSpec& grid,
                                  double eps) {
  ResonanceReport rep;
  rep.sampling_caveat =
      "\"for all t\" conditions are sampled on the t-grid plus midpoints; "
      "values between samples are not certified";
  check_small(spec, grid, rep, eps);
  check_small_l(spec, grid, spec.k, rep, eps);
  rep.q.resize(spec.k + 1);
  rep.qp.resize(spec.k + 1);
  for (int l = 0; l <= spec.k; ++l) {
    auto [q, qp] = compute_ql(spec, grid, l, eps);
    rep.q[l] = q;
    rep.qp[l] = qp;
  }
  rep.near_resonance_warning = false;
  for (double q : rep.q)
    if (std::abs(q - 1.0) < 1e-3) rep.near_resonance_warning = true;
  try {
    rep.stationary_value = stationary_simplification(spec, grid, eps);
  } catch (const std::invalid_argument&) {
    rep.stationary_value.reset();
  }
  return rep;
}

}  // namespace periwave

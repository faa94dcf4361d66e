#include "periwave/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "periwave/resonance.hpp"

namespace periwave {

namespace {

ProblemSpec at_eps(const ProblemSpec& base, double e) {
  using expr::Var;
  ProblemSpec s = base;
  s.a = base.a.substitute(Var::Eps, e);
  s.a1 = base.a1.substitute(Var::Eps, e);
  s.a2 = base.a2.substitute(Var::Eps, e);
  s.a3 = base.a3.substitute(Var::Eps, e);
  s.f = base.f.substitute(Var::Eps, e);
  s.r0 = base.r0.substitute(Var::Eps, e);
  s.r1 = base.r1.substitute(Var::Eps, e);
  return s;
}

}  // namespace

ManufacturedProblem manufacture(const expr::Expr& w_star, const expr::Expr& a,
                                const expr::Expr& a1, const expr::Expr& a2,
                                const expr::Expr& a3, double T, const GridSpec& grid,
                                int k) {
  using expr::Expr;
  using expr::Var;
  const Expr wt = w_star.derivative(Var::T);
  const Expr wtt = wt.derivative(Var::T);
  const Expr wx = w_star.derivative(Var::X);
  const Expr wxx = wx.derivative(Var::X);

  // The Robin quotient needs w* nonvanishing on both boundary lines.
  const double ht = T / grid.nt;
  for (int side = 0; side <= 1; ++side) {
    double max_abs = 0.0, min_abs = std::numeric_limits<double>::infinity();
    for (int n = 0; n < grid.nt; ++n) {
      const double v = w_star(static_cast<double>(side), n * ht);
      max_abs = std::max(max_abs, std::abs(v));
      min_abs = std::min(min_abs, std::abs(v));
    }
    if (min_abs <= 1e-12 * (1.0 + max_abs)) {
      std::ostringstream os;
      os << "manufacture: w_star vanishes on the boundary x = " << side;
      throw std::domain_error(os.str());
    }
  }

  ManufacturedProblem mp;
  mp.w_star = w_star;
  mp.spec.a = a;
  mp.spec.a1 = a1;
  mp.spec.a2 = a2;
  mp.spec.a3 = a3;
  mp.spec.T = T;
  mp.spec.k = k;
  mp.spec.f = wtt - a * a * wxx + a1 * wt + a2 * wx + a3 * w_star;
  const Expr quotient = wx / w_star;
  mp.spec.r0 = quotient.substitute(Var::X, 0.0);
  mp.spec.r1 = quotient.substitute(Var::X, 1.0);
  mp.validation = validate(mp.spec, grid);
  return mp;
}

double residual_pde(const GridFunction& w, const ProblemSpec& spec,
                    const GridSpec& grid, double eps) {
  const GridFunction wtt = d2_dt(w);
  const GridFunction wxx = d2_dx(w);
  const GridFunction wt = d_dt(w);
  const GridFunction wx = d_dx(w);
  double sup = 0.0;
  for (int i = 1; i < grid.nx - 1; ++i) {
    for (int n = 0; n < grid.nt; ++n) {
      const double x = w.x(i), t = w.t(n);
      const double a = spec.a(x, t, eps);
      const double r = wtt(i, n) - a * a * wxx(i, n) + spec.a1(x, t, eps) * wt(i, n) +
                       spec.a2(x, t, eps) * wx(i, n) +
                       spec.a3(x, t, eps) * w(i, n) - spec.f(x, t, eps);
      sup = std::max(sup, std::abs(r));
    }
  }
  return sup;
}

double residual_pde(const expr::Expr& w, const ProblemSpec& spec, const GridSpec& grid,
                    double eps) {
  using expr::Expr;
  using expr::Var;
  const Expr wt = w.derivative(Var::T);
  const Expr wx = w.derivative(Var::X);
  const Expr res = wt.derivative(Var::T) - spec.a * spec.a * wx.derivative(Var::X) +
                   spec.a1 * wt + spec.a2 * wx + spec.a3 * w - spec.f;
  double sup = 0.0;
  const double hx = 1.0 / (grid.nx - 1), ht = spec.T / grid.nt;
  for (int i = 0; i < grid.nx; ++i)
    for (int n = 0; n < grid.nt; ++n)
      sup = std::max(sup, std::abs(res(i * hx, n * ht, eps)));
  return sup;
}

std::pair<double, double> residual_boundary(const GridFunction& w,
                                            const ProblemSpec& spec, double eps) {
  const GridFunction wx = d_dx(w);
  const int nx = w.nx();
  double r0 = 0.0, r1 = 0.0;
  for (int n = 0; n < w.nt(); ++n) {
    const double t = w.t(n);
    r0 = std::max(r0, std::abs(wx(0, n) - spec.r0(0.0, t, eps) * w(0, n)));
    r1 = std::max(r1, std::abs(wx(nx - 1, n) - spec.r1(1.0, t, eps) * w(nx - 1, n)));
  }
  return {r0, r1};
}

KernelDimension kernel_dimension(const Eigen::MatrixXd& M, double rel_threshold) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(M);
  const Eigen::VectorXd& sv = svd.singularValues();  // descending
  KernelDimension out;
  out.sigma_max = sv.size() ? sv[0] : 0.0;
  const double thr = rel_threshold * out.sigma_max;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] < thr) ++out.dimension;
  const int tail = std::min<int>(10, static_cast<int>(sv.size()));
  for (int i = 0; i < tail; ++i) out.tail.push_back(sv[sv.size() - 1 - i]);
  return out;
}

ConvergenceStudy convergence_study(const ManufacturedProblem& mp,
                                   const std::vector<GridSpec>& grids,
                                   const SolveOptions& opts) {
  if (grids.size() < 3)
    throw std::invalid_argument("convergence_study: need at least 3 grids");
  ConvergenceStudy cs;
  cs.grids = grids;
  for (const GridSpec& g : grids) {
    const SolveResult res = solve(mp.spec, g, opts);
    if (!res.converged)
      throw std::runtime_error("convergence_study: solve did not converge on " +
                               std::to_string(g.nx) + "x" + std::to_string(g.nt));
    const GridFunction exact = sample(mp.w_star, g, mp.spec.T);
    cs.errors.push_back(sup_diff(res.w, exact));
  }
  for (std::size_t i = 0; i + 1 < cs.errors.size(); ++i) {
    const double h0 = 1.0 / (grids[i].nx - 1), h1 = 1.0 / (grids[i + 1].nx - 1);
    cs.orders.push_back(std::log(cs.errors[i] / cs.errors[i + 1]) / std::log(h0 / h1));
  }
  cs.convergent = true;
  for (std::size_t i = 0; i + 1 < cs.errors.size(); ++i)
    if (!(cs.errors[i + 1] < cs.errors[i])) cs.convergent = false;
  return cs;
}

std::vector<SmoothnessRow> smoothness_indicator(const GridFunction& w) {
  const int nt = w.nt();
  if (nt & (nt - 1))
    throw std::invalid_argument("smoothness_indicator: nt must be a power of two");
  std::vector<SmoothnessRow> rows;
  rows.reserve(w.nx());
  const int kmax = nt / 2;
  std::vector<double> mag(kmax + 1);
  for (int i = 0; i < w.nx(); ++i) {
    for (int k = 0; k <= kmax; ++k) {
      double re = 0.0, im = 0.0;
      for (int n = 0; n < nt; ++n) {
        const double ph = -2.0 * M_PI * k * n / nt;
        re += w(i, n) * std::cos(ph);
        im += w(i, n) * std::sin(ph);
      }
      mag[k] = std::hypot(re, im) / nt;
    }
    double peak = 0.0;
    for (int k = 1; k <= kmax; ++k) peak = std::max(peak, mag[k]);
    SmoothnessRow row;
    row.x = w.x(i);
    std::vector<double> lk, lm;
    for (int k = 1; k <= kmax; ++k) {
      if (mag[k] > 1e-12 * peak && peak > 0.0) {
        lk.push_back(std::log(static_cast<double>(k)));
        lm.push_back(std::log(mag[k]));
      }
    }
    if (lk.size() < 4) {
      row.band_limited = true;
    } else {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      const double n = static_cast<double>(lk.size());
      for (std::size_t idx = 0; idx < lk.size(); ++idx) {
        sx += lk[idx];
        sy += lm[idx];
        sxx += lk[idx] * lk[idx];
        sxy += lk[idx] * lm[idx];
      }
      row.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      row.modes_used = static_cast<int>(lk.size());
    }
    rows.push_back(row);
  }
  return rows;
}

SweepResult sweep_epsilon(const EpsFamily& family, const GridSpec& grid,
                          const SolveOptions& opts) {
  const auto& eps = family.eps_values;
  if (eps.empty()) throw std::invalid_argument("sweep_epsilon: empty eps list");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (eps[i] < 0.0 || eps[i] >= 1.0)
      throw std::invalid_argument("sweep_epsilon: eps values must lie in [0,1)");
    if (i > 0 && !(eps[i] > eps[i - 1]))
      throw std::invalid_argument("sweep_epsilon: eps values must be sorted");
  }

  SweepResult out;
  for (double e : eps) {
    const ProblemSpec spec_e = at_eps(family.base, e);
    const ValidationReport vr = validate(spec_e, grid);
    if (!vr.pass)
      throw SweepAbort("sweep aborted: validation fails at eps = " + std::to_string(e),
                       e);
    const ResonanceReport rr = analyze_resonance(spec_e, grid);
    if (!(rr.small1 || rr.small11 || rr.small111 || rr.small1111))
      throw SweepAbort(
          "sweep aborted: no non-resonance condition holds at eps = " +
              std::to_string(e),
          e);
    const SolveResult res = solve(spec_e, grid, opts);
    if (!res.converged)
      throw SweepAbort("sweep aborted: solve failed at eps = " + std::to_string(e), e);
    out.solutions.push_back(res.w);
  }

  const int m = static_cast<int>(eps.size());
  std::vector<GridFunction> dt_grids;
  dt_grids.reserve(m);
  for (const GridFunction& w : out.solutions) dt_grids.push_back(d_dt(w));

  for (int i = 0; i < m; ++i) {
    SweepRow row;
    row.eps = eps[i];
    row.sup_err = sup_diff(out.solutions[i], out.solutions[0]);
    const int lo = std::max(0, i - 1), hi = std::min(m - 1, i + 1);
    if (hi > lo) {
      const double de = eps[hi] - eps[lo];
      row.deriv_est =
          (out.solutions[hi].values() - out.solutions[lo].values()).abs().maxCoeff() /
          de;
      row.deriv_est_dt =
          (dt_grids[hi].values() - dt_grids[lo].values()).abs().maxCoeff() / de;
    }
    out.rows.push_back(row);
  }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      out.max_pairwise_diff =
          std::max(out.max_pairwise_diff, sup_diff(out.solutions[i], out.solutions[j]));

  // Richardson pairs wherever the list contains a uniform 5-point stencil.
  for (int i = 2; i + 2 < m; ++i) {
    const double h = eps[i] - eps[i - 1];
    bool uniform = true;
    for (int d = -1; d <= 1; ++d)
      if (std::abs((eps[i + d + 1] - eps[i + d]) - h) > 1e-12) uniform = false;
    if (!uniform || h <= 0.0) continue;
    ArrayRM fine =
        (out.solutions[i + 1].values() - out.solutions[i - 1].values()) / (2.0 * h);
    ArrayRM coarse =
        (out.solutions[i + 2].values() - out.solutions[i - 2].values()) / (4.0 * h);
    RichardsonRow rr;
    rr.eps_center = eps[i];
    rr.est_fine = fine.abs().maxCoeff();
    rr.est_coarse = coarse.abs().maxCoeff();
    rr.agreement = (coarse - fine).abs().maxCoeff() / std::max(rr.est_fine, 1e-300);
    out.richardson.push_back(rr);
  }
  return out;
}

}  // namespace periwave

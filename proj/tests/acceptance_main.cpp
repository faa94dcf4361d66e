// Acceptance suite: one check per criterion, each printing a PASS/FAIL line.
// Tolerances are fixed here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "periwave/diagnostics.hpp"
#include "periwave/resonance.hpp"
#include "periwave/solver.hpp"
#include "test_fixtures.hpp"

using namespace periwave;
using testfix::m1;
using testfix::speed_suite;
using testfix::telegraph;
using Expr = expr::Expr;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& name,
            const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion,
              name.c_str(), detail.c_str());
  if (!pass) ++failures;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// ---------------------------------------------------------------------------

void criterion1_manufactured_solution() {
  const auto t0 = std::chrono::steady_clock::now();
  const ManufacturedProblem mp = m1({64, 64});
  std::vector<double> errors, rels;
  bool all_converged = true;
  for (GridSpec g : {GridSpec{64, 64}, GridSpec{128, 128}, GridSpec{256, 256}}) {
    const SolveResult res = solve(mp.spec, g);
    all_converged = all_converged && res.converged;
    const GridFunction exact = sample(mp.w_star, g, 1.0);
    errors.push_back(sup_diff(res.w, exact));
    rels.push_back(errors.back() / exact.sup_norm());
  }
  std::vector<double> orders;
  for (int k = 0; k + 1 < 3; ++k)
    orders.push_back(std::log2(errors[k] / errors[k + 1]));
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool pass = all_converged && rels[1] <= 1e-3 && orders[0] >= 1.7 &&
                    orders[0] <= 2.3 && orders[1] >= 1.7 && orders[1] <= 2.3 &&
                    seconds <= 60.0;
  std::ostringstream d;
  d << "rel err@128 = " << fmt(rels[1]) << ", orders = " << fmt(orders[0]) << ", "
    << fmt(orders[1]) << ", runtime = " << fmt(seconds) << " s";
  report(1, pass, "manufactured solution M1 and convergence order", d.str());
}

void criterion2_characteristics() {
  bool pass = true;
  std::ostringstream d;

  // constant-speed closed forms to 1e-12
  {
    ProblemSpec sp;
    sp.a = Expr::parse("1");
    const Speed s1 = Speed::from(sp);
    double worst = 0.0;
    const TracedCurve c = trace(1, 1.0, 0.0, s1, 256);
    for (int m = 0; m < 256; ++m)
      worst = std::max(worst, std::abs(c.tau[m] - (1.0 - m * c.hx)));
    ProblemSpec sp2;
    sp2.a = Expr::parse("2");
    const Speed s2 = Speed::from(sp2);
    worst = std::max(worst, std::abs(trace(1, 1.0, 0.0, s2, 256).tau.front() - 0.5));
    pass = pass && worst <= 1e-12;
    d << "const defect = " << fmt(worst);
  }
  // a = 1+x: tau_1(0,1,0) = ln 2 to 1e-8 at N_x = 256
  {
    ProblemSpec sp;
    sp.a = Expr::parse("1+x");
    const double tau0 = trace(1, 1.0, 0.0, Speed::from(sp), 256).tau.front();
    const double err = std::abs(tau0 - std::log(2.0));
    pass = pass && err <= 1e-8;
    d << ", ln2 err = " << fmt(err);
  }
  // round-trip defect <= 1e-9 at N_x = 256
  {
    double worst = 0.0;
    for (const Expr& a : speed_suite()) {
      ProblemSpec sp;
      sp.a = a;
      const Speed speed = Speed::from(sp);
      for (int j : {1, 2}) {
        const TracedCurve fwd = trace(j, 0.5, 0.4, speed, 256);
        for (int m : {0, 100, 255}) {
          const TracedCurve back = trace(j, m * fwd.hx, fwd.tau[m], speed, 256);
          const int i_base = 128;  // 0.5 is not a node of the 256 grid; use nearest
          (void)i_base;
          worst = std::max(worst, std::abs(curve_time(back, speed, 0.5) - 0.4));
        }
      }
    }
    pass = pass && worst <= 1e-9;
    d << ", round trip = " << fmt(worst);
  }
  report(2, pass, "characteristic traces match closed forms", d.str());
}

void criterion3_derivative_formulas() {
  double worst = 0.0;
  const double delta = 1e-5;
  for (const Expr& a : speed_suite()) {
    ProblemSpec sp;
    sp.a = a;
    const Speed speed = Speed::from(sp);
    for (int j : {1, 2}) {
      const double x = 0.625, t = 0.2;
      const double xi = (j == 1) ? 0.0 : 1.0;
      const int m = (j == 1) ? 0 : 255;
      const TauPartials p = tau_partials(j, xi, x, t, speed, 256);
      const double fx = (trace(j, x + delta, t, speed, 256).tau[m] -
                         trace(j, x - delta, t, speed, 256).tau[m]) /
                        (2 * delta);
      const double ft = (trace(j, x, t + delta, speed, 256).tau[m] -
                         trace(j, x, t - delta, speed, 256).tau[m]) /
                        (2 * delta);
      worst = std::max(worst, std::abs(p.dtau_dx - fx) / std::abs(fx));
      worst = std::max(worst, std::abs(p.dtau_dt - ft) / std::abs(ft));

      const TracedCurve c = trace(j, x, t, speed, 256);
      const double tau = c.tau[j == 1 ? 64 : 192];
      const TildePartials tp = tilde_partials(j, tau, x, t, speed, 256);
      const double gx = (inverse_trace(j, tau, x + delta, t, speed, 256) -
                         inverse_trace(j, tau, x - delta, t, speed, 256)) /
                        (2 * delta);
      const double gt = (inverse_trace(j, tau, x, t + delta, speed, 256) -
                         inverse_trace(j, tau, x, t - delta, speed, 256)) /
                        (2 * delta);
      worst = std::max(worst, std::abs(tp.dxi_dx - gx) / std::max(1.0, std::abs(gx)));
      worst = std::max(worst, std::abs(tp.dxi_dt - gt) / std::max(1.0, std::abs(gt)));
    }
  }
  report(3, worst <= 1e-4, "derivative formulas vs finite differences",
         "worst rel err = " + fmt(worst));
}

void criterion4_kernel_weights() {
  // cocycle to 1e-8 relative on a time-dependent problem
  ProblemSpec sp;
  sp.a = Expr::parse("1+0.3*x+0.2*sin(2*pi*t)*(0.5+0.5*x)");
  sp.a1 = Expr::parse("0.5+0.25*cos(2*pi*t)");
  sp.a2 = Expr::parse("0.3*x");
  sp.r0 = Expr::parse("1");
  sp.r1 = Expr::parse("1");
  const GridSpec g{257, 32};
  const Speed speed = Speed::from(sp);
  const RiemannCoeffs rc(sp, g);
  double worst_cocycle = 0.0;
  for (int j : {1, 2}) {
    const double x = (j == 1) ? 1.0 : 0.0;
    const TracedCurve curve = trace(j, x, 0.3, speed, g.nx);
    for (auto [m1v, m2v] : {std::pair{64, 0}, std::pair{128, 32}, std::pair{192, 96}}) {
      const double xi1 = m1v / 256.0, xi2 = m2v / 256.0;
      const double whole = compute_c(j, 0, xi2, x, 0.3, rc, speed, g.nx);
      const double split = compute_c(j, 0, xi2, xi1, curve.tau[m1v], rc, speed, g.nx) *
                           compute_c(j, 0, xi1, x, 0.3, rc, speed, g.nx);
      worst_cocycle = std::max(worst_cocycle, std::abs(whole - split) / std::abs(whole));
    }
  }
  // constant-coefficient closed form to 1e-10
  ProblemSpec cc = telegraph(1.0);
  cc.a = Expr::parse("2");
  const Speed cs = Speed::from(cc);
  const RiemannCoeffs crc(cc, g);
  double worst_cc = 0.0;
  for (double xi : {0.0, 0.25, 0.75}) {
    const double c1 = compute_c(1, 0, xi, 1.0, 0.0, crc, cs, g.nx);
    const double c2 = compute_c(2, 0, xi, 0.0, 0.0, crc, cs, g.nx);
    worst_cc = std::max(worst_cc, std::abs(c1 - std::exp(-0.25 * (xi - 1.0))));
    worst_cc = std::max(worst_cc, std::abs(c2 - std::exp(0.25 * xi)));
  }
  const bool pass = worst_cocycle <= 1e-8 && worst_cc <= 1e-10;
  report(4, pass, "kernel cocycle and constant-coefficient closed form",
         "cocycle = " + fmt(worst_cocycle) + ", closed form = " + fmt(worst_cc));
}

void criterion5_resonance_table() {
  bool pass = true;
  std::ostringstream d;
  {
    ProblemSpec sp = telegraph(-1.0);
    sp.k = 3;
    const ResonanceReport rep = analyze_resonance(sp, {65, 64});
    double worst = 0.0;
    for (double q : rep.q) worst = std::max(worst, std::abs(q - std::exp(-1.0)));
    pass = pass && worst <= 1e-6 && rep.small1 && !rep.small11;
    d << "q(-1) err = " << fmt(worst);
  }
  {
    ProblemSpec sp = telegraph(1.0);
    sp.k = 3;
    const ResonanceReport rep = analyze_resonance(sp, {65, 64});
    double worst = 0.0;
    for (double q : rep.q) worst = std::max(worst, std::abs(q - std::exp(1.0)));
    pass = pass && worst <= 1e-6 && rep.small11 && !rep.small1;
    d << ", q(+1) err = " << fmt(worst);
  }
  {
    const ResonanceReport rep = analyze_resonance(telegraph(0.0), {65, 64});
    const bool none =
        !rep.small1 && !rep.small11 && !rep.small111 && !rep.small1111 &&
        !rep.small_pass && !rep.small_plus_pass;
    pass = pass && none;
    d << ", undamped verdicts all false = " << (none ? "yes" : "no");
  }
  report(5, pass, "resonance verdicts and q table", d.str());
}

void criterion6_trace_iteration_ratios() {
  const GridSpec g{33, 32};
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  GridPair rhs(g, 1.0);
  for (int i = 0; i < g.nx; ++i)
    for (int n = 0; n < g.nt; ++n) {
      rhs.u1(i, n) = dist(rng);
      rhs.u2(i, n) = dist(rng);
    }
  DiscreteOperators fwd(telegraph(-1.0), g);
  TraceIterationStats sf;
  (void)fwd.invert_ImB(rhs, {}, &sf);
  const double target_f = std::exp(-1.0);  // q0 < 1: ratio ~ q0
  const bool ok_f = sf.direction == "iso2-forward" &&
                    std::abs(sf.contraction_estimate - target_f) <= 0.1 * target_f;

  DiscreteOperators bwd(telegraph(1.0), g);
  TraceIterationStats sb;
  (void)bwd.invert_ImB(rhs, {}, &sb);
  const double target_b = 1.0 / std::exp(1.0);  // q0 > 1: ratio ~ 1/q0
  const bool ok_b = sb.direction == "iso2-backward" &&
                    std::abs(sb.contraction_estimate - target_b) <= 0.1 * target_b;

  report(6, ok_f && ok_b, "trace fixed-point contraction ratios",
         "forward = " + fmt(sf.contraction_estimate) +
             ", backward = " + fmt(sb.contraction_estimate) +
             ", q0-derived target = " + fmt(target_f));
}

void criterion7_dense_vs_picard_and_svd() {
  const GridSpec g{33, 32};
  const ManufacturedProblem mp = m1(g);
  SolveOptions po;
  po.strategy = SolveOptions::Strategy::Picard;
  po.relaxation = 0.5;
  const SolveResult rp = solve(mp.spec, g, po);
  SolveOptions dopt;
  dopt.strategy = SolveOptions::Strategy::Dense;
  const SolveResult rd = solve(mp.spec, g, dopt);
  const double agree = std::max(sup_diff(rp.u, rd.u), sup_diff(rp.w, rd.w));

  const KernelDimension good = kernel_dimension(assemble_dense(telegraph(-1.0), g));
  const KernelDimension bad = kernel_dimension(assemble_dense(telegraph(0.0), g));
  const double r_good = good.tail.front() / good.sigma_max;
  const double r_bad = bad.tail.front() / bad.sigma_max;

  const bool pass = rp.converged && rd.converged && agree <= 1e-7 &&
                    good.dimension == 0 && r_good > 1e-3 && r_bad <= 1e-3 * r_good;
  report(7, pass, "dense/picard agreement and kernel-dimension contrast",
         "agree = " + fmt(agree) + ", sv ratio = " + fmt(r_good) +
             ", resonant ratio = " + fmt(r_bad));
}

void criterion8_linearity() {
  const GridSpec g{33, 32};
  const SolveResult zero = solve(telegraph(-1.0), g);
  const bool ok_zero = zero.converged && zero.w.sup_norm() <= 1e-9;

  ProblemSpec sp1 = telegraph(-1.0);
  sp1.f = Expr::parse("sin(2*pi*t)");
  ProblemSpec sp2 = telegraph(-1.0);
  sp2.f = Expr::parse("cos(2*pi*t)*(1+x)");
  ProblemSpec sp12 = telegraph(-1.0);
  sp12.f = Expr::parse("sin(2*pi*t)+cos(2*pi*t)*(1+x)");
  const SolveResult r1 = solve(sp1, g);
  const SolveResult r2 = solve(sp2, g);
  const SolveResult r12 = solve(sp12, g);
  GridFunction sum = r1.w;
  sum.values() += r2.w.values();
  const double defect = sup_diff(r12.w, sum);
  const bool pass = ok_zero && r1.converged && r2.converged && r12.converged &&
                    defect <= 1e-9;
  report(8, pass, "zero data and superposition",
         "|w(0)| = " + fmt(zero.w.sup_norm()) + ", superposition defect = " +
             fmt(defect));
}

void criterion9_epsilon_sweep() {
  const GridSpec g{33, 32};
  ProblemSpec indep = telegraph(-1.0);
  indep.f = Expr::parse("sin(2*pi*t)");
  const SweepResult sw0 = sweep_epsilon({indep, {0.0, 0.01, 0.02}}, g);
  const bool ok_indep = sw0.max_pairwise_diff <= 1e-9;

  ProblemSpec dep = telegraph(-1.0);
  dep.a1 = Expr::parse("-1+eps");
  dep.f = Expr::parse("sin(2*pi*t)");
  const SweepResult sw1 =
      sweep_epsilon({dep, {0.0, 0.005, 0.01, 0.015, 0.02}}, g);
  const bool ok_rich = !sw1.richardson.empty() && sw1.richardson.front().agreement <= 0.05;

  report(9, ok_indep && ok_rich, "epsilon sweep consistency",
         "pairwise = " + fmt(sw0.max_pairwise_diff) + ", richardson agreement = " +
             fmt(sw1.richardson.empty() ? 1.0 : sw1.richardson.front().agreement));
}

}  // namespace

int main() {
  criterion1_manufactured_solution();
  criterion2_characteristics();
  criterion3_derivative_formulas();
  criterion4_kernel_weights();
  criterion5_resonance_table();
  criterion6_trace_iteration_ratios();
  criterion7_dense_vs_picard_and_svd();
  criterion8_linearity();
  criterion9_epsilon_sweep();
  std::printf("%d of 9 criteria passed\n", 9 - failures);
  return failures == 0 ? 0 : 1;
}

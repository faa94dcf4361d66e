#include <cmath>

#include "doctest.h"
#include "periwave/diagnostics.hpp"
#include "test_fixtures.hpp"

using namespace periwave;
using testfix::m1;
using testfix::telegraph;
using Expr = expr::Expr;

TEST_CASE("manufacture derives the forcing and Robin data symbolically") {
  const GridSpec g{33, 32};
  const ManufacturedProblem mp = m1(g);
  CHECK(mp.validation.pass);
  // r0 = r1 = 1 exactly for w* = e^x (2 + sin 2 pi t)
  for (int n = 0; n < 32; ++n) {
    CHECK(mp.spec.r0(0.0, n / 32.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(mp.spec.r1(1.0, n / 32.0) == doctest::Approx(1.0).epsilon(1e-13));
  }
  // f = e^x (-4 pi^2 sin - (2 + sin) - 2 pi cos)
  for (double x : {0.0, 0.5, 1.0}) {
    for (double t : {0.0, 0.3, 0.7}) {
      const double s = std::sin(2 * M_PI * t), c = std::cos(2 * M_PI * t);
      const double expected =
          std::exp(x) * (-4 * M_PI * M_PI * s - (2 + s) - 2 * M_PI * c);
      CHECK(mp.spec.f(x, t) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
  // closure: the symbolic residual of w* under the derived problem vanishes
  CHECK(residual_pde(mp.w_star, mp.spec, g) <= 1e-10);
}

TEST_CASE("manufacture rejects degenerate data") {
  const GridSpec g{33, 32};
  // constant w* with only a3: f = 1 but r0 = r1 = 0 violates (ar)
  const ManufacturedProblem flat =
      manufacture(Expr::parse("1"), Expr::parse("1"), Expr::parse("0"),
                  Expr::parse("0"), Expr::parse("1"), 1.0, g);
  CHECK(flat.spec.f(0.3, 0.1) == doctest::Approx(1.0));
  CHECK_FALSE(flat.validation.pass);

  // boundary zero of w*
  CHECK_THROWS_AS(manufacture(Expr::parse("x"), Expr::parse("1"), Expr::parse("0"),
                              Expr::parse("0"), Expr::parse("0"), 1.0, g),
                  std::domain_error);
}

TEST_CASE("time-independent manufactured problem is self-consistent") {
  const GridSpec g{33, 32};
  const ManufacturedProblem mp =
      manufacture(Expr::parse("exp(x)"), Expr::parse("1"), Expr::parse("-1"),
                  Expr::parse("0"), Expr::parse("0"), 1.0, g);
  CHECK(residual_pde(mp.w_star, mp.spec, g) <= 1e-12);
}

TEST_CASE("grid residual measures defects of non-solutions") {
  const GridSpec g{129, 128};
  const ManufacturedProblem mp = m1(g);
  SUBCASE("sampled exact solution has only differencing error") {
    CHECK(residual_pde(sample(mp.w_star, g, 1.0), mp.spec, g) <= 1e-4);
  }
  SUBCASE("zero function leaves the forcing") {
    double fmax = 0.0;
    for (int i = 1; i < g.nx - 1; ++i)
      for (int n = 0; n < g.nt; ++n)
        fmax = std::max(fmax, std::abs(mp.spec.f(i / 128.0, n / 128.0)));
    CHECK(residual_pde(GridFunction(g, 1.0), mp.spec, g) ==
          doctest::Approx(fmax).epsilon(1e-12));
  }
  SUBCASE("a perturbation grows by its image under the operator") {
    GridFunction w = sample(mp.w_star, g, 1.0);
    const Expr pert = Expr::parse("0.01*sin(2*pi*t)");
    w.values() += sample(pert, g, 1.0).values();
    const double r = residual_pde(w, mp.spec, g);
    // L(pert) = 0.01(-4 pi^2 sin) + a1 0.01 (2 pi cos): amplitude ~ 0.01*sqrt((4pi^2)^2+(2pi)^2)
    const double amp = 0.01 * std::hypot(4 * M_PI * M_PI, 2 * M_PI);
    CHECK(r >= 0.9 * amp);
    CHECK(r <= 1.1 * amp + 1e-3);
  }
}

TEST_CASE("boundary residuals") {
  const GridSpec g{257, 32};
  const ManufacturedProblem mp = m1(g);
  SUBCASE("manufactured solution satisfies both Robin conditions") {
    const auto [r0, r1] = residual_boundary(sample(mp.w_star, g, 1.0), mp.spec);
    CHECK(r0 <= 1e-8);
    CHECK(r1 <= 1e-8);
  }
  SUBCASE("constant function violates r0 = 1 by exactly one") {
    ProblemSpec sp = telegraph(-1.0);
    GridFunction w(g, 1.0);
    w.values().setConstant(1.0);
    const auto [r0, r1] = residual_boundary(w, sp);
    CHECK(r0 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r1 == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("exponential profile matches unit Robin data") {
    ProblemSpec sp = telegraph(-1.0);
    const auto [r0, r1] = residual_boundary(sample(Expr::parse("exp(x)"), g, 1.0), sp);
    CHECK(r0 <= 1e-8);
    CHECK(r1 <= 1e-8);
  }
}

TEST_CASE("kernel dimension via SVD") {
  SUBCASE("identity matrix has full rank and unit spectrum") {
    const KernelDimension kd = kernel_dimension(Eigen::MatrixXd::Identity(40, 40));
    CHECK(kd.dimension == 0);
    CHECK(kd.sigma_max == doctest::Approx(1.0));
    for (double s : kd.tail) CHECK(s == doctest::Approx(1.0));
    CHECK(kd.tail.size() == 10);
  }
  SUBCASE("non-resonant collocation operator is well conditioned") {
    const GridSpec g{33, 32};
    const KernelDimension kd = kernel_dimension(assemble_dense(telegraph(-1.0), g));
    CHECK(kd.dimension == 0);
    CHECK(kd.tail.front() / kd.sigma_max > 1e-3);
  }
  SUBCASE("resonant operator loses at least three orders of magnitude") {
    const GridSpec g{33, 32};
    const KernelDimension good = kernel_dimension(assemble_dense(telegraph(-1.0), g));
    const KernelDimension bad = kernel_dimension(assemble_dense(telegraph(0.0), g));
    const double r_good = good.tail.front() / good.sigma_max;
    const double r_bad = bad.tail.front() / bad.sigma_max;
    CHECK(r_bad <= 1e-3 * r_good);
  }
}

TEST_CASE("convergence study on the manufactured fixture") {
  const GridSpec base{33, 32};
  const ManufacturedProblem mp = m1(base);
  const ConvergenceStudy cs = convergence_study(
      mp, {GridSpec{33, 32}, GridSpec{65, 64}, GridSpec{129, 128}});
  CHECK(cs.convergent);
  CHECK(cs.errors.front() > cs.errors.back());
  for (double order : cs.orders) {
    CHECK(order >= 1.7);
    CHECK(order <= 2.3);
  }
  CHECK_THROWS_AS(convergence_study(mp, {GridSpec{33, 32}, GridSpec{65, 64}}),
                  std::invalid_argument);
}

TEST_CASE("smoothness indicator") {
  const GridSpec g{17, 64};
  SUBCASE("band-limited input reports the sentinel") {
    const auto rows = smoothness_indicator(sample(Expr::parse("sin(2*pi*t)"), g, 1.0));
    for (const auto& r : rows) CHECK(r.band_limited);
  }
  SUBCASE("triangle wave decays like k^-2") {
    GridFunction w(g, 1.0);
    for (int i = 0; i < g.nx; ++i)
      for (int n = 0; n < g.nt; ++n) {
        const double t = n / 64.0;
        w(i, n) = 1.0 - 4.0 * std::abs(t - 0.5);  // triangle, period 1
      }
    const auto rows = smoothness_indicator(w);
    for (const auto& r : rows) {
      REQUIRE_FALSE(r.band_limited);
      CHECK(r.slope == doctest::Approx(-2.0).epsilon(0.15));
    }
  }
  SUBCASE("solution of a smooth non-resonant problem decays fast") {
    ProblemSpec sp = telegraph(-1.0);
    sp.f = Expr::parse("exp(sin(2*pi*t))*(1+x)");
    const GridSpec gs{33, 64};
    const SolveResult res = solve(sp, gs);
    REQUIRE(res.converged);
    const auto rows = smoothness_indicator(res.w);
    for (const auto& r : rows)
      if (!r.band_limited) CHECK(r.slope < -4.0);
  }
  SUBCASE("power-of-two guard") {
    CHECK_THROWS_AS(smoothness_indicator(GridFunction(GridSpec{9, 12}, 1.0)),
                    std::invalid_argument);
  }
}

TEST_CASE("epsilon sweep") {
  const GridSpec g{33, 32};
  SUBCASE("eps-independent family returns identical solutions") {
    ProblemSpec base = telegraph(-1.0);
    base.f = Expr::parse("sin(2*pi*t)");
    const SweepResult sw = sweep_epsilon({base, {0.0, 0.01, 0.02}}, g);
    CHECK(sw.solutions.size() == 3);
    CHECK(sw.max_pairwise_diff <= 1e-9);
    for (const auto& row : sw.rows) CHECK(row.sup_err <= 1e-9);
  }
  SUBCASE("lower-order perturbation has Richardson-consistent derivatives") {
    ProblemSpec base = telegraph(-1.0);
    base.a1 = Expr::parse("-1+eps");
    base.f = Expr::parse("sin(2*pi*t)");
    const SweepResult sw =
        sweep_epsilon({base, {0.0, 0.005, 0.01, 0.015, 0.02}}, g);
    REQUIRE(sw.richardson.size() == 1);
    const RichardsonRow& rr = sw.richardson.front();
    CHECK(rr.eps_center == doctest::Approx(0.01));
    CHECK(rr.agreement <= 0.05);
    CHECK(sw.rows.back().sup_err > 0.0);
    // Lipschitz behavior: growth bounded by the measured derivative scale
    CHECK(sw.rows.back().sup_err <= 1.2 * sw.rows[2].deriv_est * 0.02);
  }
  SUBCASE("principal-coefficient perturbation is recorded qualitatively") {
    ProblemSpec base = telegraph(-1.0);
    base.a = Expr::parse("1+eps*x");
    base.f = Expr::parse("sin(2*pi*t)");
    const SweepResult sw =
        sweep_epsilon({base, {0.0, 0.005, 0.01, 0.015, 0.02}}, g);
    CHECK(sw.rows.size() == 5);
    for (const auto& row : sw.rows) {
      CHECK(std::isfinite(row.deriv_est));
      CHECK(std::isfinite(row.deriv_est_dt));
    }
    REQUIRE(sw.richardson.size() == 1);
    CHECK(std::isfinite(sw.richardson.front().agreement));
  }
  SUBCASE("aborts at the offending eps") {
    ProblemSpec base = telegraph(-1.0);
    base.r0 = Expr::parse("1-100*eps");  // C vanishes at eps = 0.01
    try {
      sweep_epsilon({base, {0.0, 0.01}}, g);
      FAIL("expected SweepAbort");
    } catch (const SweepAbort& e) {
      CHECK(e.eps() == doctest::Approx(0.01));
    }
    ProblemSpec res_base = telegraph(-1.0);
    res_base.a1 = Expr::parse("-1+100*eps");  // resonant at eps = 0.01
    CHECK_THROWS_AS(sweep_epsilon({res_base, {0.0, 0.01}}, g), SweepAbort);
  }
  SUBCASE("input validation") {
    ProblemSpec base = telegraph(-1.0);
    CHECK_THROWS_AS(sweep_epsilon({base, {}}, g), std::invalid_argument);
    CHECK_THROWS_AS(sweep_epsilon({base, {0.02, 0.01}}, g), std::invalid_argument);
    CHECK_THROWS_AS(sweep_epsilon({base, {-0.1}}, g), std::invalid_argument);
  }
}

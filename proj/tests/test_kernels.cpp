#include <cmath>

#include "doctest.h"
#include "periwave/kernels.hpp"
#include "test_fixtures.hpp"

using namespace periwave;
using testfix::telegraph;
using Expr = expr::Expr;

namespace {

struct Setup {
  ProblemSpec sp;
  Speed speed;
  RiemannCoeffs rc;
  Setup(ProblemSpec s, const GridSpec& g)
      : sp(std::move(s)), speed(Speed::from(sp)), rc(sp, g) {}
};

}  // namespace

TEST_CASE("zero diagonal coefficients give unit weights") {
  ProblemSpec sp = telegraph(0.0);
  const GridSpec g{65, 32};
  Setup s(sp, g);
  for (int j : {1, 2})
    for (double xi : {0.0, 0.5, 1.0})
      CHECK(compute_c(j, 0, xi, 0.5, 0.3, s.rc, s.speed, g.nx) ==
            doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("constant-coefficient closed form for c") {
  // a = 1, a1 = 1 gives b11 = b22 = 1/2 and c_1(0,1,t) = e^{1/2}.
  Setup s(telegraph(1.0), {257, 32});
  CHECK(compute_c(1, 0, 0.0, 1.0, 0.2, s.rc, s.speed, 257) ==
        doctest::Approx(std::exp(0.5)).epsilon(1e-10));
  // general endpoints: c_j^0 = exp((-1)^j (b_jj/a) (xi - x))
  ProblemSpec sp2 = telegraph(1.0);
  sp2.a = Expr::parse("2");
  Setup s2(sp2, {257, 32});
  const double b_over_a = 0.25;  // b11 = 1/2, a = 2
  for (double xi : {0.0, 0.25, 0.75}) {
    CHECK(compute_c(1, 0, xi, 1.0, 0.0, s2.rc, s2.speed, 257) ==
          doctest::Approx(std::exp(-b_over_a * (xi - 1.0))).epsilon(1e-10));
    CHECK(compute_c(2, 0, xi, 0.0, 0.0, s2.rc, s2.speed, 257) ==
          doctest::Approx(std::exp(b_over_a * xi)).epsilon(1e-10));
  }
}

TEST_CASE("the level weight collapses when a is stationary") {
  Setup s(telegraph(1.0), {65, 32});
  for (int l : {0, 1, 2, 3}) {
    const double c = compute_c(1, l, 0.0, 1.0, 0.1, s.rc, s.speed, 65);
    CHECK(std::abs(c - compute_c(1, 0, 0.0, 1.0, 0.1, s.rc, s.speed, 65)) <= 1e-14);
  }
  // and differs when d_t a != 0
  // a with period 1 and mean 2: the boundary crossing takes about half a
  // period, so the level integral does not self-cancel.
  ProblemSpec sp = telegraph(1.0);
  sp.a = Expr::parse("2+0.4*sin(2*pi*t)");
  Setup st(sp, {65, 32});
  const double c0 = compute_c(1, 0, 0.0, 1.0, 0.1, st.rc, st.speed, 65);
  const double c2 = compute_c(1, 2, 0.0, 1.0, 0.1, st.rc, st.speed, 65);
  CHECK(std::abs(c0 - c2) > 1e-4);
}

TEST_CASE("compute_d examples") {
  const GridSpec g{65, 32};
  Setup unit(telegraph(0.0), g);
  CHECK(compute_d(1, 0.25, 0.75, 0.1, unit.rc, unit.speed, g.nx) ==
        doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(compute_d(2, 0.75, 0.25, 0.1, unit.rc, unit.speed, g.nx) ==
        doctest::Approx(1.0).epsilon(1e-14));

  ProblemSpec half = telegraph(0.0);
  half.a = Expr::parse("2");
  Setup s2(half, g);
  CHECK(compute_d(1, 0.0, 1.0, 0.0, s2.rc, s2.speed, g.nx) ==
        doctest::Approx(-0.5).epsilon(1e-14));

  Setup damped(telegraph(1.0), {257, 32});
  CHECK(compute_d(1, 0.0, 1.0, 0.4, damped.rc, damped.speed, 257) ==
        doctest::Approx(-std::exp(0.5)).epsilon(1e-10));
}

TEST_CASE("cocycle property along shared characteristics") {
  // c_j(xi2, x, t) = c_j(xi2, xi1, tau_j(xi1, x, t)) * c_j(xi1, x, t)
  ProblemSpec sp;
  sp.a = Expr::parse("1+0.3*x+0.2*sin(2*pi*t)*(0.5+0.5*x)");
  sp.a1 = Expr::parse("0.5+0.25*cos(2*pi*t)");
  sp.a2 = Expr::parse("0.3*x");
  sp.r0 = Expr::parse("1");
  sp.r1 = Expr::parse("1");
  const GridSpec g{257, 32};
  Setup s(sp, g);
  for (int j : {1, 2}) {
    for (double x : {0.25, 1.0}) {
      const TracedCurve curve = trace(j, x, 0.3, s.speed, g.nx);
      for (auto [m1, m2] : {std::pair{64, 0}, std::pair{128, 32}, std::pair{192, 96}}) {
        const double xi1 = m1 / 256.0, xi2 = m2 / 256.0;
        const double whole = compute_c(j, 0, xi2, x, 0.3, s.rc, s.speed, g.nx);
        const double first = compute_c(j, 0, xi1, x, 0.3, s.rc, s.speed, g.nx);
        const double second =
            compute_c(j, 0, xi2, xi1, curve.tau[m1], s.rc, s.speed, g.nx);
        CHECK(std::abs(whole - second * first) <= 1e-8 * std::abs(whole));
      }
    }
  }
}

TEST_CASE("bulk kernel field invariants") {
  ProblemSpec sp;
  sp.a = Expr::parse("1+0.1*sin(2*pi*t)");
  sp.a1 = Expr::parse("-0.5");
  sp.r0 = Expr::parse("1");
  sp.r1 = Expr::parse("1");
  const GridSpec g{33, 32};
  const CharField cf(sp, g);
  const RiemannCoeffs rc(sp, g);
  const KernelField kf(cf, rc, 2);

  for (int i : {0, 10, 32}) {
    for (int n : {0, 9, 31}) {
      CHECK(kf.c(1, 0, i, i, n) == 1.0);  // c at the base point, exactly
      CHECK(kf.c(2, 2, i, i, n) == 1.0);
      for (int m = 0; m <= i; ++m) {
        CHECK(kf.c(1, 1, m, i, n) > 0.0);
        CHECK(kf.d(1, m, i, n) < 0.0);
      }
      for (int m = i; m < 33; ++m) {
        CHECK(kf.c(2, 1, m, i, n) > 0.0);
        CHECK(kf.d(2, m, i, n) > 0.0);
      }
    }
  }

  // consistency with the on-demand point API (same nodes, same quadrature)
  const Speed speed = Speed::from(sp);
  for (int i : {8, 24}) {
    for (int n : {3, 17}) {
      for (int m = 0; m <= i; m += 4) {
        const double ref = compute_c(1, 1, m / 32.0, i / 32.0, n / 32.0, rc, speed, 33);
        CHECK(kf.c(1, 1, m, i, n) == doctest::Approx(ref).epsilon(1e-12));
      }
    }
  }
  // boundary endpoint weights match the triangles
  CHECK(kf.c_far(1)(20, 5) == doctest::Approx(kf.c(1, 0, 0, 20, 5)).epsilon(1e-15));
  CHECK(kf.c_far(2)(20, 5) == doctest::Approx(kf.c(2, 0, 32, 20, 5)).epsilon(1e-15));
}

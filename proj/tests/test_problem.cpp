#include <cmath>

#include "doctest.h"
#include "periwave/problem.hpp"
#include "periwave/quadrature.hpp"
#include "test_fixtures.hpp"

using namespace periwave;
using testfix::telegraph;
using Expr = expr::Expr;

TEST_CASE("grid invariants") {
  CHECK_THROWS_AS((GridSpec{5, 32}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((GridSpec{33, 4}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((GridSpec{33, 31}).validate(), std::invalid_argument);
  CHECK_NOTHROW((GridSpec{9, 8}).validate());
}

TEST_CASE("validate accepts the constant problem") {
  ProblemSpec sp = telegraph();
  const ValidationReport rep = validate(sp, {33, 32});
  CHECK(rep.pass);
  CHECK(rep.C == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rep.min_a == doctest::Approx(1.0));
  CHECK(rep.violations.empty());
}

TEST_CASE("zero-mean Robin datum fails the nondegeneracy test") {
  ProblemSpec sp = telegraph();
  sp.r0 = Expr::parse("sin(2*pi*t)");
  const ValidationReport rep = validate(sp, {33, 32});
  CHECK_FALSE(rep.pass);
  CHECK(std::abs(rep.C) < 1e-12);
  bool found = false;
  for (const auto& v : rep.violations)
    if (v.find("nondegeneracy") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("negative wave speed fails positivity") {
  ProblemSpec sp = telegraph();
  sp.a = Expr::parse("-1");
  const ValidationReport rep = validate(sp, {33, 32});
  CHECK_FALSE(rep.pass);
  bool found = false;
  for (const auto& v : rep.violations)
    if (v.find("positivity") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("non-periodic coefficients are flagged") {
  ProblemSpec sp = telegraph();
  sp.f = Expr::parse("t");
  const ValidationReport rep = validate(sp, {33, 32});
  CHECK_FALSE(rep.pass);
  CHECK(rep.periodicity_defect.at("f") > 0.1);

  ProblemSpec sp2 = telegraph();
  sp2.a = Expr::parse("2+sin(2*pi*t)");
  sp2.T = 0.75;  // not a period of the coefficient
  CHECK_FALSE(validate(sp2, {33, 32}).pass);
}

TEST_CASE("validate is deterministic") {
  ProblemSpec sp = telegraph();
  sp.a = Expr::parse("1+0.1*sin(2*pi*t)");
  const ValidationReport a = validate(sp, {33, 32});
  const ValidationReport b = validate(sp, {33, 32});
  CHECK(a.pass == b.pass);
  CHECK(a.C == b.C);
  CHECK(a.min_a == b.min_a);
  CHECK(a.periodicity_defect == b.periodicity_defect);
}

TEST_CASE("compute_C examples") {
  ProblemSpec sp = telegraph();
  sp.T = 2.0;
  CHECK(compute_C(sp, {33, 32}) == doctest::Approx(2.0).epsilon(1e-14));

  ProblemSpec sq = telegraph();
  sq.r0 = Expr::parse("cos(2*pi*t)^2");
  CHECK(compute_C(sq, {33, 32}) == doctest::Approx(0.5).epsilon(1e-13));

  ProblemSpec s2 = telegraph();
  s2.a = Expr::parse("2");
  CHECK(compute_C(s2, {33, 32}) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("periodic trapezoid is exact for resolved trigonometric polynomials") {
  ProblemSpec sp = telegraph();
  sp.r0 = Expr::parse("1+cos(2*pi*t)^2-0.25*sin(2*pi*3*t)");
  // degree 6 < nt/2 for nt = 16
  const double c16 = compute_C(sp, {33, 16});
  const double c64 = compute_C(sp, {33, 64});
  CHECK(c16 == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(std::abs(c16 - c64) < 1e-12);
}

TEST_CASE("quadrature error at least quarters under doubling for C^2 integrands") {
  // |sin(pi t)|^3 is C^2 and T-periodic with T = 1; exact integral 4/(3 pi).
  auto f = [](double t) { return std::pow(std::abs(std::sin(M_PI * t)), 3.0); };
  const double exact = 4.0 / (3.0 * M_PI);
  const double e1 = std::abs(quadrature::periodic_trapezoid(f, 1.0, 32) - exact);
  const double e2 = std::abs(quadrature::periodic_trapezoid(f, 1.0, 64) - exact);
  const double e3 = std::abs(quadrature::periodic_trapezoid(f, 1.0, 128) - exact);
  CHECK(e1 / e2 >= 3.9);
  CHECK(e2 / e3 >= 3.9);
}

TEST_CASE("endpoint swap relabels x -> 1-x and flips the Robin data") {
  ProblemSpec sp = telegraph();
  sp.a = Expr::parse("1+x");
  sp.r0 = Expr::parse("0");  // degenerate at the left endpoint
  sp.r1 = Expr::parse("1");
  CHECK_FALSE(validate(sp, {33, 32}).pass);

  const ProblemSpec sw = swap_endpoints(sp);
  const ValidationReport rep = validate(sw, {33, 32});
  CHECK(rep.pass);
  // C_swapped = int a(1,t) * (-r1(t)) dt = -2
  CHECK(rep.C == doctest::Approx(-2.0).epsilon(1e-13));
  CHECK(sw.a(0.25, 0.0) == doctest::Approx(1.75));
}

TEST_CASE("sampling an expression fills the tensor grid") {
  const GridFunction g = sample(Expr::parse("x*t"), {33, 32}, 1.0);
  CHECK(g(16, 8) == doctest::Approx(0.5 * 0.25));
  CHECK(g(16, 8 + 32) == g(16, 8));  // periodic index wrap
  CHECK(g(16, -24) == g(16, 8));
}

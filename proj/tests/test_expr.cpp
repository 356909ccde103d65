#include <doctest.h>

#include <cmath>

#include "stdg/errors.hpp"
#include "stdg/expr.hpp"

using namespace stdg;

TEST_CASE("expression parsing and evaluation") {
  Expr e = Expr::parse("sin(pi*x)*sin(pi*y) + t^2/2 - 3");
  CHECK(e(0.5, 0.5, 2.0) == doctest::Approx(1.0 + 2.0 - 3.0));
  CHECK(Expr::parse("-x^2")(3.0, 0, 0) == doctest::Approx(-9.0));
  CHECK(Expr::parse("2*(x+y)*t")(1.0, 2.0, 0.5) == doctest::Approx(3.0));
  CHECK(Expr::parse("exp(0)")(0, 0, 0) == doctest::Approx(1.0));
  CHECK(Expr::parse("sqrt(t)")(0, 0, 4.0) == doctest::Approx(2.0));
}

TEST_CASE("symbolic derivatives") {
  Expr e = Expr::parse("x^2*y + sin(pi*t)");
  Expr ex = e.diff('x');
  Expr et = e.diff('t');
  CHECK(ex(3.0, 2.0, 0.0) == doctest::Approx(12.0));
  CHECK(et(0.0, 0.0, 0.5) == doctest::Approx(M_PI * std::cos(M_PI * 0.5)));
  CHECK(e.diff('y')(5.0, 1.0, 0.0) == doctest::Approx(25.0));
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(Expr::parse("x +"), ParseError);
  CHECK_THROWS_AS(Expr::parse("foo(x)"), ParseError);
  CHECK_THROWS_AS(Expr::parse("(x"), ParseError);
  CHECK_THROWS_AS(Expr::parse("x y"), ParseError);
}

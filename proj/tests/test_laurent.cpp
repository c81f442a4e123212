#include <random>

#include "doctest.h"
#include "qtw/laurent.hpp"

using qtw::LaurentScalar;
using qtw::Rational;

namespace {

LaurentScalar random_scalar(std::mt19937& rng, bool with_den) {
  std::uniform_int_distribution<int> exp(-3, 3), coeff(-4, 4), den(0, 2);
  LaurentScalar s;
  for (int i = 0; i < 3; ++i) s += LaurentScalar::monomial(exp(rng), Rational(coeff(rng), 1 + (i % 2)));
  return with_den ? s.div_q_int2(den(rng)) : s;
}

}  // namespace

TEST_CASE("laurent product and rendering") {
  const LaurentScalar q = LaurentScalar::q();
  const LaurentScalar qi = LaurentScalar::monomial(-1);
  CHECK((q + qi) * (q - qi) == LaurentScalar::monomial(2) - LaurentScalar::monomial(-2));
  CHECK(((q + qi) * (q - qi)).str() == "-q^-2 + q^2");
  CHECK(LaurentScalar(0).str() == "0");
  CHECK((LaurentScalar::monomial(1, Rational(3, 2)) - 2).str() == "-2 + 3/2*q");
  CHECK(LaurentScalar::q_diff().str() == "-q^-1 + q");
}

TEST_CASE("laurent evaluation and bar") {
  const LaurentScalar s = LaurentScalar::monomial(2) - LaurentScalar::monomial(-1, 3) + 5;
  CHECK(s.eval(2) == Rational(4) - Rational(3, 2) + 5);
  CHECK(s.eval(Rational(5, 7)) == Rational(25, 49) - Rational(21, 5) + 5);
  CHECK(s.bar() == LaurentScalar::monomial(-2) - LaurentScalar::monomial(1, 3) + 5);
  CHECK_THROWS_AS((void)LaurentScalar::q().eval(0), std::domain_error);
  CHECK(s.specialize(2).is_constant());
}

TEST_CASE("localization at q + q^-1 is canonical") {
  const LaurentScalar two = LaurentScalar::q_int2();
  CHECK(two.div_q_int2() == LaurentScalar(1));
  CHECK((two * two).div_q_int2(3) == LaurentScalar(1).div_q_int2());
  const LaurentScalar p = LaurentScalar(1).div_q_int2();
  CHECK(p.denominator_power() == 1);
  CHECK(p * two == LaurentScalar(1));
  CHECK(p.eval(1) == Rational(1, 2));
  CHECK(p.str() == "(1)/(q + q^-1)");
  auto inv = (LaurentScalar::monomial(3, 2) * two).inverse();
  REQUIRE(inv);
  CHECK(*inv * LaurentScalar::monomial(3, 2) * two == LaurentScalar(1));
  CHECK_FALSE((LaurentScalar::q() + 1).inverse());
}

TEST_CASE("ring axioms on random scalars") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_scalar(rng, true), b = random_scalar(rng, true), c = random_scalar(rng, true);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a - a).is_zero());
    CHECK((a * b).bar() == a.bar() * b.bar());
    for (const Rational q0 : {Rational(2), Rational(3, 2), Rational(5, 7)}) {
      CHECK((a * b + c).eval(q0) == a.eval(q0) * b.eval(q0) + c.eval(q0));
    }
  }
}

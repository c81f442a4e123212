#include "doctest.h"
#include "qtw/ratfunc.hpp"

using qtw::LaurentScalar;
using qtw::RatFunc;
using qtw::Rational;

TEST_CASE("rational functions round-trip through the Laurent ring") {
  const LaurentScalar s = (LaurentScalar::monomial(-2, 3) + LaurentScalar::q()).div_q_int2(2);
  const RatFunc r(s);
  auto back = r.to_laurent();
  REQUIRE(back);
  CHECK(*back == s);
  const RatFunc one(LaurentScalar(1));
  const RatFunc qp1(LaurentScalar::q() + 1);
  CHECK_FALSE((one / qp1).to_laurent());
  CHECK(((one / qp1) * qp1) == one);
  CHECK((one / qp1).eval(3) == Rational(1, 4));
}

TEST_CASE("sparse rref finds rank and kernel over Q(q)") {
  // Rows: [1, q, 0], [q, q^2, 1], [0, 0, q+1]  -> rank 2, kernel (-q, 1, 0).
  std::vector<qtw::SparseRow> rows(3);
  rows[0][0] = LaurentScalar(1);
  rows[0][1] = LaurentScalar::q();
  rows[1][0] = LaurentScalar::q();
  rows[1][1] = LaurentScalar::monomial(2);
  rows[1][2] = LaurentScalar(1);
  rows[2][2] = LaurentScalar::q() + 1;
  const auto piv = qtw::rref(rows);
  REQUIRE(piv.size() == 2);
  CHECK(piv[0] == 0);
  CHECK(piv[1] == 2);
  CHECK(rows[0].at(1) == RatFunc(LaurentScalar::q()));
  CHECK(rows[1].size() == 1);
}

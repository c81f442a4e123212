#include <random>

#include "doctest.h"
#include "qtw/expr.hpp"
#include "qtw/twistor.hpp"

using namespace qtw;
using namespace qtw::expr;

namespace {

const tw::TwistorAlgebra& algebra() {
  static const tw::TwistorAlgebra alg({1, true, std::nullopt, 0});
  return alg;
}

class AstGen {
 public:
  explicit AstGen(unsigned seed) : rng_(seed) {}

  Expr any(int depth) {
    if (depth == 0 || roll(3) == 0) return atom();
    Expr e;
    switch (roll(5)) {
      case 0: e.kind = Expr::Kind::Neg; e.kids = {any(depth - 1)}; return e;
      case 1: e.kind = Expr::Kind::Add; break;
      case 2: e.kind = Expr::Kind::Sub; break;
      case 3: e.kind = Expr::Kind::Mul; break;
      default: e.kind = Expr::Kind::D; e.kids = {any(depth - 1)}; return e;
    }
    e.kids = {any(depth - 1), any(depth - 1)};
    return e;
  }

 private:
  int roll(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  Expr atom() {
    Expr e;
    switch (roll(3)) {
      case 0:
        e.kind = Expr::Kind::Number;
        e.value = Rational(roll(20), 1 + roll(6));
        e.value.canonicalize();
        return e;
      case 1:
        e.kind = Expr::Kind::QPower;
        e.exponent = roll(9) - 4;
        return e;
      default: {
        e.kind = Expr::Kind::Gen;
        const auto& reg = algebra().reg();
        const auto& fam = reg.families()[static_cast<std::size_t>(roll(static_cast<int>(reg.families().size())))];
        e.name = fam.name;
        for (const auto& s : fam.spaces) e.indices.push_back(1 + roll(s.dim));
        return e;
      }
    }
  }

  std::mt19937 rng_;
};

std::size_t error_column(std::string_view src) {
  try {
    parse(src, algebra().reg());
  } catch (const ParseError& e) {
    return e.column();
  }
  return 0;
}

std::string error_message(std::string_view src) {
  try {
    parse(src, algebra().reg());
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("render then parse is the identity on random trees") {
  AstGen gen(20261019);
  for (int trial = 0; trial < 500; ++trial) {
    const Expr e = gen.any(5);
    const std::string text = render(e);
    CAPTURE(text);
    CHECK(parse(text, algebra().reg()) == e);
    CHECK(render(parse_unchecked(text)) == text);
  }
}

TEST_CASE("precedence, associativity and whitespace") {
  CHECK(render(parse_unchecked("a - (b - c)")) == "a - (b - c)");
  CHECK(render(parse_unchecked("(a - b) - c")) == "a - b - c");
  CHECK(render(parse_unchecked("a * (b + c)")) == "a * (b + c)");
  CHECK(render(parse_unchecked("(a * b) * c")) == "a * b * c");
  CHECK(render(parse_unchecked("-(a*b)")) == "-(a * b)");
  CHECK(render(parse_unchecked("  q ^ - 2*x [ 1 , 2 ]")) == "q^-2 * x[1,2]");
  CHECK(render(parse_unchecked("6/8")) == "3/4");
}

TEST_CASE("syntax and validation errors carry a column") {
  CHECK(error_column("z[1,1] +") == 9);
  CHECK(error_column("(z[1,1]") == 8);
  CHECK(error_column("z[1,1] )") == 8);
  CHECK(error_column("1/0") == 3);
  CHECK(error_column("q^x") == 3);
  CHECK(error_message("w[1,1]").find("unknown generator family 'w'") != std::string::npos);
  CHECK(error_message("z[1,5]").find("index out of range") != std::string::npos);
  CHECK(error_message("z[0,1]").find("index out of range") != std::string::npos);
  CHECK(error_message("z[1]").find("takes 2 indices") != std::string::npos);
  CHECK(error_message("z[1,1]^2").find("malformed exponent") != std::string::npos);
  CHECK(error_message("").find("unexpected end of input") != std::string::npos);
}

TEST_CASE("expressions evaluate in the algebra") {
  const auto& alg = algebra();
  const auto& rs = alg.forms();
  auto nf = [&](std::string_view src) { return rs.normal_form(to_poly(parse(src, alg.reg()), rs)); };
  CHECK(nf("d(z[1,1]) - dz[1,1]").is_zero());
  CHECK(nf("d(d(z[1,2] * z[2,3]))").is_zero());
  CHECK(nf("X[1] * Xinv[1] - 1").is_zero());
  CHECK(nf("dz[1,1] * dz[1,1]").is_zero());
  CHECK(nf("q^2 * q^-2 - 1").is_zero());
  // One-based indices map to the zero-based generator.
  CHECK(nf("z[2,4]") == nc::NcPoly::gen(alg.z(1, 3)));
  CHECK(nf("3/2 * z[1,1] - z[1,1] * 3/2").is_zero());
}

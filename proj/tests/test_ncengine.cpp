#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "qtw/rewrite.hpp"
#include "qtw/twistor.hpp"

using namespace qtw;
using namespace qtw::nc;

namespace {

std::shared_ptr<Registry> twistor_registry() {
  auto reg = std::make_shared<Registry>();
  reg->add_family({"z", {rmx::greek(), rmx::latin()}, 0, 10, 1});
  reg->add_family({"dz", {rmx::greek(), rmx::latin()}, 1, 100, 1});
  reg->declare_differential("z", "dz");
  reg->declare_closed("dz");
  return reg;
}

RewriteSystem forms_system(const tw::Structure& s, const std::shared_ptr<Registry>& reg) {
  const tw::RelationBuilder rb{s, *reg};
  std::vector<NcPoly> rels = rb.zz();
  for (auto& r : rb.z_dz()) rels.push_back(r);
  for (auto& r : rb.dz_dz()) rels.push_back(r);
  RewriteSystem rs(reg);
  rs.compile(rels);
  return rs;
}

std::size_t rules_of_length(const RewriteSystem& rs, std::size_t n) {
  std::size_t c = 0;
  for (const auto& [lhs, rhs] : rs.rules()) c += lhs.size() == n;
  return c;
}

std::vector<Gen> all_gens(const Registry& reg) {
  std::vector<Gen> g(reg.size());
  for (Gen i = 0; i < g.size(); ++i) g[i] = i;
  return g;
}

}  // namespace

TEST_CASE("quantum plane x y = q y x") {
  auto reg = std::make_shared<Registry>();
  reg->add_family({"x", {}, 0, 0, 1});
  reg->add_family({"y", {}, 0, 1, 1});
  const Gen x = reg->gen("x", {}), y = reg->gen("y", {});
  RewriteSystem rs(reg);
  rs.add_relation(NcPoly::word({y, x}) - NcPoly::word({x, y}, LaurentScalar::monomial(-1)));
  CHECK(check_local_confluence(rs).confluent());
  // y^2 x = q^-2 x y^2
  CHECK(rs.normal_form(Word{y, y, x}) == NcPoly::word({x, y, y}, LaurentScalar::monomial(-2)));
  CHECK(rs.is_irreducible({x, x, y, y}));
  CHECK_FALSE(rs.is_irreducible({y, x}));
}

TEST_CASE("empty system leaves every word irreducible") {
  auto reg = twistor_registry();
  RewriteSystem rs(reg);
  rs.compile({});
  CHECK(rs.rules().empty());
  CHECK(check_local_confluence(rs).confluent());
  const Word w{reg->gen("z", {1, 3}), reg->gen("z", {0, 0})};
  CHECK(rs.normal_form(w) == NcPoly::word(w));
}

TEST_CASE("z z exchange: rank matches a numeric oracle at q = 2") {
  const auto s = tw::Structure::build();
  auto reg = twistor_registry();
  const tw::RelationBuilder rb{s, *reg};
  RewriteSystem rs(reg);
  rs.compile(rb.zz());
  CHECK(rules_of_length(rs, 2) == 28);
  CHECK(64 - rules_of_length(rs, 2) == 36);

  // R_G (z (x) z) = (z (x) z) R_L with both R written from matrix units.
  const Rational q = 2;
  const auto rg = oracle::glq(2, q), rl = oracle::glq(4, q);
  auto word = [](int mu, int a, int nu, int b) { return (mu * 4 + a) * 8 + nu * 4 + b; };
  oracle::Mat m;
  for (int al = 0; al < 2; ++al)
    for (int be = 0; be < 2; ++be)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          std::vector<Rational> row(64);
          for (int mu = 0; mu < 2; ++mu)
            for (int nu = 0; nu < 2; ++nu) row[word(mu, c, nu, d)] += rg[al * 2 + be][mu * 2 + nu];
          for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) row[word(al, a, be, b)] -= rl[a * 4 + b][c * 4 + d];
          m.push_back(std::move(row));
        }
  CHECK(oracle::rank(m) == 28);
}

TEST_CASE("RTT for GL_q(2) is confluent with the classical exchange coefficients") {
  auto rtt = build_rtt_system(2);
  CHECK(rtt.confluence.confluent());
  CHECK(rules_of_length(rtt.rs, 2) == 6);
  const auto& reg = rtt.rs.registry();
  const Gen t11 = reg.gen("T", {0, 0}), t12 = reg.gen("T", {0, 1});
  // T12 T11 = q^-1 T11 T12 (or the reverse orientation).
  const NcPoly nf = rtt.rs.normal_form(Word{t12, t11});
  const NcPoly nf2 = rtt.rs.normal_form(Word{t11, t12});
  const bool ok = nf == NcPoly::word({t11, t12}, LaurentScalar::monomial(-1)) ||
                  nf2 == NcPoly::word({t12, t11}, LaurentScalar::monomial(1)) ||
                  nf == NcPoly::word({t11, t12}, LaurentScalar::monomial(1)) ||
                  nf2 == NcPoly::word({t12, t11}, LaurentScalar::monomial(-1));
  CHECK(ok);
  // At q = 1 every rule is a plain swap of the two generators.
  const auto classical = rtt.rs.specialized(1);
  for (const auto& [lhs, rhs] : classical.rules()) {
    REQUIRE(rhs.size() == 1);
    CHECK(rhs.terms().begin()->second == LaurentScalar(1));
  }
}

TEST_CASE("forms relations are confluent") {
  const auto s = tw::Structure::build();
  auto reg = twistor_registry();
  const auto rs = forms_system(s, reg);
  const auto rep = check_local_confluence(rs);
  CHECK(rep.confluent());
  CHECK(rep.overlaps_checked > 0);
}

TEST_CASE("confluence check reports an unresolved overlap") {
  // x x -> y: the overlap x x x resolves to y x and x y.
  auto reg = std::make_shared<Registry>();
  reg->add_family({"y", {}, 0, 0, 1});
  reg->add_family({"x", {}, 0, 1, 1});
  const Gen x = reg->gen("x", {}), y = reg->gen("y", {});
  RewriteSystem rs(reg);
  rs.add_rule({x, x}, NcPoly::gen(y));
  const auto rep = check_local_confluence(rs);
  REQUIRE(rep.mismatches.size() == 1);
  CHECK(rep.mismatches[0].word == Word{x, x, x});
  CHECK(rep.mismatches[0].difference.size() == 2);
}

TEST_CASE("normal forms are sound, strategy independent and parity preserving") {
  const auto s = tw::Structure::build();
  auto reg = twistor_registry();
  const auto rs = forms_system(s, reg);
  std::mt19937 rng(20261019);
  const auto gens = all_gens(*reg);
  for (int trial = 0; trial < 100; ++trial) {
    const NcPoly p = oracle::random_poly(rng, gens, 4, 4);
    const NcPoly left = rs.normal_form(p, Strategy::Leftmost);
    CHECK(left == rs.normal_form(p, Strategy::Rightmost));
    // Idempotent and every surviving word irreducible.
    CHECK(rs.normal_form(left) == left);
    for (const auto& [w, c] : left.terms()) CHECK(rs.is_irreducible(w));
    // p - nf(p) lies in the ideal: it reduces to zero.
    CHECK(rs.reduces_to_zero(p - left));
    // Every rule preserves parity, so homogeneous input stays homogeneous.
    if (p.size() == 1) {
      const int parity = reg->parity(p.terms().begin()->first);
      for (const auto& [w, c] : left.terms()) CHECK(reg->parity(w) == parity);
    }
  }
}

TEST_CASE("exterior derivative squares to zero") {
  const auto s = tw::Structure::build();
  auto reg = twistor_registry();
  const auto rs = forms_system(s, reg);
  std::mt19937 rng(7);
  std::vector<Gen> zs;
  for (int al = 0; al < 2; ++al)
    for (int a = 0; a < 4; ++a) zs.push_back(reg->gen("z", {al, a}));
  for (int trial = 0; trial < 20; ++trial) {
    const NcPoly p = oracle::random_poly(rng, zs, 3, 3);
    CHECK(exterior_d(exterior_d(p, rs), rs).is_zero());
  }
  // d is compatible with the relations: d of a relation lies in the ideal.
  const tw::RelationBuilder rb{s, *reg};
  for (const auto& r : rb.zz()) CHECK(exterior_d(r, rs).is_zero());
}

TEST_CASE("adjoin_inverse checks q-centrality and installs the exchange") {
  auto reg = std::make_shared<Registry>();
  reg->add_family({"x", {}, 0, 0, 1});
  reg->add_family({"g", {}, 0, 10, 1});
  reg->add_family({"h", {}, 0, 20, 1});
  const Gen x = reg->gen("x", {}), g = reg->gen("g", {}), h = reg->gen("h", {});
  RewriteSystem rs(reg);
  // g x = q^2 x g, h x = x h, h g = g h.
  rs.add_relation(NcPoly::word({g, x}) - NcPoly::word({x, g}, LaurentScalar::monomial(2)));
  rs.add_relation(NcPoly::word({h, x}) - NcPoly::word({x, h}));
  rs.add_relation(NcPoly::word({h, g}) - NcPoly::word({g, h}));

  SUBCASE("wrong weight names the family") {
    try {
      adjoin_inverse(rs, "x", "xinv", {{"g", 0}, {"h", 0}}, 5);
      FAIL("expected CompileError");
    } catch (const CompileError& e) {
      CHECK(std::string(e.what()).find("'g'") != std::string::npos);
    }
  }
  SUBCASE("correct weights give x^-1 g = q^-m g x^-1") {
    const auto inv = adjoin_inverse(rs, "x", "xinv", {{"g", -2}, {"h", 0}}, 5);
    const Gen xi = inv.registry().gen("xinv", {});
    CHECK(inv.normal_form(Word{x, xi}) == NcPoly(1));
    CHECK(inv.normal_form(Word{xi, x}) == NcPoly(1));
    const NcPoly lhs = inv.normal_form(Word{xi, g});
    const NcPoly rhs = inv.normal_form(Word{g, xi});
    CHECK((lhs - LaurentScalar::monomial(2) * rhs).is_zero());
  }
  SUBCASE("inverse next to an unweighted family is a logic error") {
    const auto inv = adjoin_inverse(rs, "x", "xinv", {{"g", -2}}, 5);
    const Gen xi = inv.registry().gen("xinv", {});
    CHECK_THROWS_AS(inv.normal_form(Word{h, xi}), std::logic_error);
  }
}

TEST_CASE("Xinv and dz exchange with weight q^-2 in the twistor algebra") {
  const tw::TwistorAlgebra alg({1, true, std::nullopt, 0});
  const auto& rs = alg.forms();
  for (int al = 0; al < 2; ++al)
    for (int a = 0; a < 4; ++a) {
      const NcPoly lhs = rs.normal_form(Word{alg.xinv(0), alg.dz(al, a)});
      const NcPoly rhs = rs.normal_form(Word{alg.dz(al, a), alg.xinv(0)});
      CHECK((lhs - LaurentScalar::monomial(-2) * rhs).is_zero());
    }
}

TEST_CASE("rule validation and step limit") {
  auto reg = std::make_shared<Registry>();
  reg->add_family({"x", {}, 0, 0, 1});
  reg->add_family({"y", {}, 0, 1, 1});
  const Gen x = reg->gen("x", {}), y = reg->gen("y", {});
  RewriteSystem rs(reg);
  CHECK_THROWS_AS(rs.add_rule({x, y}, NcPoly::word({y, x})), CompileError);
  rs.add_rule({y, x}, NcPoly::word({x, y}));
  CHECK_THROWS_AS(rs.add_rule({y, x}, NcPoly::word({x, y}, 2)), CompileError);
  CHECK_THROWS_AS(reg->family_id("nope"), std::out_of_range);

  rs.set_step_limit(3);
  CHECK_THROWS_AS(rs.normal_form(Word{y, y, y, x, x, x}), StepLimitExceeded);
}

TEST_CASE("normal forms commute with specialization") {
  const auto s = tw::Structure::build();
  auto reg = twistor_registry();
  const auto rs = forms_system(s, reg);
  std::mt19937 rng(11);
  const auto gens = all_gens(*reg);
  for (const Rational q0 : {Rational(2), Rational(3, 2), Rational(5, 7)}) {
    const auto spec = rs.specialized(q0);
    for (int trial = 0; trial < 20; ++trial) {
      const NcPoly p = oracle::random_poly(rng, gens, 3, 3);
      CHECK(spec.normal_form(p.specialized(q0)) == rs.normal_form(p).specialized(q0));
    }
  }
}

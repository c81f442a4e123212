#include "doctest.h"
#include "qtw/instantons.hpp"
#include "qtw/twistor.hpp"

using namespace qtw;
using namespace qtw::tw;

namespace {

const TwistorAlgebra& generic_algebra() {
  static const TwistorAlgebra alg({1, true, std::nullopt, 0});
  return alg;
}

std::size_t count_nonzero(const PolyTensor& t) {
  std::size_t n = 0;
  for (const auto& e : t.data()) n += !e.is_zero();
  return n;
}

}  // namespace

TEST_CASE("y is q-antisymmetric and degenerates to the classical bivector") {
  const TwistorAlgebra classical({1, true, Rational(1), 0});
  const auto& y = classical.y();
  const auto& rs = classical.forms();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      // Commutative oracle: y_ab = z^1_a z^2_b - z^2_a z^1_b up to the Greek epsilon normalization.
      const NcPoly bivector = rs.normal_form(NcPoly::word({classical.z(0, a), classical.z(1, b)}) -
                                             NcPoly::word({classical.z(1, a), classical.z(0, b)}));
      const NcPoly diff = rs.normal_form(y({a, b}) + bivector);
      const NcPoly sum = rs.normal_form(y({a, b}) - bivector);
      CHECK((diff.is_zero() || sum.is_zero()));
      CHECK(rs.normal_form(y({a, b}) + y({b, a})).is_zero());
    }
}

TEST_CASE("y spans six independent entries and is isotropic") {
  const auto& alg = generic_algebra();
  const auto& y = alg.y();
  CHECK(y.data().size() - nc::linear_relations(y.data()).size() == 6);
  for (int a = 0; a < 4; ++a) CHECK(y({a, a}).is_zero());

  // P+ annihilates y.
  const auto& pp = alg.p_plus();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      NcPoly r;
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d)
          if (!pp({d, c, b, a}).is_zero()) r += pp({d, c, b, a}) * y({c, d});
      CHECK(alg.forms().normal_form(r).is_zero());
    }
}

TEST_CASE("eps_q contracted with z z z vanishes") {
  const auto& alg = generic_algebra();
  const RelationBuilder rb{alg.structure(), alg.reg()};
  const auto rels = rb.eps_zzz();
  CHECK(rels.size() == 32);
  for (const auto& r : rels) CHECK(alg.forms().reduces_to_zero(r));
}

TEST_CASE("commuting b is inconsistent with the composite X for every weight") {
  const auto scan = scan_commuting_b();
  REQUIRE(scan.size() == 4);
  for (const auto& r : scan) {
    CAPTURE(r.s);
    CHECK_FALSE(r.holds());
  }
}

TEST_CASE("b sector from the two-twistor realization") {
  const auto& alg = generic_algebra();
  const auto& der = alg.derivation();
  CHECK(der.forms_confluence.confluent());
  CHECK(der.weyl_confluence.confluent());
  CHECK(der.bb_relation_count > 0);
  // The derived swap factor is -q^{+-1} and reduces to -1 classically.
  CHECK(der.swap_factor.eval(1) == -1);
  CHECK((der.swap_factor == LaurentScalar::monomial(1, -1) || der.swap_factor == LaurentScalar::monomial(-1, -1)));
  CHECK(alg.isotropy(0).is_zero());
  for (const auto& [c, d] : latin_pairs()) CHECK(nc::exterior_d(NcPoly::gen(alg.b(0, c, d)), alg.forms()).is_zero());
}

TEST_CASE("isotropy of b is not implied by the other relations") {
  const TwistorAlgebra alg({1, false, std::nullopt, 0});
  CHECK_FALSE(alg.isotropy(0).is_zero());
}

TEST_CASE("both index placements of the derivative-w exchange agree") {
  const auto& a0 = generic_algebra();
  const TwistorAlgebra a1({1, true, std::nullopt, 1});
  for (int a = 0; a < 4; ++a)
    for (int al = 0; al < 2; ++al)
      for (const auto& [c, d] : latin_pairs()) {
        const nc::Word w{a0.d(a, al), a0.b(0, c, d)};
        CHECK(a0.weyl().normal_form(w) == a1.weyl().normal_form(w));
      }
}

TEST_CASE("two instanton terms: braided cross relations and confluence outside X") {
  const TwistorAlgebra alg({2, true, std::nullopt, 0});
  CHECK(alg.cross_relations().size() == 36);
  CHECK(alg.isotropy(0).is_zero());
  CHECK(alg.isotropy(1).is_zero());
  CHECK(nc::check_local_confluence(alg.forms(), {"z", "b", "dz"}).confluent());
  // Each composite is central among z and the b of its own label; the first
  // composite q^-2-commutes with b of the second label.
  for (int i = 0; i < 2; ++i) {
    const NcPoly& x = alg.x_composite(i);
    for (int a = 0; a < 4; ++a) {
      const NcPoly z = NcPoly::gen(alg.z(1, a));
      CHECK(alg.forms().normal_form(x * z - z * x).is_zero());
    }
    for (const auto& [c, d] : latin_pairs()) {
      const NcPoly b = NcPoly::gen(alg.b(i, c, d));
      CHECK(alg.forms().normal_form(x * b - b * x).is_zero());
    }
  }
  for (const auto& [c, d] : latin_pairs()) {
    const NcPoly b = NcPoly::gen(alg.b(1, c, d));
    const NcPoly& x = alg.x_composite(0);
    CHECK(alg.forms().normal_form(x * b - LaurentScalar::monomial(-2) * (b * x)).is_zero());
  }
}

TEST_CASE("Laplacian of X^-1 vanishes for exactly one Leibniz twist") {
  const auto& alg = generic_algebra();
  const auto scan = inst::scan_laplace_twist(alg);
  int holding = 0;
  for (const auto& e : scan) {
    CAPTURE(e.label);
    if (e.holds()) {
      ++holding;
      CHECK(e.label == "1");
    }
  }
  CHECK(holding == 1);
}

TEST_CASE("the literal contraction gives no harmonic X^-1") {
  const auto& alg = generic_algebra();
  for (int e : {-2, 0, 2}) {
    CAPTURE(e);
    const UpperCalculus uc{alg, LaurentScalar::monomial(e), UpperCalculus::Contraction::Literal};
    const PolyTensor r = uc.laplace_xinv(0).map([&](const NcPoly& x) { return alg.resolve(x); });
    CHECK(count_nonzero(r) > 0);
  }
}

TEST_CASE("both forms of the Laplacian agree on X^-1") {
  const auto& alg = generic_algebra();
  const UpperCalculus uc{alg, LaurentScalar(1), UpperCalculus::Contraction::Swapped};
  const PolyTensor first = alg.laplace(NcPoly::gen(alg.xinv(0)));
  const PolyTensor second = uc.laplace_xinv(0);
  for (std::size_t n = 0; n < first.size(); ++n) CHECK(alg.resolve(first.data()[n] - second.data()[n]).is_zero());
}

TEST_CASE("Laplacian of a two-term potential vanishes by linearity") {
  const TwistorAlgebra alg({2, true, std::nullopt, 0});
  CHECK(count_nonzero(inst::laplace_phi(alg, LaurentScalar(1))) == 0);
}

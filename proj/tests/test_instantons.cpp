#include "doctest.h"
#include "qtw/gauge.hpp"
#include "qtw/instantons.hpp"

using namespace qtw;
using namespace qtw::inst;

namespace {

std::size_t count_nonzero(const std::vector<NcPoly>& v) {
  std::size_t n = 0;
  for (const auto& e : v) n += !e.is_zero();
  return n;
}

std::size_t count_nonzero(const PolyTensor& t) { return count_nonzero(t.data()); }

const ThooftModel& pinned_thooft() {
  static const ThooftModel m(ThooftOptions{});
  return m;
}

const AdhmModel& pinned_adhm() {
  static const AdhmModel m(AdhmOptions{});
  return m;
}

std::vector<NcPoly> dz_dz_basis(const tw::TwistorAlgebra& alg) {
  std::vector<NcPoly> basis;
  for (int al = 0; al < 2; ++al)
    for (int a = 0; a < 4; ++a)
      for (int be = 0; be < 2; ++be)
        for (int b = 0; b < 4; ++b)
          basis.push_back(alg.forms().normal_form(NcPoly::word({alg.dz(al, a), alg.dz(be, b)})));
  return basis;
}

}  // namespace

TEST_CASE("duality star: involution, split and the self-dual eps dz dz") {
  const auto& alg = pinned_thooft().algebra();
  const auto sd = pinned_thooft().star();
  const auto basis = dz_dz_basis(alg);
  std::size_t self_dual = 0, anti_self_dual = 0;
  for (const auto& f : basis) {
    const NcPoly s = gauge::duality_star(f, sd);
    CHECK((gauge::duality_star(s, sd) - f).is_zero());
    CHECK((gauge::sd_part(f, sd) + gauge::asd_part(f, sd) - f).is_zero());
    self_dual += (s - f).is_zero();
    anti_self_dual += (s + f).is_zero();
  }
  // dz dz spans 2-forms with a nontrivial split: neither part is everything.
  CHECK(self_dual < basis.size());
  CHECK(anti_self_dual < basis.size());
  CHECK_THROWS_AS(gauge::duality_star(NcPoly::gen(alg.dz(0, 0)), sd), std::invalid_argument);
}

TEST_CASE("only the reversed star placement makes eps dz dz self-dual") {
  const auto& alg = pinned_thooft().algebra();
  auto count_failures = [&](gauge::StarConvention c) {
    const gauge::StarData sd{&alg.forms(), "dz", alg.p_plus(), alg.p_minus(), c};
    std::size_t bad = 0;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        NcPoly f;
        for (int al = 0; al < 2; ++al)
          for (int be = 0; be < 2; ++be) f.add_term({alg.dz(al, a), alg.dz(be, b)}, alg.eps_down()({al, be}));
        f = alg.forms().normal_form(f);
        bad += !(gauge::duality_star(f, sd) - f).is_zero();
      }
    return bad;
  };
  CHECK(count_failures(gauge::StarConvention::Reversed) == 0);
  CHECK(count_failures(gauge::StarConvention::Direct) > 0);
}

TEST_CASE("the connection satisfies the gauge algebra only on the first slot") {
  const auto& m = pinned_thooft();
  CHECK(count_nonzero(m.gauge_algebra(gauge::GaugeReading::Slot1)) == 0);
  CHECK(count_nonzero(m.gauge_algebra(gauge::GaugeReading::Slot2)) == 14);
}

TEST_CASE("trace weights: exactly diag(q^-1, q) gives the trace identity") {
  const auto scan = pinned_thooft().scan_trace_weights();
  REQUIRE(scan.size() == 4);
  int holding = 0;
  for (const auto& e : scan) {
    CAPTURE(e.weights.str());
    if (e.holds()) {
      ++holding;
      CHECK(e.weights == kPinnedTraceWeights);
    }
  }
  CHECK(holding == 1);
}

TEST_CASE("single-term t'Hooft curvature is flat, hence anti-self-dual") {
  const auto& m = pinned_thooft();
  // A single term is pure gauge, as in the classical limit.
  CHECK(count_nonzero(m.curvature()) == 0);
  CHECK(count_nonzero(m.asd_curvature()) == 0);
  CHECK(m.curvature_trace(kPinnedTraceWeights).is_zero());
}

TEST_CASE("dropping (b, b) = 0 breaks anti-self-duality") {
  const ThooftModel m(ThooftOptions{1, false, std::nullopt, 3});
  CHECK(count_nonzero(m.asd_curvature()) > 0);
}

TEST_CASE("the prefactor q^-3 breaks anti-self-duality") {
  const ThooftModel m(ThooftOptions{1, true, std::nullopt, -3});
  CHECK(count_nonzero(m.asd_curvature()) == 4);
}

TEST_CASE("t'Hooft identities survive specialization") {
  for (const Rational q0 : {Rational(1), Rational(2), Rational(3, 2), Rational(5, 7)}) {
    CAPTURE(q0.get_str());
    const ThooftModel m(ThooftOptions{1, true, q0, 3});
    CHECK(m.trace_identity(kPinnedTraceWeights).is_zero());
    CHECK(count_nonzero(m.gauge_algebra(gauge::GaugeReading::Slot1)) == 0);
  }
}

TEST_CASE("ADHM base: projector, Gram identity and confluence") {
  const auto& m = pinned_adhm();
  CHECK(m.base_confluence().confluent());
  CHECK(count_nonzero(m.projector_residual()) == 0);
  CHECK(count_nonzero(m.gram_residual()) == 0);
  CHECK_FALSE(m.g().is_zero());
  // g is not q-central in z: it is a genuinely noncommutative scale.
  CHECK_FALSE(m.g_central_weight().has_value());
}

TEST_CASE("ADHM frame relations and completeness") {
  const auto& m = pinned_adhm();
  for (const auto& l : AdhmModel::frame_labels()) {
    CAPTURE(l);
    CHECK(count_nonzero(m.frame_residual(l)) == 0);
  }
  for (const auto& l : AdhmModel::completeness_labels()) {
    CAPTURE(l);
    CHECK(count_nonzero(m.completeness_residual(l)) == 0);
  }
  CHECK(count_nonzero(m.exchange_residual()) == 0);
  CHECK(m.exchange_nondegenerate());
}

TEST_CASE("ADHM curvature: certificate and anti-self-dual core") {
  const auto& m = pinned_adhm();
  CHECK(count_nonzero(m.curvature_certificate_residual()) == 0);
  CHECK(count_nonzero(m.certificate_relations_residual()) == 0);
  CHECK(count_nonzero(m.curvature_expected()) > 0);
  CHECK(count_nonzero(m.core_asd(false)) == 0);
  CHECK(count_nonzero(m.core_asd(true)) == 0);
}

TEST_CASE("flipping the ADHM projector breaks the Gram identity and the core") {
  const AdhmModel m(AdhmOptions{1, 1, std::nullopt, true, -1});
  CHECK(count_nonzero(m.gram_residual()) == 4);
  CHECK(count_nonzero(m.core_asd(true)) == 9);
}

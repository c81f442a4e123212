#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "qtw/gauge.hpp"
#include "qtw/instantons.hpp"
#include "qtw/suites.hpp"

using namespace qtw;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string note;
};

// Runs a suite and requires every check whose id is in `ids` (all when
// empty) to be present and passing.
bool suite_passes(const std::string& name, const suites::Params& p, std::set<std::string> ids, std::string& note) {
  const auto rep = suites::run_suite(name, p);
  bool ok = true;
  for (const auto& c : rep.checks) {
    const bool wanted = ids.empty() || ids.erase(c.id) > 0;
    if (wanted && !c.pass) {
      ok = false;
      note += " " + name + "/" + c.id + " failed;";
    }
  }
  for (const auto& missing : ids) {
    ok = false;
    note += " " + name + "/" + missing + " missing;";
  }
  return ok;
}

std::size_t count_nonzero(const std::vector<nc::NcPoly>& v) {
  std::size_t n = 0;
  for (const auto& e : v) n += !e.is_zero();
  return n;
}

std::string seconds(Clock::duration d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f s", std::chrono::duration<double>(d).count());
  return buf;
}

Outcome timed(double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o = body();
  const auto dt = Clock::now() - t0;
  if (std::chrono::duration<double>(dt).count() > budget_s) {
    o.pass = false;
    o.note += " over budget;";
  }
  o.note += " " + seconds(dt);
  return o;
}

suites::Params at(std::optional<Rational> q) { return {std::nullopt, std::nullopt, std::nullopt, std::move(q)}; }

Outcome hecke_ybe() {
  return timed(10, [] {
    Outcome o;
    for (int n : {2, 4, 6}) {
      suites::Params p;
      p.n = n;
      o.pass &= suite_passes("rmx:hecke", p, {"hecke"}, o.note);
      o.pass &= suite_passes("rmx:ybe", p, {"ybe"}, o.note);
    }
    return o;
  });
}

Outcome greek_epsilon() {
  Outcome o;
  o.pass = suite_passes("rmx:hecke", at({}), {"slq2-equals-glq2", "eps-raise-lower", "eps-trace"}, o.note);
  return o;
}

Outcome q_epsilon4() {
  Outcome o;
  o.pass =
      suite_passes("twistor:eq10", at({}), {"eps4-nullity", "eps4-constraint", "eps4-classical-limit"}, o.note);
  return o;
}

Outcome twistor_relations() {
  return timed(60, [] {
    Outcome o;
    o.pass = suite_passes("twistor:relations", at({}),
                          {"zz-exchange", "z-dz-exchange", "dz-dz-exchange", "derivative-exchange",
                           "derivative-z-exchange", "forms-confluence", "weyl-confluence"},
                          o.note);
    return o;
  });
}

Outcome y_sector() {
  Outcome o;
  o.pass = suite_passes("twistor:eq10", at({}), {"eps-zzz"}, o.note);
  o.pass &= suite_passes("twistor:yy", at({}), {"y-projection", "yy-isotropy"}, o.note);
  return o;
}

Outcome thooft_gauge_and_trace() {
  Outcome o;
  o.pass = suite_passes("gauge:eq16", at({}), {"gauge-algebra"}, o.note);
  o.pass &= suite_passes("thooft:trace", at({}), {"trace-identity", "trace-da"}, o.note);
  // The pinned slot reading is the only one that holds.
  const inst::ThooftModel m(inst::ThooftOptions{});
  const auto slot2 = m.gauge_algebra(gauge::GaugeReading::Slot2);
  if (count_nonzero(slot2.data()) == 0) {
    o.pass = false;
    o.note += " second slot reading also vanishes;";
  }
  return o;
}

Outcome laplace() {
  Outcome o;
  const tw::TwistorAlgebra alg({1, true, std::nullopt, 0});
  int holding = 0;
  for (const auto& e : inst::scan_laplace_twist(alg)) holding += e.holds();
  if (holding != 1) {
    o.pass = false;
    o.note += " " + std::to_string(holding) + " twists give zero;";
  }
  suites::Params p;
  p.k_inst = 2;
  o.pass &= suite_passes("thooft:laplace", p, {"laplace-phi"}, o.note);
  return o;
}

Outcome thooft_self_duality() {
  return timed(600, [] {
    Outcome o;
    o.pass = suite_passes("thooft:sd", at({}), {"asd-curvature"}, o.note);
    const inst::ThooftModel control(inst::ThooftOptions{1, false, std::nullopt, 3});
    const std::size_t nz = count_nonzero(control.asd_curvature());
    if (nz == 0) {
      o.pass = false;
      o.note += " control without (b,b)=0 vanishes;";
    } else {
      o.note += " control: " + std::to_string(nz) + " nonzero;";
    }
    return o;
  });
}

Outcome adhm() {
  return timed(900, [] {
    Outcome o;
    o.pass = suite_passes("adhm:relations", at({}), {}, o.note);
    o.pass &= suite_passes("adhm:completeness", at({}), {}, o.note);
    o.pass &= suite_passes("adhm:curvature", at({}), {}, o.note);
    const inst::AdhmModel control(inst::AdhmOptions{1, 1, std::nullopt, true, -1});
    const std::size_t nz = count_nonzero(control.gram_residual()) + count_nonzero(control.core_asd(true));
    if (nz == 0) {
      o.pass = false;
      o.note += " flipped-projector control vanishes;";
    } else {
      o.note += " control: " + std::to_string(nz) + " nonzero;";
    }
    return o;
  });
}

Outcome every_suite_at(const std::vector<Rational>& qs) {
  Outcome o;
  for (const auto& q : qs)
    for (const auto& name : suites::suite_names()) o.pass &= suite_passes(name, at(q), {}, o.note);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Hecke and Yang-Baxter for n in {2,4,6}", hecke_ybe},
      {"SL_q(2) R equals GL_q(2) R, epsilon raise/lower and trace", greek_epsilon},
      {"q-epsilon: nullity 1, all 256 entries, classical limit", q_epsilon4},
      {"twistor exchange relations reduce to 0, no ambiguities", twistor_relations},
      {"eps_q z z z, y projection and (y, y) = 0", y_sector},
      {"t'Hooft gauge algebra, trace identity and Tr_q dA = 0", thooft_gauge_and_trace},
      {"Laplacian: unique Leibniz twist, two-term potential", laplace},
      {"t'Hooft anti-self-duality with control", thooft_self_duality},
      {"ADHM (N, k) = (1, 1) relations, curvature, asd, control", adhm},
      {"every suite at q = 1", [] { return every_suite_at({Rational(1)}); }},
      {"every suite at q = 2, 3/2, 5/7", [] { return every_suite_at({Rational(2), Rational(3, 2), Rational(5, 7)}); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string(" exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << i + 1 << " " << criteria[i].first << " |" << o.note << std::endl;
  }
  return failed == 0 ? 0 : 1;
}

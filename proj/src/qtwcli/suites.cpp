#include "qtw/suites.hpp"

#include <chrono>
#include <functional>
#include <map>

#include "qtw/instantons.hpp"

namespace qtw::suites {

using nc::NcPoly;
using nc::PolyTensor;
using report::summarize;

namespace {

class Runner {
 public:
  explicit Runner(const std::string& suite) {
    rep_.suite = suite;
    rep_.conventions = pinned_conventions();
  }

  void check(const std::string& id, const std::function<std::string()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string residual = body();
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = residual == "0";
    rep_.checks.push_back({id, anchor(id), std::move(residual), pass, ms});
  }

  report::Report take() { return std::move(rep_); }

 private:
  report::Report rep_;
};

struct Accepts {
  bool n = false, k = false, k_inst = false;
};

void require(const std::string& suite, const Params& p, Accepts a) {
  auto reject = [&](const char* flag) { throw UsageError("suite " + suite + " does not take " + flag); };
  if (p.n && !a.n) reject("--n");
  if (p.k && !a.k) reject("--k");
  if (p.k_inst && !a.k_inst) reject("--k-inst");
  if (p.q && *p.q == 0) throw UsageError("--q must be nonzero");
}

int bounded(const std::optional<int>& v, int def, int lo, int hi, const char* flag) {
  const int x = v.value_or(def);
  if (x < lo || x > hi)
    throw UsageError(std::string(flag) + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return x;
}

/// Scalar residuals are formed symbolically and then evaluated, since the
/// rmx constructors carry q - q^-1 and 1/(q + q^-1) as exact constants.
std::vector<LaurentScalar> values(const ScalarTensor& t, const std::optional<Rational>& q) {
  std::vector<LaurentScalar> out;
  for (const auto& x : t.data()) out.push_back(q ? x.specialize(*q) : x);
  return out;
}

std::string tensor_residual(const ScalarTensor& t, const std::optional<Rational>& q) {
  return summarize(values(t, q));
}

std::string poly_residual(const nc::Registry& reg, const std::vector<NcPoly>& v) { return summarize(reg, v); }

std::string confluence_residual(const nc::Registry& reg, const nc::ConfluenceReport& c) {
  if (c.confluent()) return "0";
  const auto& m = c.mismatches.front();
  return std::to_string(c.mismatches.size()) + " ambiguities; first " + reg.render(m.word) + ": " +
         summarize(reg, {m.difference});
}

std::vector<NcPoly> reduce_all(const nc::RewriteSystem& rs, const std::vector<NcPoly>& rels,
                               const std::optional<Rational>& q) {
  std::vector<NcPoly> out;
  for (const auto& r : rels) out.push_back(rs.normal_form(q ? r.specialized(*q) : r));
  return out;
}

ScalarTensor kron_delta(const IndexSpace& s) {
  ScalarTensor d({up(s), down(s)});
  for (int i = 0; i < s.dim; ++i) d({i, i}) = 1;
  return d;
}

// ---------------------------------------------------------------------------
// rmx

void rmx_hecke(Runner& run, const Params& p) {
  const int n = bounded(p.n, 4, 1, 8, "--n");
  const rmx::RMatrix r = rmx::build_glq_rmatrix(n);
  const IndexSpace s = r.space();
  run.check("hecke", [&] { return tensor_residual(rmx::hecke_residual(r), p.q); });
  run.check("r-inverse", [&] {
    return tensor_residual(rmx::compose(r.tensor, rmx::inverse_rmatrix(r).tensor) - rmx::identity_operator(s), p.q);
  });
  const auto [pm, pp] = rmx::projectors(r);
  run.check("projector-completeness",
            [&] { return tensor_residual(pp + pm - rmx::identity_operator(s), p.q); });
  run.check("projector-idempotence", [&] {
    auto v = values(rmx::compose(pp, pp) - pp, p.q);
    auto w = values(rmx::compose(pm, pm) - pm, p.q);
    v.insert(v.end(), w.begin(), w.end());
    return summarize(v);
  });
  run.check("projector-orthogonality", [&] {
    auto v = values(rmx::compose(pp, pm), p.q);
    auto w = values(rmx::compose(pm, pp), p.q);
    v.insert(v.end(), w.begin(), w.end());
    return summarize(v);
  });
  run.check("spectral-decomposition", [&] {
    return tensor_residual(
        scaled(pp, LaurentScalar::q()) - scaled(pm, LaurentScalar::monomial(-1)) - r.tensor, p.q);
  });

  const auto eps = rmx::build_epsilon2();
  const IndexSpace g = rmx::greek();
  run.check("slq2-equals-glq2", [&] {
    return tensor_residual(rmx::build_slq2_rmatrix().tensor - rmx::build_glq_rmatrix(2, g.name).tensor, p.q);
  });
  run.check("eps-raise-lower", [&] {
    auto v = values(contract(eps.eps_up, eps.eps_down, {{1, 0}}) - kron_delta(g), p.q);
    ScalarTensor lower({down(g), up(g)});
    for (int a = 0; a < 2; ++a)
      for (int c = 0; c < 2; ++c) {
        LaurentScalar s;
        for (int b = 0; b < 2; ++b) s += eps.eps_down({a, b}) * eps.eps_up({b, c});
        lower({a, c}) = s - LaurentScalar(a == c ? 1 : 0);
      }
    auto w = values(lower, p.q);
    v.insert(v.end(), w.begin(), w.end());
    return summarize(v);
  });
  run.check("eps-trace", [&] {
    LaurentScalar t = LaurentScalar::q_int2();
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) t += eps.eps_down({a, b}) * eps.eps_up({a, b});
    return summarize({p.q ? t.specialize(*p.q) : t});
  });
  run.check("glq2-minus-projector", [&] {
    const auto pm2 = rmx::projectors(rmx::build_slq2_rmatrix()).first;
    ScalarTensor d(pm2.shape());
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c)
          for (int e = 0; e < 2; ++e)
            d({a, b, c, e}) = pm2({a, b, c, e}) + (eps.eps_up({a, b}) * eps.eps_down({c, e})).div_q_int2();
    return tensor_residual(d, p.q);
  });
}

void rmx_ybe(Runner& run, const Params& p) {
  const int n = bounded(p.n, 4, 1, 8, "--n");
  run.check("ybe", [&] { return tensor_residual(rmx::ybe_residual(rmx::build_glq_rmatrix(n)), p.q); });
  run.check("ybe-slq2", [&] { return tensor_residual(rmx::ybe_residual(rmx::build_slq2_rmatrix()), p.q); });
}

// ---------------------------------------------------------------------------
// twistor

tw::TwistorAlgebra twistor(const Params& p, int k_inst = 1) {
  return tw::TwistorAlgebra(tw::TwistorAlgebra::Options{k_inst, true, p.q, 0});
}

void twistor_relations(Runner& run, const Params& p) {
  const auto alg = twistor(p);
  const tw::RelationBuilder rb{alg.structure(), alg.reg()};
  const auto& reg = alg.reg();
  run.check("zz-exchange", [&] { return poly_residual(reg, reduce_all(alg.forms(), rb.zz(), p.q)); });
  run.check("z-dz-exchange", [&] { return poly_residual(reg, reduce_all(alg.forms(), rb.z_dz(), p.q)); });
  run.check("dz-dz-exchange", [&] { return poly_residual(reg, reduce_all(alg.forms(), rb.dz_dz(), p.q)); });
  run.check("derivative-exchange", [&] { return poly_residual(reg, reduce_all(alg.weyl(), rb.dd(), p.q)); });
  run.check("derivative-z-exchange", [&] { return poly_residual(reg, reduce_all(alg.weyl(), rb.d_z(), p.q)); });
  run.check("forms-confluence", [&] { return confluence_residual(reg, nc::check_local_confluence(alg.forms())); });
  run.check("weyl-confluence", [&] { return confluence_residual(reg, nc::check_local_confluence(alg.weyl())); });
  run.check("b-isotropy", [&] { return poly_residual(reg, {alg.isotropy(0)}); });
  run.check("b-closed", [&] {
    std::vector<NcPoly> v;
    for (const auto& [c, d] : tw::latin_pairs()) v.push_back(nc::exterior_d(NcPoly::gen(alg.b(0, c, d)), alg.forms()));
    return poly_residual(reg, v);
  });
  const NcPoly& x = alg.x_composite(0);
  run.check("x-composite-central", [&] {
    std::vector<NcPoly> v;
    for (int al = 0; al < 2; ++al)
      for (int a = 0; a < 4; ++a) {
        const NcPoly z = NcPoly::gen(alg.z(al, a));
        v.push_back(alg.forms().normal_form(x * z - z * x));
      }
    for (const auto& [c, d] : tw::latin_pairs()) {
      const NcPoly b = NcPoly::gen(alg.b(0, c, d));
      v.push_back(alg.forms().normal_form(x * b - b * x));
    }
    return poly_residual(reg, v);
  });
  run.check("x-composite-dz-weight", [&] {
    const LaurentScalar q2 = alg.sc(LaurentScalar::monomial(2));
    std::vector<NcPoly> v;
    for (int al = 0; al < 2; ++al)
      for (int a = 0; a < 4; ++a) {
        const NcPoly dz = NcPoly::gen(alg.dz(al, a));
        v.push_back(alg.forms().normal_form(x * dz - q2 * (dz * x)));
      }
    return poly_residual(reg, v);
  });
}

int permutation_sign(std::vector<int> v) {
  int s = 1;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (v[i] == v[j])
        return 0;
      else if (v[i] > v[j])
        s = -s;
  return s;
}

void twistor_eq10(Runner& run, const Params& p) {
  const rmx::RMatrix r4 = rmx::build_glq_rmatrix(4, rmx::latin().name);
  const rmx::Eps4Solution sol = rmx::build_q_epsilon4(r4);
  run.check("eps4-nullity", [&] {
    if (sol.reading != rmx::Eps4Reading::Reversed)
      return "pinned reading gives nullity " + std::to_string(sol.nullity_reversed);
    return std::string("0");
  });
  run.check("eps4-constraint", [&] {
    std::vector<LaurentScalar> v;
    for (int slot = 0; slot < 3; ++slot) {
      auto w = values(rmx::eps4_residual(r4, sol.eps, sol.reading, slot), p.q);
      v.insert(v.end(), w.begin(), w.end());
    }
    return summarize(v);
  });
  run.check("eps4-classical-limit", [&] {
    std::vector<LaurentScalar> v;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c)
          for (int d = 0; d < 4; ++d)
            v.push_back(LaurentScalar(sol.eps({a, b, c, d}).eval(1) - permutation_sign({a, b, c, d})));
    return summarize(v);
  });
  const auto alg = twistor(p);
  const tw::RelationBuilder rb{alg.structure(), alg.reg()};
  run.check("eps-zzz", [&] { return poly_residual(alg.reg(), reduce_all(alg.forms(), rb.eps_zzz(), p.q)); });
}

void twistor_yy(Runner& run, const Params& p) {
  const auto alg = twistor(p);
  const auto& y = alg.y();
  const auto& pm = alg.p_minus();
  run.check("y-projection", [&] {
    std::vector<NcPoly> v;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        NcPoly r = y({a, b});
        for (int c = 0; c < 4; ++c)
          for (int d = 0; d < 4; ++d) {
            const auto& k = pm({d, c, b, a});
            if (!k.is_zero()) r -= k * y({c, d});
          }
        v.push_back(alg.forms().normal_form(r));
      }
    return poly_residual(alg.reg(), v);
  });
  run.check("y-rank", [&] {
    const std::size_t rank = y.data().size() - nc::linear_relations(y.data()).size();
    return rank == 6 ? std::string("0") : "rank " + std::to_string(rank) + ", expected 6";
  });
  run.check("yy-isotropy", [&] {
    NcPoly s;
    const auto& e = alg.eps4();
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c)
          for (int d = 0; d < 4; ++d) {
            const auto& k = e({a, b, c, d});
            if (!k.is_zero()) s += k * (y({a, b}) * y({c, d}));
          }
    return poly_residual(alg.reg(), {alg.forms().normal_form(s)});
  });
}

void twistor_laplace(Runner& run, const Params& p) {
  const int k = bounded(p.k_inst, 1, 1, 3, "--k-inst");
  const auto alg = twistor(p, k);
  const tw::UpperCalculus uc{alg, alg.sc(LaurentScalar(1)), tw::UpperCalculus::Contraction::Swapped};
  for (int i = 0; i < k; ++i)
    run.check("laplace-xinv[" + std::to_string(i + 1) + "]", [&] {
      return poly_residual(alg.reg(), uc.laplace_xinv(i).map([&](const NcPoly& x) { return alg.resolve(x); }).data());
    });
  if (k == 1)
    run.check("laplace-forms-agree", [&] {
      const PolyTensor first = alg.laplace(NcPoly::gen(alg.xinv(0)));
      const PolyTensor second = uc.laplace_xinv(0);
      std::vector<NcPoly> v;
      for (std::size_t n = 0; n < first.size(); ++n) v.push_back(alg.resolve(first.data()[n] - second.data()[n]));
      return poly_residual(alg.reg(), v);
    });
}

// ---------------------------------------------------------------------------
// gauge and t'Hooft

inst::ThooftModel thooft(const Params& p) { return inst::ThooftModel(inst::ThooftOptions{1, true, p.q, 3}); }

void require_single_instanton(const Params& p) {
  if (p.k_inst && *p.k_inst != 1) throw UsageError("this suite is defined for --k-inst 1 only");
}

std::vector<LaurentScalar> pinned_weights(const tw::TwistorAlgebra& alg) {
  return {alg.sc(LaurentScalar::monomial(inst::kPinnedTraceWeights.first)),
          alg.sc(LaurentScalar::monomial(inst::kPinnedTraceWeights.second))};
}

void gauge_eq16(Runner& run, const Params& p) {
  const auto m = thooft(p);
  const auto& reg = m.algebra().reg();
  run.check("gauge-algebra", [&] { return poly_residual(reg, m.gauge_algebra(gauge::GaugeReading::Slot1).data()); });
  run.check("connection-one-form", [&] {
    const auto& a = m.connection();
    for (std::size_t n = 0; n < a.size(); ++n) {
      if (a.data()[n].is_zero()) return "entry " + std::to_string(n) + " vanishes";
      for (const auto& [w, c] : a.data()[n].terms())
        if (reg.parity(w) != 1) return "entry " + std::to_string(n) + " has a word of even degree: " + reg.render(w);
    }
    return std::string("0");
  });
}

void gauge_trace(Runner& run, const Params& p) {
  const auto m = thooft(p);
  const auto& alg = m.algebra();
  const auto w = inst::kPinnedTraceWeights;
  run.check("alpha-squared", [&] { return poly_residual(alg.reg(), {m.trace_squared(w)}); });
  run.check("trace-a-squared", [&] { return poly_residual(alg.reg(), {m.trace_a_squared(w)}); });
  run.check("d-alpha", [&] {
    const NcPoly alpha = gauge::q_trace(m.connection(), pinned_weights(alg));
    return poly_residual(alg.reg(), {alg.resolve(nc::exterior_d(alpha, alg.forms()))});
  });
  run.check("curvature-trace", [&] { return poly_residual(alg.reg(), {m.curvature_trace(w)}); });
}

void gauge_duality(Runner& run, const Params& p) {
  const auto alg = twistor(p);
  const auto& rs = alg.forms();
  const gauge::StarData sd{&rs, "dz", alg.p_plus(), alg.p_minus(), gauge::StarConvention::Reversed};
  std::vector<NcPoly> basis;
  for (int al = 0; al < 2; ++al)
    for (int a = 0; a < 4; ++a)
      for (int be = 0; be < 2; ++be)
        for (int b = 0; b < 4; ++b)
          basis.push_back(rs.normal_form(NcPoly::word({alg.dz(al, a), alg.dz(be, b)})));
  const auto& reg = alg.reg();
  run.check("star-involution", [&] {
    std::vector<NcPoly> v;
    for (const auto& f : basis) v.push_back(gauge::duality_star(gauge::duality_star(f, sd), sd) - f);
    return poly_residual(reg, v);
  });
  run.check("sd-asd-split", [&] {
    std::vector<NcPoly> v;
    for (const auto& f : basis) v.push_back(gauge::sd_part(f, sd) + gauge::asd_part(f, sd) - f);
    return poly_residual(reg, v);
  });
  run.check("sd-part-self-dual", [&] {
    std::vector<NcPoly> v;
    for (const auto& f : basis) {
      const NcPoly s = gauge::sd_part(f, sd);
      v.push_back(gauge::duality_star(s, sd) - s);
      v.push_back(gauge::asd_part(s, sd));
    }
    return poly_residual(reg, v);
  });
  run.check("eps-dz-dz-self-dual", [&] {
    std::vector<NcPoly> v;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        NcPoly f;
        for (int al = 0; al < 2; ++al)
          for (int be = 0; be < 2; ++be) f.add_term({alg.dz(al, a), alg.dz(be, b)}, alg.eps_down()({al, be}));
        f = rs.normal_form(f);
        v.push_back(gauge::duality_star(f, sd) - f);
      }
    return poly_residual(reg, v);
  });
  run.check("star-zero-form-linear", [&] {
    std::vector<NcPoly> v;
    for (int ga = 0; ga < 2; ++ga)
      for (int c = 0; c < 4; ++c) {
        const NcPoly z = NcPoly::gen(alg.z(ga, c));
        for (const auto& f : basis)
          v.push_back(gauge::duality_star(rs.normal_form(z * f), sd) - rs.normal_form(z * gauge::duality_star(f, sd)));
      }
    return poly_residual(reg, v);
  });
}

void thooft_trace(Runner& run, const Params& p) {
  require_single_instanton(p);
  const auto m = thooft(p);
  const auto& reg = m.algebra().reg();
  run.check("trace-identity", [&] { return poly_residual(reg, {m.trace_identity(inst::kPinnedTraceWeights)}); });
  run.check("trace-da", [&] { return poly_residual(reg, {m.trace_da(inst::kPinnedTraceWeights)}); });
}

void thooft_laplace(Runner& run, const Params& p) {
  const int k = bounded(p.k_inst, 1, 1, 3, "--k-inst");
  const auto alg = twistor(p, k);
  run.check("b-isotropy", [&] {
    std::vector<NcPoly> v;
    for (int i = 0; i < k; ++i) v.push_back(alg.isotropy(i));
    return poly_residual(alg.reg(), v);
  });
  run.check("laplace-phi", [&] { return poly_residual(alg.reg(), inst::laplace_phi(alg, alg.sc(LaurentScalar(1))).data()); });
}

void thooft_sd(Runner& run, const Params& p) {
  require_single_instanton(p);
  const auto m = thooft(p);
  const auto& reg = m.algebra().reg();
  run.check("b-isotropy", [&] { return poly_residual(reg, {m.algebra().isotropy(0)}); });
  run.check("asd-curvature", [&] { return poly_residual(reg, m.asd_curvature()); });
}

// ---------------------------------------------------------------------------
// ADHM

inst::AdhmModel adhm(const Params& p) {
  const int n = bounded(p.n, 1, 1, 2, "--n");
  const int k = p.k.value_or(1);
  if (k != 1) throw UsageError("--k: only k = 1 is supported");
  return inst::AdhmModel(inst::AdhmOptions{n, k, p.q, false, -1});
}

void frame_checks(Runner& run, const inst::AdhmModel& m, const std::vector<std::string>& labels) {
  for (const auto& l : labels)
    run.check("frame-" + l, [&] { return poly_residual(m.frame_registry(), m.frame_residual(l)); });
}

void adhm_relations(Runner& run, const Params& p) {
  const auto m = adhm(p);
  run.check("adhm-projector", [&] { return poly_residual(m.base_registry(), m.projector_residual()); });
  run.check("gram", [&] { return poly_residual(m.base_registry(), m.gram_residual()); });
  run.check("base-confluence", [&] { return confluence_residual(m.base_registry(), m.base_confluence()); });
  frame_checks(run, m, {"normalization", "gram", "g-inverse", "central", "du-u-exchange", "du-du", "d-normalization"});
  run.check("u-exchange", [&] { return poly_residual(m.frame_registry(), m.exchange_residual()); });
  run.check("u-exchange-nondegenerate",
            [&] { return m.exchange_nondegenerate() ? std::string("0") : std::string("normal form of 1 is 0"); });
}

void adhm_completeness(Runner& run, const Params& p) {
  const auto m = adhm(p);
  frame_checks(run, m,
               {"orthogonality-u", "orthogonality-v", "completeness", "d-orthogonality-u", "d-orthogonality-v"});
  for (const auto& l : inst::AdhmModel::completeness_labels())
    run.check("completeness-identity[" + l + "]",
              [&] { return poly_residual(m.frame_registry(), m.completeness_residual(l)); });
}

void adhm_curvature(Runner& run, const Params& p) {
  const auto m = adhm(p);
  run.check("curvature-certificate",
            [&] { return poly_residual(m.frame_registry(), m.curvature_certificate_residual().data()); });
  run.check("certificate-relations",
            [&] { return poly_residual(m.frame_registry(), m.certificate_relations_residual()); });
  run.check("core-asd", [&] { return poly_residual(m.base_registry(), m.core_asd(false)); });
  run.check("core-asd-gram", [&] { return poly_residual(m.base_registry(), m.core_asd(true)); });
}

struct SuiteDef {
  Accepts accepts;
  void (*body)(Runner&, const Params&);
};

const std::map<std::string, SuiteDef>& table() {
  static const std::map<std::string, SuiteDef> t{
      {"rmx:hecke", {{true, false, false}, rmx_hecke}},
      {"rmx:ybe", {{true, false, false}, rmx_ybe}},
      {"twistor:relations", {{}, twistor_relations}},
      {"twistor:eq10", {{}, twistor_eq10}},
      {"twistor:yy", {{}, twistor_yy}},
      {"twistor:laplace", {{false, false, true}, twistor_laplace}},
      {"gauge:eq16", {{}, gauge_eq16}},
      {"gauge:trace", {{}, gauge_trace}},
      {"gauge:duality", {{}, gauge_duality}},
      {"thooft:trace", {{false, false, true}, thooft_trace}},
      {"thooft:laplace", {{false, false, true}, thooft_laplace}},
      {"thooft:sd", {{false, false, true}, thooft_sd}},
      {"adhm:relations", {{true, true, false}, adhm_relations}},
      {"adhm:completeness", {{true, true, false}, adhm_completeness}},
      {"adhm:curvature", {{true, true, false}, adhm_curvature}},
  };
  return t;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{
      "rmx:hecke",    "rmx:ybe",        "twistor:relations", "twistor:eq10",      "twistor:yy",
      "twistor:laplace", "gauge:eq16",  "gauge:trace",       "gauge:duality",     "thooft:trace",
      "thooft:laplace",  "thooft:sd",   "adhm:relations",    "adhm:completeness", "adhm:curvature"};
  return names;
}

report::Report run_suite(const std::string& name, const Params& params) {
  const auto it = table().find(name);
  if (it == table().end()) throw UsageError("unknown suite '" + name + "'");
  require(name, params, it->second.accepts);
  Runner run(name);
  it->second.body(run, params);
  return run.take();
}

}  // namespace qtw::suites

#include <stdexcept>

#include "qtw/instantons.hpp"

namespace qtw::inst {

using gauge::GaugeReading;

std::string TraceWeights::str() const {
  auto one = [](int e) { return e == 0 ? std::string("1") : e == 1 ? std::string("q") : "q^" + std::to_string(e); };
  return "diag(" + one(first) + "," + one(second) + ")";
}

ThooftModel::ThooftModel(ThooftOptions opt)
    : opt_(opt), alg_(tw::TwistorAlgebra::Options{opt.k_inst, opt.isotropy, opt.q0, 0}) {
  if (opt_.k_inst != 1) return;
  const auto& forms = alg_.forms();
  const IndexSpace G = rmx::greek();
  ScalarTensor w({up(G), down(G)});
  for (int mu = 0; mu < 2; ++mu)
    for (int be = 0; be < 2; ++be) {
      LaurentScalar s;
      for (int sg = 0; sg < 2; ++sg) s += alg_.eps_up()({sg, mu}) * alg_.eps_down()({sg, be});
      w({mu, be}) = s;
    }
  const NcPoly xinv = NcPoly::gen(alg_.xinv(0)), x = NcPoly::gen(alg_.x(0));
  std::vector<std::vector<NcPoly>> dphi(4, std::vector<NcPoly>(2));
  for (int a = 0; a < 4; ++a)
    for (int mu = 0; mu < 2; ++mu) dphi[a][mu] = forms.normal_form(alg_.partial(a, mu, xinv) * x);
  a_ = PolyTensor({up(G), down(G)});
  const LaurentScalar c = prefactor();
  for (int al = 0; al < 2; ++al)
    for (int be = 0; be < 2; ++be) {
      NcPoly acc;
      for (int a = 0; a < 4; ++a)
        for (int mu = 0; mu < 2; ++mu)
          if (!w({mu, be}).is_zero()) acc += w({mu, be}) * (NcPoly::gen(alg_.dz(al, a)) * dphi[a][mu]);
      a_({al, be}) = forms.normal_form(c * acc);
    }
  dphi_ = forms.normal_form(nc::exterior_d(xinv, forms) * x);
}

LaurentScalar ThooftModel::prefactor() const { return alg_.sc(LaurentScalar::monomial(opt_.prefactor_exponent)); }

const PolyTensor& ThooftModel::connection() const {
  if (opt_.k_inst != 1) throw std::logic_error("the connection is built for k_inst = 1 only");
  return a_;
}

const NcPoly& ThooftModel::dphi_phi_inv() const {
  connection();
  return dphi_;
}

PolyTensor ThooftModel::gauge_algebra(GaugeReading reading) const {
  PolyTensor r = gauge::gauge_algebra_residual(connection(), alg_.r_greek(), reading, alg_.forms());
  for (auto& p : r.data()) p = alg_.resolve(p);
  return r;
}

namespace {

std::vector<LaurentScalar> weights_of(const tw::TwistorAlgebra& alg, TraceWeights w) {
  return {alg.sc(LaurentScalar::monomial(w.first)), alg.sc(LaurentScalar::monomial(w.second))};
}

}  // namespace

NcPoly ThooftModel::trace_identity(TraceWeights w) const {
  return alg_.resolve(gauge::q_trace(connection(), weights_of(alg_, w)) + prefactor() * dphi_);
}

NcPoly ThooftModel::trace_da(TraceWeights w) const {
  const PolyTensor da = connection().map([&](const NcPoly& p) { return nc::exterior_d(p, alg_.forms()); });
  return alg_.resolve(gauge::q_trace(da, weights_of(alg_, w)));
}

NcPoly ThooftModel::trace_a_squared(TraceWeights w) const {
  const PolyTensor aa = nc::normal_form(gauge::matmul(connection(), connection()), alg_.forms());
  return alg_.resolve(gauge::q_trace(aa, weights_of(alg_, w)));
}

NcPoly ThooftModel::trace_squared(TraceWeights w) const {
  const NcPoly t = gauge::q_trace(connection(), weights_of(alg_, w));
  return alg_.resolve(alg_.forms().normal_form(t * t));
}

std::vector<TraceScanEntry> ThooftModel::scan_trace_weights() const {
  std::vector<TraceScanEntry> out;
  for (TraceWeights w : {TraceWeights{0, -2}, TraceWeights{-2, 0}, TraceWeights{1, -1}, TraceWeights{-1, 1}})
    out.push_back({w, trace_identity(w), trace_da(w)});
  return out;
}

const PolyTensor& ThooftModel::curvature() const {
  if (!f_) {
    PolyTensor f = gauge::curvature(connection(), alg_.forms());
    for (auto& p : f.data()) p = alg_.resolve(p);
    f_ = std::move(f);
  }
  return *f_;
}

NcPoly ThooftModel::curvature_trace(TraceWeights w) const {
  return alg_.forms().normal_form(gauge::q_trace(curvature(), weights_of(alg_, w)));
}

gauge::StarData ThooftModel::star() const {
  return {&alg_.forms(), "dz", alg_.p_plus(), alg_.p_minus(), gauge::StarConvention::Reversed};
}

std::vector<NcPoly> ThooftModel::asd_curvature() const {
  const gauge::StarData sd = star();
  std::vector<NcPoly> out;
  for (const auto& p : curvature().data()) out.push_back(gauge::asd_part(p, sd));
  return out;
}

// ---------------------------------------------------------------------------

bool LaplaceScanEntry::holds() const {
  for (const auto& p : residual.data())
    if (!p.is_zero()) return false;
  return true;
}

std::vector<LaplaceScanEntry> scan_laplace_twist(const tw::TwistorAlgebra& alg, int term) {
  std::vector<LaplaceScanEntry> out;
  for (const auto& [label, e] : std::vector<std::pair<std::string, int>>{{"q^-2", -2}, {"1", 0}, {"q^2", 2}}) {
    const tw::UpperCalculus uc{alg, alg.sc(LaurentScalar::monomial(e)), tw::UpperCalculus::Contraction::Swapped};
    out.push_back({label, uc.lambda, uc.laplace_xinv(term).map([&](const NcPoly& x) { return alg.resolve(x); })});
  }
  return out;
}

PolyTensor laplace_phi(const tw::TwistorAlgebra& alg, const LaurentScalar& lambda) {
  const tw::UpperCalculus uc{alg, lambda, tw::UpperCalculus::Contraction::Swapped};
  auto term = [&](int i) { return uc.laplace_xinv(i).map([&](const NcPoly& x) { return alg.resolve(x); }); };
  PolyTensor out = term(0);
  for (int i = 1; i < alg.k_inst(); ++i) out = out + term(i);
  return out;
}

}  // namespace qtw::inst

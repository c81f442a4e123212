#include "qtw/gauge.hpp"

#include <stdexcept>

namespace qtw::gauge {

using nc::Gen;
using nc::Word;

std::string to_string(StarConvention c) { return c == StarConvention::Reversed ? "reversed" : "direct"; }

std::string to_string(GaugeReading r) { return r == GaugeReading::Slot1 ? "slot1" : "slot2"; }

NcPoly duality_star(const NcPoly& f, const StarData& s) {
  const auto& reg = s.rs->registry();
  const int fdz = reg.family_id(s.dz);
  const int nl = reg.family(fdz).spaces.at(1).dim;
  const ScalarTensor star = s.p_plus - s.p_minus;
  NcPoly out;
  for (const auto& [w, c] : f.terms()) {
    const std::size_t n = w.size();
    bool ok = n >= 2 && reg.family_of(w[n - 1]) == fdz && reg.family_of(w[n - 2]) == fdz;
    for (std::size_t i = 0; ok && i + 2 < n; ++i) ok = reg.parity(w[i]) == 0;
    if (!ok) throw std::invalid_argument("duality_star: word " + reg.render(w) + " is not a 0-form times dz dz");
    const auto i1 = reg.indices(w[n - 2]);
    const auto i2 = reg.indices(w[n - 1]);
    const int a = i1[1], b = i2[1];
    Word v(w.begin(), w.end());
    for (int cc = 0; cc < nl; ++cc)
      for (int d = 0; d < nl; ++d) {
        const LaurentScalar& k =
            s.convention == StarConvention::Reversed ? star({d, cc, b, a}) : star({cc, d, a, b});
        if (k.is_zero()) continue;
        v[n - 2] = reg.gen(fdz, std::vector<int>{i1[0], cc});
        v[n - 1] = reg.gen(fdz, std::vector<int>{i2[0], d});
        out.add_term(v, c * k);
      }
  }
  return s.rs->normal_form(out);
}

NcPoly asd_part(const NcPoly& f, const StarData& s) {
  return LaurentScalar(Rational(1, 2)) * s.rs->normal_form(f - duality_star(f, s));
}

NcPoly sd_part(const NcPoly& f, const StarData& s) {
  return LaurentScalar(Rational(1, 2)) * s.rs->normal_form(f + duality_star(f, s));
}

NcPoly q_trace(const PolyTensor& m, const std::vector<LaurentScalar>& weights) {
  if (m.rank() != 2 || m.dim(0) != m.dim(1)) throw std::invalid_argument("q_trace needs a square matrix");
  if (weights.size() != static_cast<std::size_t>(m.dim(0))) throw std::invalid_argument("q_trace weight count");
  NcPoly out;
  for (int i = 0; i < m.dim(0); ++i) out += weights[static_cast<std::size_t>(i)] * m({i, i});
  return out;
}

PolyTensor matmul(const PolyTensor& a, const PolyTensor& b) { return contract(a, b, {{1, 0}}); }

namespace {

// Composition of (up, up, down, down) operators, entries in operand order.
PolyTensor compose(const PolyTensor& x, const PolyTensor& y) { return contract(x, y, {{2, 0}, {3, 1}}); }

}  // namespace

PolyTensor gauge_algebra_residual(const PolyTensor& a, const ScalarTensor& r, GaugeReading reading,
                                  const RewriteSystem& rs) {
  const IndexSpace s = a.shape()[0].space;
  const int n = s.dim;
  PolyTensor ak({up(s), up(s), down(s), down(s)});
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int m = 0; m < n; ++m)
        for (int l = 0; l < n; ++l) {
          if (reading == GaugeReading::Slot1 && k == l) ak({i, k, m, l}) = a({i, m});
          if (reading == GaugeReading::Slot2 && i == m) ak({i, k, m, l}) = a({k, l});
        }
  const PolyTensor rr = nc::lift(r);
  const PolyTensor lhs = compose(compose(ak, rr), ak);
  const PolyTensor rhs = compose(compose(compose(compose(rr, ak), rr), ak), rr);
  return nc::normal_form(lhs + rhs, rs);
}

PolyTensor curvature(const PolyTensor& a, const RewriteSystem& rs) {
  PolyTensor da = a.map([&](const NcPoly& p) { return nc::exterior_d_raw(p, rs); });
  return nc::normal_form(da - matmul(a, a), rs);
}

}  // namespace qtw::gauge

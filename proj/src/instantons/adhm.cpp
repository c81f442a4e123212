#include <stdexcept>

#include "qtw/instantons.hpp"

namespace qtw::inst {

using nc::Registry;
using nc::Word;

namespace {

IndexSpace big_space(int n) { return {"big", n}; }
IndexSpace gauge_space(int n) { return {"gauge", n}; }

}  // namespace

AdhmModel::AdhmModel(AdhmOptions opt)
    : opt_(opt),
      s_(tw::Structure::build()),
      base_(std::make_shared<Registry>()),
      frame_(std::make_shared<Registry>()) {
  if (opt_.n < 1) throw std::invalid_argument("N must be positive");
  if (opt_.k != 1) throw std::invalid_argument("only k = 1 is supported");
  eps_up_ = s_.eps.eps_up;
  eps_down_ = s_.eps.eps_down;
  p_plus_ = s_.p_plus;
  p_minus_ = s_.p_minus;
  r_latin_ = s_.r_latin.tensor;
  if (opt_.q0)
    for (auto* t : {&eps_up_, &eps_down_, &p_plus_, &p_minus_, &r_latin_}) *t = specialize(*t, *opt_.q0);
  build_base();
  build_frame();
}

Gen AdhmModel::z(int al, int a) const { return base_registry().gen("z", {al, a}); }
Gen AdhmModel::dz(int al, int a) const { return base_registry().gen("dz", {al, a}); }
Gen AdhmModel::b(int a, int I) const { return base_registry().gen("b", {a, I}); }
Gen AdhmModel::bt(int I, int a) const { return base_registry().gen("bt", {I, a}); }

LaurentScalar AdhmModel::gram_coefficient() const { return sc(-LaurentScalar(1).div_q_int2()); }

void AdhmModel::build_base() {
  const IndexSpace G = rmx::greek(), L = rmx::latin(), B = big_space(big());
  auto reg = std::make_shared<Registry>();
  reg->add_family({"z", {G, L}, 0, 10, 1});
  reg->add_family({"b", {L, B}, 0, 20, 1});
  reg->add_family({"bt", {B, L}, 0, 25, 1});
  reg->add_family({"dz", {G, L}, 1, 50, 1});
  reg->declare_differential("z", "dz");
  for (const char* f : {"dz", "b", "bt"}) reg->declare_closed(f);
  RewriteSystem rs(reg);
  auto gz = [&](int al, int a) { return reg->gen("z", {al, a}); };
  auto gdz = [&](int al, int a) { return reg->gen("dz", {al, a}); };
  auto gb = [&](int a, int I) { return reg->gen("b", {a, I}); };
  auto gbt = [&](int I, int a) { return reg->gen("bt", {I, a}); };

  const auto& RL = s_.r_latin.tensor;
  const ScalarTensor& P = opt_.flipped_projector ? s_.p_minus : s_.p_plus;
  std::vector<NcPoly> proj, exch;
  for (int c = 0; c < 4; ++c)
    for (int d = 0; d < 4; ++d) {
      NcPoly r;
      for (int a = 0; a < 4; ++a)
        for (int bb = 0; bb < 4; ++bb)
          for (int I = 0; I < big(); ++I) r.add_term({gb(a, I), gbt(I, bb)}, P({bb, a, d, c}));
      if (!r.is_zero()) proj.push_back(r);
    }
  const LaurentScalar qs = LaurentScalar::monomial(opt_.bt_weight);
  for (int form = 0; form < 2; ++form)
    for (int a = 0; a < 4; ++a)
      for (int be = 0; be < 2; ++be)
        for (int bb = 0; bb < 4; ++bb) {
          auto Z = [&](int x, int y) { return form ? gdz(x, y) : gz(x, y); };
          for (int I = 0; I < big(); ++I) {
            NcPoly rb = NcPoly::word({gb(a, I), Z(be, bb)}), rt = NcPoly::word({gbt(I, a), Z(be, bb)});
            for (int c = 0; c < 4; ++c)
              for (int d = 0; d < 4; ++d) {
                const auto& k = RL({bb, a, c, d});
                if (k.is_zero()) continue;
                rb.add_term({Z(be, d), gb(c, I)}, -k);
                rt.add_term({Z(be, d), gbt(I, c)}, -(qs * k));
              }
            exch.push_back(rb);
            exch.push_back(rt);
          }
        }
  const tw::RelationBuilder rel{s_, *reg};
  rs.compile(rel.zz());
  rs.compile(rel.z_dz());
  rs.compile(rel.dz_dz());
  rs.compile(proj);
  rs.compile(exch);
  base_ = opt_.q0 ? rs.specialized(*opt_.q0) : rs;
  base_conf_ = nc::check_local_confluence(base_);

  PolyTensor y = rel.y();
  if (opt_.q0) y = y.map([&](const NcPoly& p) { return p.specialized(*opt_.q0); });
  y = nc::normal_form(y, base_);
  NcPoly g;
  for (int a = 0; a < 4; ++a)
    for (int bb = 0; bb < 4; ++bb)
      for (int I = 0; I < big(); ++I) g += NcPoly::word({gb(a, I), gbt(I, bb)}) * y({a, bb});
  g_ = base_.normal_form(gram_coefficient() * g);
  vv_ = PolyTensor({up(G), up(G)});
  for (int al = 0; al < 2; ++al)
    for (int be = 0; be < 2; ++be) {
      NcPoly p;
      for (int a = 0; a < 4; ++a)
        for (int bb = 0; bb < 4; ++bb)
          for (int I = 0; I < big(); ++I) p.add_term({gz(al, a), gb(a, I), gbt(I, bb), gz(be, bb)}, 1);
      vv_({al, be}) = base_.normal_form(p);
    }
}

std::vector<NcPoly> AdhmModel::projector_residual() const {
  const ScalarTensor& P = opt_.flipped_projector ? p_minus_ : p_plus_;
  std::vector<NcPoly> out;
  for (int c = 0; c < 4; ++c)
    for (int d = 0; d < 4; ++d) {
      NcPoly r;
      for (int a = 0; a < 4; ++a)
        for (int bb = 0; bb < 4; ++bb)
          for (int I = 0; I < big(); ++I) r.add_term({b(a, I), bt(I, bb)}, P({bb, a, d, c}));
      out.push_back(base_.normal_form(r));
    }
  return out;
}

std::vector<NcPoly> AdhmModel::gram_residual() const {
  std::vector<NcPoly> out;
  for (int al = 0; al < 2; ++al)
    for (int be = 0; be < 2; ++be) out.push_back(base_.normal_form(vv_({al, be}) - eps_up_({al, be}) * g_));
  return out;
}

std::optional<int> AdhmModel::g_central_weight() const {
  for (int m = -4; m <= 4; ++m) {
    bool ok = true;
    for (int al = 0; al < 2 && ok; ++al)
      for (int a = 0; a < 4 && ok; ++a) {
        const NcPoly zz = NcPoly::gen(z(al, a));
        ok = base_.normal_form(g_ * zz - sc(LaurentScalar::monomial(m)) * (zz * g_)).is_zero();
      }
    if (ok) return m;
  }
  return std::nullopt;
}

std::vector<NcPoly> AdhmModel::core_asd(bool gram_kernel) const {
  NcPoly w[2][2];
  for (int al = 0; al < 2; ++al)
    for (int be = 0; be < 2; ++be) {
      if (!gram_kernel) {
        w[al][be] = NcPoly(eps_down_({al, be}));
        continue;
      }
      NcPoly acc;
      for (int ga = 0; ga < 2; ++ga)
        for (int de = 0; de < 2; ++de) {
          const LaurentScalar k = eps_down_({al, ga}) * eps_down_({de, be});
          if (!k.is_zero()) acc += k * vv_({ga, de});
        }
      w[al][be] = base_.normal_form(acc);
    }
  const gauge::StarData sd{&base_, "dz", p_plus_, p_minus_, gauge::StarConvention::Reversed};
  std::vector<NcPoly> out;
  for (int I = 0; I < big(); ++I)
    for (int K = 0; K < big(); ++K) {
      NcPoly c;
      for (int a = 0; a < 4; ++a)
        for (int bb = 0; bb < 4; ++bb)
          for (int al = 0; al < 2; ++al)
            for (int be = 0; be < 2; ++be)
              if (!w[al][be].is_zero())
                c += NcPoly::word({bt(I, a), dz(al, a)}) * w[al][be] * NcPoly::word({dz(be, bb), b(bb, K)});
      out.push_back(gauge::asd_part(base_.normal_form(c), sd));
    }
  return out;
}

// ---------------------------------------------------------------------------
// Frame layer

namespace {

struct FrameGens {
  const Registry& reg;
  Gen u(int i, int I) const { return reg.gen("u", {i, I}); }
  Gen du(int i, int I) const { return reg.gen("du", {i, I}); }
  Gen ut(int I, int i) const { return reg.gen("ut", {I, i}); }
  Gen dut(int I, int i) const { return reg.gen("dut", {I, i}); }
  Gen z(int al, int a) const { return reg.gen("z", {al, a}); }
  Gen dz(int al, int a) const { return reg.gen("dz", {al, a}); }
  Gen b(int a, int I) const { return reg.gen("b", {a, I}); }
  Gen bt(int I, int a) const { return reg.gen("bt", {I, a}); }
  Gen g() const { return reg.gen("g", {0}); }
  Gen ginv() const { return reg.gen("G", {0}); }
};

NcPoly P1(Gen x) { return NcPoly::gen(x); }

// Composites of the frame layer for one model.
struct FrameAlgebra {
  FrameGens f;
  int n, big;
  const ScalarTensor& eps_up;
  const ScalarTensor& eps_down;

  NcPoly v(int al, int I) const {
    NcPoly p;
    for (int a = 0; a < 4; ++a) p.add_term({f.z(al, a), f.b(a, I)}, 1);
    return p;
  }
  NcPoly vt(int I, int al) const {
    NcPoly p;
    for (int a = 0; a < 4; ++a) p.add_term({f.bt(I, a), f.z(al, a)}, 1);
    return p;
  }
  NcPoly q(int I, int K) const {
    NcPoly p;
    for (int al = 0; al < 2; ++al)
      for (int be = 0; be < 2; ++be)
        if (!eps_down({al, be}).is_zero()) p += eps_down({al, be}) * (vt(I, al) * P1(f.ginv()) * v(be, K));
    return p;
  }
  NcPoly proj(int I, int K) const {
    NcPoly p;
    for (int i = 0; i < n; ++i) p.add_term({f.ut(I, i), f.u(i, K)}, 1);
    return p;
  }
  NcPoly normalization(int i, int k) const {
    NcPoly r = i == k ? NcPoly(-1) : NcPoly();
    for (int I = 0; I < big; ++I) r.add_term({f.u(i, I), f.ut(I, k)}, 1);
    return r;
  }
  NcPoly orth_u(int i, int al) const {
    NcPoly r;
    for (int I = 0; I < big; ++I) r += P1(f.u(i, I)) * vt(I, al);
    return r;
  }
  NcPoly orth_v(int al, int k) const {
    NcPoly r;
    for (int I = 0; I < big; ++I) r += v(al, I) * P1(f.ut(I, k));
    return r;
  }
  NcPoly completeness(int I, int K) const {
    NcPoly r = proj(I, K) + q(I, K);
    if (I == K) r -= NcPoly(1);
    return r;
  }
  NcPoly gram(int al, int be) const {
    NcPoly r;
    for (int I = 0; I < big; ++I) r += v(al, I) * vt(I, be);
    return r - eps_up({al, be}) * P1(f.g());
  }
};

}  // namespace

const std::vector<std::string>& AdhmModel::frame_labels() {
  static const std::vector<std::string> labels{
      "normalization", "gram",          "g-inverse",         "orthogonality-u",   "orthogonality-v", "completeness",
      "central",       "du-u-exchange", "du-du",             "d-normalization",   "d-orthogonality-u",
      "d-orthogonality-v"};
  return labels;
}

void AdhmModel::build_frame() {
  const IndexSpace G = rmx::greek(), L = rmx::latin(), B = big_space(big()), S = gauge_space(opt_.n),
                   One{"one", 1};
  auto reg = std::make_shared<Registry>();
  reg->add_family({"g", {One}, 0, 3, 1});
  reg->add_family({"G", {One}, 0, 4, 1});
  reg->add_family({"u", {S, B}, 0, 10, 10});
  reg->add_family({"du", {S, B}, 1, 15, 10});
  reg->add_family({"bt", {B, L}, 0, 20, 1});
  reg->add_family({"z", {G, L}, 0, 30, 1});
  reg->add_family({"dz", {G, L}, 1, 32, 1});
  reg->add_family({"b", {L, B}, 0, 40, 1});
  reg->add_family({"dut", {B, S}, 1, 45, 10});
  reg->add_family({"ut", {B, S}, 0, 50, 10});
  reg->declare_differential("u", "du");
  reg->declare_differential("ut", "dut");
  reg->declare_differential("z", "dz");
  for (const char* f : {"du", "dut", "dz", "b", "bt"}) reg->declare_closed(f);
  RewriteSystem rs(reg);
  const FrameGens f{*reg};
  const FrameAlgebra fa{f, opt_.n, big(), s_.eps.eps_up, s_.eps.eps_down};
  const int n = opt_.n, nb = big();

  std::vector<FrameRel> rels;
  auto add = [&](const std::string& label, NcPoly r) { rels.push_back({label, std::move(r)}); };
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) add("normalization", fa.normalization(i, k));
  for (int al = 0; al < 2; ++al)
    for (int be = 0; be < 2; ++be) add("gram", fa.gram(al, be));
  add("g-inverse", P1(f.g()) * P1(f.ginv()) - NcPoly(1));
  add("g-inverse", P1(f.ginv()) * P1(f.g()) - NcPoly(1));
  for (int al = 0; al < 2; ++al)
    for (int i = 0; i < n; ++i) {
      add("orthogonality-u", fa.orth_u(i, al));
      add("orthogonality-v", fa.orth_v(al, i));
    }
  for (int I = 0; I < nb; ++I)
    for (int K = 0; K < nb; ++K) add("completeness", fa.completeness(I, K));
  for (Gen h : {f.g(), f.ginv()}) {
    for (int al = 0; al < 2; ++al)
      for (int a = 0; a < 4; ++a)
        for (Gen x : {f.z(al, a), f.dz(al, a)}) add("central", P1(x) * P1(h) - P1(h) * P1(x));
    for (int a = 0; a < 4; ++a)
      for (int I = 0; I < nb; ++I)
        for (Gen x : {f.b(a, I), f.bt(I, a)}) add("central", P1(x) * P1(h) - P1(h) * P1(x));
  }
  const rmx::RMatrix rbig = rmx::build_glq_rmatrix(nb, "big"), rgauge = rmx::build_glq_rmatrix(n, "gauge");
  const ScalarTensor rbig_inv = rmx::inverse_rmatrix(rbig).tensor, rg_inv = rmx::inverse_rmatrix(rgauge).tensor;
  const ScalarTensor& rg = rgauge.tensor;
  for (int I = 0; I < nb; ++I)
    for (int K = 0; K < nb; ++K)
      for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) {
          // u~^I_i (R_G)^{ik}_{lm} du^l_K = du^k_L (R^-1)^{IL}_{KM} u~^M_m
          NcPoly r;
          for (int i = 0; i < n; ++i)
            for (int l = 0; l < n; ++l) r.add_term({f.ut(I, i), f.du(l, K)}, rg({i, k, l, m}));
          for (int Lx = 0; Lx < nb; ++Lx)
            for (int M = 0; M < nb; ++M) r.add_term({f.du(k, Lx), f.ut(M, m)}, -rbig_inv({I, Lx, K, M}));
          add("du-u-exchange", r);
        }
  for (int I = 0; I < nb; ++I)
    for (int K = 0; K < nb; ++K)
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
          // du^i_L du^k_M (R^-1)^{LM}_{IK} = -(R_G^-1)^{ik}_{lm} du^l_I du^m_K
          NcPoly r;
          for (int Lx = 0; Lx < nb; ++Lx)
            for (int M = 0; M < nb; ++M) r.add_term({f.du(i, Lx), f.du(k, M)}, rbig_inv({Lx, M, I, K}));
          for (int l = 0; l < n; ++l)
            for (int m = 0; m < n; ++m) r.add_term({f.du(l, I), f.du(m, K)}, rg_inv({i, k, l, m}));
          add("du-du", r);
        }
  const std::size_t base_count = rels.size();
  for (std::size_t j = 0; j < base_count; ++j) {
    const auto& lab = rels[j].label;
    if (lab == "normalization" || lab == "orthogonality-u" || lab == "orthogonality-v")
      add("d-" + lab, nc::exterior_d_raw(rels[j].rel, rs));
  }
  std::vector<NcPoly> all;
  for (const auto& r : rels) all.push_back(r.rel);
  rs.compile(all);
  frame_ = opt_.q0 ? rs.specialized(*opt_.q0) : rs;
  if (opt_.q0)
    for (auto& r : rels) r.rel = r.rel.specialized(*opt_.q0);
  frame_rels_ = std::move(rels);
}

std::vector<NcPoly> AdhmModel::frame_residual(const std::string& label) const {
  std::vector<NcPoly> out;
  for (const auto& r : frame_rels_)
    if (r.label == label) out.push_back(frame_.normal_form(r.rel));
  if (out.empty()) throw std::invalid_argument("unknown frame relation label '" + label + "'");
  return out;
}

const std::vector<std::string>& AdhmModel::completeness_labels() {
  static const std::vector<std::string> labels{"u-P", "P-ut", "v-P", "v-Q", "P-P", "Q-Q", "P-Q", "Q-P"};
  return labels;
}

std::vector<NcPoly> AdhmModel::completeness_residual(const std::string& which) const {
  const FrameGens f{frame_registry()};
  const FrameAlgebra fa{f, opt_.n, big(), eps_up_, eps_down_};
  const int n = opt_.n, nb = big();
  std::vector<NcPoly> out;
  auto nf = [&](const NcPoly& p) { out.push_back(frame_.normal_form(p)); };
  auto square = [&](auto&& x, auto&& y, bool minus_x) {
    for (int I = 0; I < nb; ++I)
      for (int M = 0; M < nb; ++M) {
        NcPoly s = minus_x ? -x(I, M) : NcPoly();
        for (int K = 0; K < nb; ++K) s += x(I, K) * y(K, M);
        nf(s);
      }
  };
  auto P = [&](int I, int K) { return fa.proj(I, K); };
  auto Q = [&](int I, int K) { return fa.q(I, K); };
  if (which == "u-P") {
    for (int i = 0; i < n; ++i)
      for (int K = 0; K < nb; ++K) {
        NcPoly s = -P1(f.u(i, K));
        for (int I = 0; I < nb; ++I) s += P1(f.u(i, I)) * P(I, K);
        nf(s);
      }
  } else if (which == "P-ut") {
    for (int I = 0; I < nb; ++I)
      for (int k = 0; k < n; ++k) {
        NcPoly s = -P1(f.ut(I, k));
        for (int K = 0; K < nb; ++K) s += P(I, K) * P1(f.ut(K, k));
        nf(s);
      }
  } else if (which == "v-P" || which == "v-Q") {
    for (int al = 0; al < 2; ++al)
      for (int K = 0; K < nb; ++K) {
        NcPoly s = which == "v-Q" ? -fa.v(al, K) : NcPoly();
        for (int I = 0; I < nb; ++I) s += fa.v(al, I) * (which == "v-P" ? P(I, K) : Q(I, K));
        nf(s);
      }
  } else if (which == "P-P") {
    square(P, P, true);
  } else if (which == "Q-Q") {
    square(Q, Q, true);
  } else if (which == "P-Q") {
    square(P, Q, false);
  } else if (which == "Q-P") {
    square(Q, P, false);
  } else {
    throw std::invalid_argument("unknown completeness identity '" + which + "'");
  }
  return out;
}

PolyTensor AdhmModel::curvature_free() const {
  const FrameGens f{frame_registry()};
  const IndexSpace S = gauge_space(opt_.n);
  const int n = opt_.n, nb = big();
  PolyTensor a({up(S), down(S)});
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int I = 0; I < nb; ++I) a({i, k}).add_term({f.du(i, I), f.ut(I, k)}, 1);
  PolyTensor out({up(S), down(S)});
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      NcPoly p = nc::exterior_d_raw(a({i, k}), frame_);
      for (int l = 0; l < n; ++l) p -= a({i, l}) * a({l, k});
      out({i, k}) = p;
    }
  return out;
}

PolyTensor AdhmModel::curvature_expected() const {
  const FrameGens f{frame_registry()};
  const IndexSpace S = gauge_space(opt_.n);
  const int n = opt_.n, nb = big();
  PolyTensor out({up(S), down(S)});
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int I = 0; I < nb; ++I)
        for (int M = 0; M < nb; ++M)
          for (int a = 0; a < 4; ++a)
            for (int bb = 0; bb < 4; ++bb)
              for (int al = 0; al < 2; ++al)
                for (int be = 0; be < 2; ++be) {
                  const auto& e = eps_down_({al, be});
                  if (e.is_zero()) continue;
                  out({i, k}).add_term(
                      {f.u(i, I), f.bt(I, a), f.ginv(), f.dz(al, a), f.dz(be, bb), f.b(bb, M), f.ut(M, k)}, -e);
                }
  return out;
}

namespace {

// The relations entering the curvature certificate.
struct CertificateParts {
  std::vector<std::vector<NcPoly>> d_norm;     // [l][k]
  std::vector<std::vector<NcPoly>> compl_rel;  // [I][K]
  std::vector<std::vector<NcPoly>> d_orth_u;   // [i][al]
  std::vector<std::vector<NcPoly>> d_orth_v;   // [be][k]
  std::vector<std::vector<NcPoly>> dz_g;       // [al][a], dz G - G dz
};

CertificateParts certificate_parts(const FrameAlgebra& fa, const RewriteSystem& rs) {
  const auto& f = fa.f;
  CertificateParts c;
  c.d_norm.assign(fa.n, std::vector<NcPoly>(fa.n));
  c.compl_rel.assign(fa.big, std::vector<NcPoly>(fa.big));
  c.d_orth_u.assign(fa.n, std::vector<NcPoly>(2));
  c.d_orth_v.assign(2, std::vector<NcPoly>(fa.n));
  c.dz_g.assign(2, std::vector<NcPoly>(4));
  for (int l = 0; l < fa.n; ++l)
    for (int k = 0; k < fa.n; ++k) c.d_norm[l][k] = nc::exterior_d_raw(fa.normalization(l, k), rs);
  for (int I = 0; I < fa.big; ++I)
    for (int K = 0; K < fa.big; ++K) c.compl_rel[I][K] = fa.completeness(I, K);
  for (int al = 0; al < 2; ++al)
    for (int i = 0; i < fa.n; ++i) {
      c.d_orth_u[i][al] = nc::exterior_d_raw(fa.orth_u(i, al), rs);
      c.d_orth_v[al][i] = nc::exterior_d_raw(fa.orth_v(al, i), rs);
    }
  for (int al = 0; al < 2; ++al)
    for (int a = 0; a < 4; ++a) c.dz_g[al][a] = P1(f.dz(al, a)) * P1(f.ginv()) - P1(f.ginv()) * P1(f.dz(al, a));
  return c;
}

}  // namespace

PolyTensor AdhmModel::curvature_certificate_residual() const {
  const FrameGens f{frame_registry()};
  const FrameAlgebra fa{f, opt_.n, big(), eps_up_, eps_down_};
  const CertificateParts c = certificate_parts(fa, frame_);
  const int n = opt_.n, nb = big();
  const NcPoly G = P1(f.ginv());
  // x[i][al] = u bt dz^al, y[be][k] = dz^be b u~.
  std::vector<std::vector<NcPoly>> x(n, std::vector<NcPoly>(2)), y(2, std::vector<NcPoly>(n));
  for (int al = 0; al < 2; ++al)
    for (int i = 0; i < n; ++i)
      for (int I = 0; I < nb; ++I)
        for (int a = 0; a < 4; ++a) {
          x[i][al].add_term({f.u(i, I), f.bt(I, a), f.dz(al, a)}, 1);
          y[al][i].add_term({f.dz(al, a), f.b(a, I), f.ut(I, i)}, 1);
        }
  PolyTensor out = curvature_free() - curvature_expected();
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      NcPoly cert;
      for (int l = 0; l < n; ++l)
        for (int I = 0; I < nb; ++I) cert -= NcPoly::word({f.du(i, I), f.ut(I, l)}) * c.d_norm[l][k];
      for (int I = 0; I < nb; ++I)
        for (int K = 0; K < nb; ++K) cert += P1(f.du(i, I)) * c.compl_rel[I][K] * P1(f.dut(K, k));
      for (int al = 0; al < 2; ++al)
        for (int be = 0; be < 2; ++be) {
          const auto& e = eps_down_({al, be});
          if (e.is_zero()) continue;
          NcPoly t = c.d_orth_u[i][al] * G * c.d_orth_v[be][k] - c.d_orth_u[i][al] * G * y[be][k] -
                     x[i][al] * G * c.d_orth_v[be][k];
          for (int I = 0; I < nb; ++I)
            for (int a = 0; a < 4; ++a) t += NcPoly::word({f.u(i, I), f.bt(I, a)}) * c.dz_g[al][a] * y[be][k];
          cert -= e * t;
        }
      out({i, k}) -= cert;
    }
  return out;
}

std::vector<NcPoly> AdhmModel::certificate_relations_residual() const {
  const FrameGens f{frame_registry()};
  const FrameAlgebra fa{f, opt_.n, big(), eps_up_, eps_down_};
  const CertificateParts c = certificate_parts(fa, frame_);
  std::vector<NcPoly> out;
  for (const auto* block : {&c.d_norm, &c.compl_rel, &c.d_orth_u, &c.d_orth_v, &c.dz_g})
    for (const auto& row : *block)
      for (const auto& p : row) out.push_back(frame_.normal_form(p));
  return out;
}

namespace {

struct ExchangeSystem {
  RewriteSystem rs;
  std::vector<NcPoly> rels;
};

ExchangeSystem build_exchange(int n, int nb, const std::optional<Rational>& q0) {
  const IndexSpace B = big_space(nb), S = gauge_space(n);
  auto reg = std::make_shared<Registry>();
  reg->add_family({"u", {S, B}, 0, 10, 1});
  reg->add_family({"du", {S, B}, 1, 15, 1});
  reg->add_family({"ut", {B, S}, 0, 50, 1});
  auto u = [&](int i, int I) { return reg->gen("u", {i, I}); };
  auto du = [&](int i, int I) { return reg->gen("du", {i, I}); };
  auto ut = [&](int I, int i) { return reg->gen("ut", {I, i}); };
  const rmx::RMatrix rbig = rmx::build_glq_rmatrix(nb, "big"), rgauge = rmx::build_glq_rmatrix(n, "gauge");
  const ScalarTensor& R = rbig.tensor;
  const ScalarTensor& RG = rgauge.tensor;
  const ScalarTensor Ri = rmx::inverse_rmatrix(rbig).tensor, RGi = rmx::inverse_rmatrix(rgauge).tensor;
  std::vector<NcPoly> rels;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      NcPoly r = i == k ? NcPoly(-1) : NcPoly();
      for (int I = 0; I < nb; ++I) r.add_term({u(i, I), ut(I, k)}, 1);
      rels.push_back(r);
    }
  for (int I = 0; I < nb; ++I)
    for (int K = 0; K < nb; ++K)
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
          NcPoly uu, tt, tu, tdu, dd;
          for (int l = 0; l < n; ++l)
            for (int m = 0; m < n; ++m) {
              uu.add_term({u(l, I), u(m, K)}, RG({i, k, l, m}));
              tt.add_term({ut(I, l), ut(K, m)}, -RG({m, l, k, i}));
              tu.add_term({ut(I, l), u(m, K)}, RG({l, i, m, k}));
              tdu.add_term({ut(I, l), du(m, K)}, RG({l, i, m, k}));
              dd.add_term({du(l, I), du(m, K)}, RGi({i, k, l, m}));
            }
          for (int L = 0; L < nb; ++L)
            for (int M = 0; M < nb; ++M) {
              uu.add_term({u(i, L), u(k, M)}, -R({L, M, I, K}));
              tt.add_term({ut(L, i), ut(M, k)}, R({K, I, M, L}));
              tu.add_term({u(i, L), ut(M, k)}, -R({I, L, K, M}));
              tdu.add_term({du(i, L), ut(M, k)}, -Ri({I, L, K, M}));
              dd.add_term({du(i, L), du(k, M)}, Ri({L, M, I, K}));
            }
          for (auto* p : {&uu, &tt, &tu, &tdu, &dd}) rels.push_back(std::move(*p));
        }
  RewriteSystem rs(reg);
  rs.compile(rels);
  if (q0) {
    rs = rs.specialized(*q0);
    for (auto& r : rels) r = r.specialized(*q0);
  }
  return {std::move(rs), std::move(rels)};
}

}  // namespace

std::vector<NcPoly> AdhmModel::exchange_residual() const {
  const ExchangeSystem ex = build_exchange(opt_.n, big(), opt_.q0);
  std::vector<NcPoly> out;
  for (const auto& r : ex.rels) out.push_back(ex.rs.normal_form(r));
  return out;
}

bool AdhmModel::exchange_nondegenerate() const {
  const ExchangeSystem ex = build_exchange(opt_.n, big(), opt_.q0);
  return ex.rs.normal_form(NcPoly(1)) == NcPoly(1);
}

}  // namespace qtw::inst

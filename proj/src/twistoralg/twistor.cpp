#include "qtw/twistor.hpp"

#include <algorithm>
#include <compare>
#include <stdexcept>
#include <tuple>

namespace qtw::tw {

using nc::Registry;

const std::array<std::pair<int, int>, 6>& latin_pairs() {
  static const std::array<std::pair<int, int>, 6> pairs{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
  return pairs;
}

int pair_index(int c, int d) {
  const auto& p = latin_pairs();
  for (std::size_t n = 0; n < p.size(); ++n)
    if (p[n].first == c && p[n].second == d) return static_cast<int>(n);
  throw std::out_of_range("latin pair needs c < d");
}

Structure Structure::build() {
  Structure s{rmx::build_slq2_rmatrix(),
              rmx::build_glq_rmatrix(4, "latin"),
              {},
              rmx::build_epsilon2(),
              {},
              {},
              {}};
  s.r_latin_inv = rmx::inverse_rmatrix(s.r_latin);
  s.eps4 = rmx::build_q_epsilon4(s.r_latin);
  std::tie(s.p_minus, s.p_plus) = rmx::projectors(s.r_latin);
  return s;
}

namespace {

IndexSpace inst_space(int k) { return {"inst", k}; }

}  // namespace

std::vector<NcPoly> RelationBuilder::zz(const std::string& zname) const {
  const auto& rg = s.r_greek.tensor;
  const auto& rl = s.r_latin.tensor;
  auto z = [&](int al, int a) { return reg.gen(zname, {al, a}); };
  std::vector<NcPoly> out;
  for (int al = 0; al < 2; ++al)
    for (int be = 0; be < 2; ++be)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          NcPoly r;
          for (int m = 0; m < 2; ++m)
            for (int n = 0; n < 2; ++n) r.add_term({z(m, a), z(n, b)}, rg({al, be, m, n}));
          for (int c = 0; c < 4; ++c)
            for (int d = 0; d < 4; ++d) r.add_term({z(al, c), z(be, d)}, -rl({d, c, b, a}));
          out.push_back(std::move(r));
        }
  return out;
}

std::vector<NcPoly> RelationBuilder::z_dz() const {
  const auto& rg = s.r_greek.tensor;
  const auto& rl = s.r_latin.tensor;
  auto z = [&](int al, int a) { return reg.gen("z", {al, a}); };
  auto dz = [&](int al, int a) { return reg.gen("dz", {al, a}); };
  std::vector<NcPoly> out;
  for (int al = 0; al < 2; ++al)
    for (int be = 0; be < 2; ++be)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          NcPoly r = NcPoly::word({z(al, a), dz(be, b)});
          for (int m = 0; m < 2; ++m)
            for (int n = 0; n < 2; ++n)
              for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) {
                  const auto k = rg({al, be, m, n}) * rl({d, c, b, a});
                  if (!k.is_zero()) r.add_term({dz(m, c), z(n, d)}, -k);
                }
          out.push_back(std::move(r));
        }
  return out;
}

std::vector<NcPoly> RelationBuilder::dz_dz() const {
  const auto& rg = s.r_greek.tensor;
  const auto& rl = s.r_latin.tensor;
  auto dz = [&](int al, int a) { return reg.gen("dz", {al, a}); };
  std::vector<NcPoly> out;
  for (int al = 0; al < 2; ++al)
    for (int be = 0; be < 2; ++be)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          NcPoly r = NcPoly::word({dz(al, a), dz(be, b)});
          for (int m = 0; m < 2; ++m)
            for (int n = 0; n < 2; ++n)
              for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) {
                  const auto k = rg({al, be, m, n}) * rl({d, c, b, a});
                  if (!k.is_zero()) r.add_term({dz(m, c), dz(n, d)}, k);
                }
          out.push_back(std::move(r));
        }
  return out;
}

std::vector<NcPoly> RelationBuilder::dd() const {
  const auto& rg = s.r_greek.tensor;
  const auto& rl = s.r_latin.tensor;
  auto D = [&](int a, int al) { return reg.gen("D", {a, al}); };
  std::vector<NcPoly> out;
  for (int al = 0; al < 2; ++al)
    for (int be = 0; be < 2; ++be)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          NcPoly r;
          for (int c = 0; c < 4; ++c)
            for (int d = 0; d < 4; ++d) r.add_term({D(c, al), D(d, be)}, rl({a, b, c, d}));
          for (int m = 0; m < 2; ++m)
            for (int n = 0; n < 2; ++n) r.add_term({D(a, m), D(b, n)}, -rg({n, m, be, al}));
          out.push_back(std::move(r));
        }
  return out;
}

std::vector<NcPoly> RelationBuilder::d_z() const {
  const auto& rg = s.r_greek.tensor;
  const auto& rl = s.r_latin.tensor;
  auto z = [&](int al, int a) { return reg.gen("z", {al, a}); };
  auto D = [&](int a, int al) { return reg.gen("D", {a, al}); };
  std::vector<NcPoly> out;
  for (int al = 0; al < 2; ++al)
    for (int be = 0; be < 2; ++be)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          NcPoly r = NcPoly::word({D(a, al), z(be, b)});
          if (a == b && al == be) r.add_term({}, -1);
          for (int m = 0; m < 2; ++m)
            for (int n = 0; n < 2; ++n)
              for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) {
                  const auto k = rg({be, m, al, n}) * rl({d, a, c, b});
                  if (!k.is_zero()) r.add_term({z(n, d), D(c, m)}, -k);
                }
          out.push_back(std::move(r));
        }
  return out;
}

PolyTensor RelationBuilder::y() const {
  const IndexSpace L = rmx::latin();
  PolyTensor y({down(L), down(L)});
  auto z = [&](int al, int a) { return reg.gen("z", {al, a}); };
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      NcPoly p;
      for (int al = 0; al < 2; ++al)
        for (int be = 0; be < 2; ++be) p.add_term({z(al, a), z(be, b)}, s.eps.eps_down({al, be}));
      y({a, b}) = std::move(p);
    }
  return y;
}

std::vector<NcPoly> RelationBuilder::eps_zzz() const {
  auto z = [&](int al, int a) { return reg.gen("z", {al, a}); };
  const auto& e = s.eps4.eps;
  std::vector<NcPoly> out;
  for (int a = 0; a < 4; ++a)
    for (int be = 0; be < 2; ++be)
      for (int mu = 0; mu < 2; ++mu)
        for (int nu = 0; nu < 2; ++nu) {
          NcPoly p;
          for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
              for (int d = 0; d < 4; ++d) {
                const auto& k = e({a, b, c, d});
                if (!k.is_zero()) p.add_term({z(be, b), z(mu, c), z(nu, d)}, k);
              }
          out.push_back(std::move(p));
        }
  return out;
}

// ---------------------------------------------------------------------------

TwistorAlgebra::TwistorAlgebra(Options opt)
    : opt_(opt), s_(Structure::build()), reg_(std::make_shared<Registry>()), forms_(reg_), weyl_(reg_) {
  if (opt_.k_inst < 1) throw std::invalid_argument("k_inst must be positive");
  const IndexSpace G = rmx::greek(), L = rmx::latin(), K = inst_space(opt_.k_inst);
  reg_->add_family({"z", {G, L}, 0, 10, 1});
  reg_->add_family({"b", {K, IndexSpace{"pair", 6}}, 0, 20, 1});
  reg_->add_family({"X", {K}, 0, 40, 1});
  reg_->add_family({"D", {L, G}, 0, 50, 1});
  reg_->add_family({"dz", {G, L}, 1, 100, 1});
  reg_->declare_differential("z", "dz");
  reg_->declare_closed("b");
  reg_->declare_closed("dz");
  reg_->declare_custom_differential("X");
  derive_b_sector();
  build_systems();
  build_composites();
  find_d_x_weight();
  specialize_all();
}

Gen TwistorAlgebra::b(int i, int c, int d) const { return reg_->gen("b", {i, pair_index(c, d)}); }

LaurentScalar TwistorAlgebra::sc(const LaurentScalar& x) const { return opt_.q0 ? x.specialize(*opt_.q0) : x; }

ScalarTensor TwistorAlgebra::sc(const ScalarTensor& t) const { return opt_.q0 ? specialize(t, *opt_.q0) : t; }

void TwistorAlgebra::derive_b_sector() {
  const int k = opt_.k_inst;
  const IndexSpace G = rmx::greek(), L = rmx::latin(), K = inst_space(k);
  auto wreg = std::make_shared<Registry>();
  wreg->add_family({"z", {G, L}, 0, 10, 1});
  wreg->add_family({"w", {K, G, L}, 0, 15, 1});
  wreg->add_family({"D", {L, G}, 0, 50, 1});
  wreg->add_family({"dz", {G, L}, 1, 100, 1});
  auto z = [&](int al, int a) { return wreg->gen("z", {al, a}); };
  auto w = [&](int i, int ga, int c) { return wreg->gen("w", {i, ga, c}); };
  auto dz = [&](int al, int a) { return wreg->gen("dz", {al, a}); };
  auto D = [&](int a, int al) { return wreg->gen("D", {a, al}); };
  const auto& rg = s_.r_greek.tensor;
  const auto& rl = s_.r_latin.tensor;
  const auto& rli = s_.r_latin_inv.tensor;

  // w^i obeys the z relations, braids with z and dz through the inverse
  // Latin R-matrix, is closed, and w^i braids with w^j (i < j) as z does.
  std::vector<NcPoly> ww, zw, dzw, dw, wiwj;
  for (int i = 0; i < k; ++i)
    for (int al = 0; al < 2; ++al)
      for (int be = 0; be < 2; ++be)
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) {
            NcPoly r, x, y, u;
            for (int m = 0; m < 2; ++m)
              for (int n = 0; n < 2; ++n) r.add_term({w(i, m, a), w(i, n, b)}, rg({al, be, m, n}));
            x.add_term({z(al, a), w(i, be, b)}, 1);
            y.add_term({dz(al, a), w(i, be, b)}, 1);
            u.add_term({D(a, al), w(i, be, b)}, 1);
            for (int c = 0; c < 4; ++c)
              for (int d = 0; d < 4; ++d) {
                r.add_term({w(i, al, c), w(i, be, d)}, -rl({d, c, b, a}));
                const auto ki = rli({d, c, b, a});
                if (!ki.is_zero()) {
                  x.add_term({w(i, be, c), z(al, d)}, -ki);
                  y.add_term({w(i, be, c), dz(al, d)}, -ki);
                }
                const auto kd = opt_.dw_variant == 0 ? rl({d, a, c, b}) : rl({c, b, d, a});
                if (!kd.is_zero()) u.add_term({w(i, be, d), D(c, al)}, -kd);
              }
            ww.push_back(std::move(r));
            zw.push_back(std::move(x));
            dzw.push_back(std::move(y));
            dw.push_back(std::move(u));
          }
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      for (int al = 0; al < 2; ++al)
        for (int be = 0; be < 2; ++be)
          for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
              NcPoly r = NcPoly::word({w(i, al, a), w(j, be, b)});
              for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) {
                  const auto ki = rli({d, c, b, a});
                  if (!ki.is_zero()) r.add_term({w(j, be, c), w(i, al, d)}, -ki);
                }
              wiwj.push_back(std::move(r));
            }

  const RelationBuilder rb{s_, *wreg};
  RewriteSystem wforms(wreg), wweyl(wreg);
  for (const auto* rels : {&ww, &wiwj}) {
    wforms.compile(*rels);
    wweyl.compile(*rels);
  }
  wforms.compile(rb.zz());
  wforms.compile(zw);
  wforms.compile(dzw);
  wforms.compile(rb.z_dz());
  wforms.compile(rb.dz_dz());
  wweyl.compile(rb.zz());
  wweyl.compile(zw);
  wweyl.compile(rb.dd());
  wweyl.compile(rb.d_z());
  wweyl.compile(dw);
  deriv_.forms_confluence = nc::check_local_confluence(wforms);
  deriv_.weyl_confluence = nc::check_local_confluence(wweyl);
  if (!deriv_.forms_confluence.confluent() || !deriv_.weyl_confluence.confluent())
    throw nc::CompileError("two-twistor realization is not confluent");

  // bw[i][c][d] = eps_{ga de} w^ga_c w^de_d
  std::vector<std::vector<std::vector<NcPoly>>> bw(k, std::vector<std::vector<NcPoly>>(4, std::vector<NcPoly>(4)));
  for (int i = 0; i < k; ++i)
    for (int c = 0; c < 4; ++c)
      for (int d = 0; d < 4; ++d) {
        NcPoly p;
        for (int ga = 0; ga < 2; ++ga)
          for (int de = 0; de < 2; ++de) p.add_term({w(i, ga, c), w(i, de, d)}, s_.eps.eps_down({ga, de}));
        bw[i][c][d] = wforms.normal_form(p);
      }
  {
    auto x = nc::express_in_span(bw[0][1][0], {bw[0][0][1]});
    if (!x) throw nc::CompileError("b_{21} is not proportional to b_{12}");
    deriv_.swap_factor = (*x)[0];
    for (int c = 0; c < 4; ++c) {
      if (!bw[0][c][c].is_zero()) throw nc::CompileError("diagonal b component is nonzero");
      for (int d = c + 1; d < 4; ++d)
        if (!(bw[0][d][c] - deriv_.swap_factor * bw[0][c][d]).is_zero())
          throw nc::CompileError("b components are not uniformly q-antisymmetric");
    }
  }

  // Map w-level generators to the b-level registry.
  auto bz = [&](int al, int a) { return this->z(al, a); };
  auto bdz = [&](int al, int a) { return this->dz(al, a); };
  auto bD = [&](int a, int al) { return this->d(a, al); };
  const auto& pairs = latin_pairs();

  // Exchange of b with a single generator: target = sum x_{h,J} cand(h, J).
  struct Slot {
    Gen wgen, bgen;
  };
  std::vector<Slot> zs, dzs, ds;
  for (int al = 0; al < 2; ++al)
    for (int a = 0; a < 4; ++a) {
      zs.push_back({z(al, a), bz(al, a)});
      dzs.push_back({dz(al, a), bdz(al, a)});
      ds.push_back({D(a, al), bD(a, al)});
    }
  auto derive = [&](const RewriteSystem& sys, const std::vector<Slot>& slots, bool b_first,
                    std::vector<NcPoly>& out) {
    for (int i = 0; i < k; ++i) {
      std::vector<NcPoly> cands;
      for (const auto& h : slots)
        for (const auto& [c, d] : pairs)
          cands.push_back(b_first ? sys.normal_form(NcPoly::gen(h.wgen) * bw[i][c][d])
                                  : sys.normal_form(bw[i][c][d] * NcPoly::gen(h.wgen)));
      for (const auto& g : slots)
        for (const auto& [c, d] : pairs) {
          const NcPoly target = b_first ? sys.normal_form(bw[i][c][d] * NcPoly::gen(g.wgen))
                                        : sys.normal_form(NcPoly::gen(g.wgen) * bw[i][c][d]);
          auto x = nc::express_in_span(target, cands);
          if (!x)
            throw nc::CompileError("b exchange with " + reg_->name(g.bgen) + " is not linear in the b generators");
          NcPoly rel = b_first ? NcPoly::word({b(i, c, d), g.bgen}) : NcPoly::word({g.bgen, b(i, c, d)});
          std::size_t n = 0;
          for (const auto& h : slots)
            for (const auto& [c2, d2] : pairs) {
              const auto& xv = (*x)[n++];
              if (xv.is_zero()) continue;
              rel.add_term(b_first ? Word{h.bgen, b(i, c2, d2)} : Word{b(i, c2, d2), h.bgen}, -xv);
            }
          out.push_back(std::move(rel));
        }
    }
  };
  derive(wforms, zs, true, bz_rels_);
  derive(wforms, dzs, false, dzb_rels_);
  derive(wweyl, ds, false, db_rels_);

  // Quadratic b relations of one label (identical for every label).
  std::vector<NcPoly> prods;
  std::vector<std::pair<int, int>> which;
  for (int I = 0; I < 6; ++I)
    for (int J = 0; J < 6; ++J) {
      prods.push_back(wforms.normal_form(bw[0][pairs[I].first][pairs[I].second] *
                                         bw[0][pairs[J].first][pairs[J].second]));
      which.emplace_back(I, J);
    }
  const auto rels = nc::linear_relations(prods);
  deriv_.bb_relation_count = rels.size();
  RewriteSystem bb_only(reg_);
  std::vector<NcPoly> bb0;
  for (const auto& v : rels) {
    NcPoly r;
    for (std::size_t n = 0; n < v.size(); ++n) {
      if (v[n].is_zero()) continue;
      const auto [I, J] = which[n];
      r.add_term({b(0, pairs[I].first, pairs[I].second), b(0, pairs[J].first, pairs[J].second)}, v[n]);
    }
    bb0.push_back(std::move(r));
  }
  bb_only.compile(bb0);
  // The isotropy relation is the one whose leading word is ordered.
  std::vector<std::pair<Word, NcPoly>> bb_rules;
  for (const auto& [lhs, rhs] : bb_only.rules()) bb_rules.emplace_back(lhs, rhs);
  std::sort(bb_rules.begin(), bb_rules.end(), [&](const auto& x, const auto& y) { return reg_->less(x.first, y.first); });
  int iso = -1;
  for (std::size_t n = 0; n < bb_rules.size(); ++n) {
    const Word& l = bb_rules[n].first;
    if (!reg_->less(Word{l[1]}, Word{l[0]})) {
      if (iso >= 0) throw nc::CompileError("more than one non-exchange b relation");
      iso = static_cast<int>(n);
    }
  }
  if (iso < 0) throw nc::CompileError("no isotropy relation among the b relations");
  auto relabel = [&](const NcPoly& p, int i) {
    NcPoly out;
    for (const auto& [wd, c] : p.terms()) {
      Word v;
      for (Gen g : wd) {
        auto idx = reg_->indices(g);
        idx[0] = i;
        v.push_back(reg_->gen(reg_->family_of(g), idx));
      }
      out.add_term(v, c);
    }
    return out;
  };
  for (std::size_t n = 0; n < bb_rules.size(); ++n) {
    const NcPoly rel = NcPoly::word(bb_rules[n].first) - bb_rules[n].second;
    if (static_cast<int>(n) == iso) {
      isotropy_ = rel;
      if (!opt_.isotropy) continue;
    }
    for (int i = 0; i < k; ++i) bb_rels_.push_back(relabel(rel, i));
  }

  // Distinct labels: b^i b^j (i < j) as a combination of b^j b^i.
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      std::vector<NcPoly> cands;
      for (const auto& [c, d] : pairs)
        for (const auto& [e, f] : pairs) cands.push_back(wforms.normal_form(bw[j][c][d] * bw[i][e][f]));
      for (const auto& [c, d] : pairs)
        for (const auto& [e, f] : pairs) {
          auto x = nc::express_in_span(wforms.normal_form(bw[i][c][d] * bw[j][e][f]), cands);
          if (!x) throw nc::CompileError("b^i b^j is not linear in b^j b^i");
          NcPoly rel = NcPoly::word({b(i, c, d), b(j, e, f)});
          std::size_t n = 0;
          for (const auto& [c2, d2] : pairs)
            for (const auto& [e2, f2] : pairs) {
              const auto& xv = (*x)[n++];
              if (!xv.is_zero()) rel.add_term({b(j, c2, d2), b(i, e2, f2)}, -xv);
            }
          bibj_rels_.push_back(std::move(rel));
        }
    }
}

void TwistorAlgebra::build_systems() {
  const int k = opt_.k_inst;
  const RelationBuilder rb{s_, *reg_};
  const auto& pairs = latin_pairs();
  std::vector<NcPoly> xrel;
  const LaurentScalar qm2 = LaurentScalar::monomial(-2);
  for (int i = 0; i < k; ++i) {
    for (int al = 0; al < 2; ++al)
      for (int a = 0; a < 4; ++a) {
        xrel.push_back(NcPoly::word({x(i), z(al, a)}) - NcPoly::word({z(al, a), x(i)}));
        xrel.push_back(NcPoly::word({dz(al, a), x(i)}) - NcPoly::word({x(i), dz(al, a)}, qm2));
      }
    for (int j = 0; j < k; ++j)
      for (const auto& [c, d] : pairs)
        xrel.push_back(NcPoly::word({x(i), b(j, c, d)}) - NcPoly::word({b(j, c, d), x(i)}));
    for (int j = i + 1; j < k; ++j) xrel.push_back(NcPoly::word({x(j), x(i)}) - NcPoly::word({x(i), x(j)}));
  }
  for (const auto* rels : {&bb_rels_, &bibj_rels_}) {
    forms_.compile(*rels);
    weyl_.compile(*rels);
  }
  const auto zz = rb.zz();
  forms_.compile(zz);
  forms_.compile(bz_rels_);
  forms_.compile(rb.z_dz());
  forms_.compile(dzb_rels_);
  forms_.compile(rb.dz_dz());
  forms_.compile(xrel);
  weyl_.compile(zz);
  weyl_.compile(bz_rels_);
  weyl_.compile(rb.dd());
  weyl_.compile(rb.d_z());
  weyl_.compile(db_rels_);
}

void TwistorAlgebra::build_composites() {
  const int k = opt_.k_inst;
  const IndexSpace L = rmx::latin();
  const RelationBuilder rb{s_, *reg_};
  y_ = nc::normal_form(rb.y(), forms_);
  const auto& e4 = s_.eps4.eps;
  for (int i = 0; i < k; ++i) {
    PolyTensor bt({down(L), down(L)});
    for (const auto& [c, d] : latin_pairs()) {
      bt({c, d}) = NcPoly::gen(b(i, c, d));
      bt({d, c}) = NcPoly::gen(b(i, c, d), deriv_.swap_factor);
    }
    NcPoly xc;
    for (int a = 0; a < 4; ++a)
      for (int bb = 0; bb < 4; ++bb)
        for (int c = 0; c < 4; ++c)
          for (int d = 0; d < 4; ++d) {
            const auto& e = e4({a, bb, c, d});
            if (!e.is_zero()) xc += e * (y_({a, bb}) * bt({c, d}));
          }
    xc_.push_back(forms_.normal_form(xc));
    bt_.push_back(std::move(bt));
    forms_.set_differential(x(i), nc::exterior_d(xc_.back(), forms_));
  }
  forms_ = nc::adjoin_inverse(forms_, "X", "Xinv", {{"z", 0}, {"b", 0}, {"dz", 2}, {"X", 0}}, 45);
}

void TwistorAlgebra::find_d_x_weight() {
  const int k = opt_.k_inst;
  const int fD = reg_->family_id("D");
  d_x_.assign(k, std::vector<std::vector<NcPoly>>(4, std::vector<NcPoly>(2)));
  std::optional<int> found;
  for (int m = -4; m <= 4 && !found; m += 2) {
    bool ok = true;
    for (int i = 0; i < k && ok; ++i)
      for (int a = 0; a < 4 && ok; ++a)
        for (int al = 0; al < 2 && ok; ++al) {
          const NcPoly p = weyl_.normal_form(NcPoly::gen(d(a, al)) * xc_[i]);
          NcPoly fpart, rest;
          for (const auto& [wd, c] : p.terms()) {
            if (!wd.empty() && reg_->family_of(wd.back()) == fD)
              rest.add_term(wd, c);
            else
              fpart.add_term(wd, c);
          }
          const NcPoly diff =
              weyl_.normal_form(rest - LaurentScalar::monomial(m) * (xc_[i] * NcPoly::gen(d(a, al))));
          if (!diff.is_zero()) ok = false;
          d_x_[i][a][al] = fpart;
        }
    if (ok) found = m;
  }
  if (!found) throw nc::CompileError("derivatives do not q-commute with the composite X");
  d_x_weight_ = *found;
}

void TwistorAlgebra::specialize_all() {
  eps_up_ = s_.eps.eps_up;
  eps_down_ = s_.eps.eps_down;
  eps4_ = s_.eps4.eps;
  p_minus_ = s_.p_minus;
  p_plus_ = s_.p_plus;
  r_greek_ = s_.r_greek.tensor;
  if (!opt_.q0) return;
  const Rational q0 = *opt_.q0;
  for (auto* t : {&eps_up_, &eps_down_, &eps4_, &p_minus_, &p_plus_, &r_greek_}) *t = specialize(*t, q0);
  forms_ = forms_.specialized(q0);
  weyl_ = weyl_.specialized(q0);
  auto sp = [&](NcPoly& p) { p = p.specialized(q0); };
  for (auto& p : y_.data()) sp(p);
  for (auto& t : bt_)
    for (auto& p : t.data()) sp(p);
  for (auto& p : xc_) sp(p);
  for (auto& v : d_x_)
    for (auto& u : v)
      for (auto& p : u) sp(p);
  for (auto* v : {&bz_rels_, &dzb_rels_, &db_rels_, &bb_rels_, &bibj_rels_})
    for (auto& p : *v) sp(p);
  sp(isotropy_);
}

NcPoly TwistorAlgebra::isotropy(int i) const {
  NcPoly p;
  const auto& bt = b_tensor(i);
  for (int a = 0; a < 4; ++a)
    for (int bb = 0; bb < 4; ++bb)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          const auto& e = eps4_({a, bb, c, d});
          if (!e.is_zero()) p += e * (bt({a, bb}) * bt({c, d}));
        }
  return forms_.normal_form(p);
}

NcPoly TwistorAlgebra::act(Gen dgen, const Word& w, std::size_t pos) const {
  if (pos == w.size()) return {};
  Word key{dgen};
  key.insert(key.end(), w.begin() + static_cast<std::ptrdiff_t>(pos), w.end());
  if (auto it = act_cache_.find(key); it != act_cache_.end()) return it->second;

  const Gen g = w[pos];
  const std::string& fam = reg_->info(g).name;
  const Word rest(w.begin() + static_cast<std::ptrdiff_t>(pos + 1), w.end());
  const NcPoly rest_p = NcPoly::word(rest);
  const int fD = reg_->family_id("D");
  NcPoly out;
  if (fam == "z" || fam == "b") {
    const NcPoly moved = weyl_.normal_form(Word{dgen, g});
    for (const auto& [tw, c] : moved.terms()) {
      if (tw.empty() || reg_->family_of(tw.back()) != fD) {
        out += c * (NcPoly::word(tw) * rest_p);
      } else {
        const Word prefix(tw.begin(), tw.end() - 1);
        out += c * (NcPoly::word(prefix) * act(tw.back(), rest, 0));
      }
    }
  } else if (fam == "X" || fam == "Xinv") {
    const int i = reg_->indices(g)[0];
    const auto di = reg_->indices(dgen);
    const NcPoly& f = d_x_[i][di[0]][di[1]];
    const LaurentScalar m = sc(LaurentScalar::monomial(fam == "X" ? d_x_weight_ : -d_x_weight_));
    if (fam == "X") {
      out += f * rest_p;
    } else {
      const NcPoly xi = NcPoly::gen(g);
      out -= m * (xi * f * xi * rest_p);
    }
    out += m * (NcPoly::gen(g) * act(dgen, rest, 0));
  } else {
    throw std::invalid_argument("no derivative action declared on " + reg_->name(g));
  }
  out = forms_.normal_form(out);
  act_cache_.emplace(std::move(key), out);
  return out;
}

NcPoly TwistorAlgebra::partial(int a, int al, const NcPoly& p) const {
  NcPoly out;
  const Gen dg = d(a, al);
  for (const auto& [w, c] : p.terms()) out += c * act(dg, w, 0);
  return out;
}

PolyTensor TwistorAlgebra::laplace(const NcPoly& p) const {
  const IndexSpace L = rmx::latin();
  PolyTensor out({up(L), up(L)});
  const LaurentScalar pref = sc(LaurentScalar(1).div_q_int2());
  std::vector<std::vector<NcPoly>> first(4, std::vector<NcPoly>(2));
  for (int a = 0; a < 4; ++a)
    for (int al = 0; al < 2; ++al) first[a][al] = partial(a, al, p);
  for (int bb = 0; bb < 4; ++bb)
    for (int a = 0; a < 4; ++a) {
      NcPoly acc;
      for (int al = 0; al < 2; ++al)
        for (int be = 0; be < 2; ++be) {
          const auto& e = eps_up_({al, be});
          if (!e.is_zero()) acc += e * partial(bb, be, first[a][al]);
        }
      out({bb, a}) = forms_.normal_form(pref * acc);
    }
  return out;
}

NcPoly TwistorAlgebra::substitute_x(const NcPoly& p) const {
  const int fX = reg_->family_id("X");
  const int fXi = reg_->family_id("Xinv");
  NcPoly out;
  for (const auto& [w, c] : p.terms()) {
    NcPoly term(c);
    Word run;
    for (Gen g : w) {
      const int f = reg_->family_of(g);
      if (f == fXi) throw std::invalid_argument("substitute_x: inverse generator present");
      if (f == fX) {
        term = term * NcPoly::word(run) * xc_[reg_->indices(g)[0]];
        run.clear();
      } else {
        run.push_back(g);
      }
    }
    out += term * NcPoly::word(run);
  }
  return forms_.normal_form(out);
}

NcPoly TwistorAlgebra::resolve(const NcPoly& p) const {
  const int fXi = reg_->family_id("Xinv");
  std::vector<int> power(opt_.k_inst, 0);
  for (const auto& [w, c] : p.terms()) {
    std::vector<int> n(opt_.k_inst, 0);
    for (Gen g : w)
      if (reg_->family_of(g) == fXi) ++n[reg_->indices(g)[0]];
    for (int i = 0; i < opt_.k_inst; ++i) power[i] = std::max(power[i], n[i]);
  }
  NcPoly pre(1);
  for (int i = 0; i < opt_.k_inst; ++i)
    for (int e = 0; e < power[i]; ++e) pre = pre * NcPoly::gen(x(i));
  return substitute_x(forms_.normal_form(pre * p));
}

// ---------------------------------------------------------------------------

std::vector<CommutingBResult> scan_commuting_b() {
  const Structure s = Structure::build();
  std::vector<CommutingBResult> out;
  for (int sw : {-2, 0, 2, 4}) {
    auto reg = std::make_shared<Registry>();
    const IndexSpace G = rmx::greek(), L = rmx::latin();
    reg->add_family({"z", {G, L}, 0, 10, 1});
    reg->add_family({"b", {L, L}, 0, 20, 1});
    reg->add_family({"dz", {G, L}, 1, 100, 1});
    auto bg = [&](int c, int d) { return reg->gen("b", {c, d}); };
    const RelationBuilder rb{s, *reg};
    std::vector<NcPoly> rels;
    const auto& pairs = latin_pairs();
    for (const auto& [c, d] : pairs) {
      for (int al = 0; al < 2; ++al)
        for (int a = 0; a < 4; ++a) {
          const Gen z = reg->gen("z", {al, a}), dz = reg->gen("dz", {al, a});
          rels.push_back(NcPoly::word({bg(c, d), z}) - NcPoly::word({z, bg(c, d)}));
          rels.push_back(NcPoly::word({dz, bg(c, d)}) - NcPoly::word({bg(c, d), dz}, LaurentScalar::monomial(-sw)));
        }
      for (const auto& [e, f] : pairs)
        if (std::pair(e, f) > std::pair(c, d))
          rels.push_back(NcPoly::word({bg(e, f), bg(c, d)}) - NcPoly::word({bg(c, d), bg(e, f)}));
    }
    RewriteSystem rs(reg);
    rs.compile(rb.zz());
    rs.compile(rb.z_dz());
    rs.compile(rb.dz_dz());
    rs.compile(rels);
    const PolyTensor y = nc::normal_form(rb.y(), rs);
    const LaurentScalar anti = -LaurentScalar::monomial(-1);
    NcPoly xc;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (const auto& [c, d] : pairs) {
          const auto& e1 = s.eps4.eps({a, b, c, d});
          const auto& e2 = s.eps4.eps({a, b, d, c});
          const LaurentScalar k = e1 + anti * e2;
          if (!k.is_zero()) xc += k * (y({a, b}) * NcPoly::gen(bg(c, d)));
        }
    xc = rs.normal_form(xc);
    CommutingBResult r{sw, {}, {}};
    for (int al = 0; al < 2; ++al)
      for (int a = 0; a < 4; ++a) {
        const NcPoly z = NcPoly::gen(reg->gen("z", {al, a})), dz = NcPoly::gen(reg->gen("dz", {al, a}));
        if (r.x_z_residual.is_zero()) r.x_z_residual = rs.normal_form(xc * z - z * xc);
        if (r.x_dz_residual.is_zero())
          r.x_dz_residual = rs.normal_form(xc * dz - LaurentScalar::monomial(2) * (dz * xc));
      }
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Symbols of the function sector: y_{cd}, b^i_{cd}, (X^i)^-1.
struct Sym {
  enum Kind { Y, B, XI } kind;
  int i, c, d;
  auto operator<=>(const Sym&) const = default;
};
using SymWord = std::vector<Sym>;
using SymPoly = std::map<SymWord, LaurentScalar>;

void add_to(SymPoly& p, const SymWord& w, const LaurentScalar& c) {
  if (c.is_zero()) return;
  auto [it, ins] = p.try_emplace(w, c);
  if (ins) return;
  it->second += c;
  if (it->second.is_zero()) p.erase(it);
}

}  // namespace

std::string to_string(UpperCalculus::Contraction c) {
  return c == UpperCalculus::Contraction::Literal ? "y_cd*d^dc" : "y_cd*d^cd";
}

namespace {

struct UpperImpl {
  const TwistorAlgebra& alg;
  LaurentScalar lambda;

  // Raised b: (b^i)^{ab} = q^2 lambda D^{ba} X^i, X^i = eps_q^{efcd} y_ef b_cd.
  SymPoly raised_b(int i, int a, int b) const {
    SymPoly out;
    const LaurentScalar pref = alg.sc(LaurentScalar::monomial(2)) * lambda;
    for (int e = 0; e < 4; ++e)
      for (int f = 0; f < 4; ++f) {
        const auto& pm = alg.p_minus()({a, b, f, e});
        if (pm.is_zero()) continue;
        for (int c = 0; c < 4; ++c)
          for (int d = 0; d < 4; ++d) {
            const auto& ep = alg.eps4()({e, f, c, d});
            if (ep.is_zero() || c == d) continue;
            add_to(out, {Sym{Sym::B, i, c, d}}, pref * pm * ep);
          }
      }
    return out;
  }

  // D^{ba} of one symbol.
  SymPoly on_symbol(const Sym& s, int b, int a) const {
    SymPoly out;
    switch (s.kind) {
      case Sym::Y:
        add_to(out, {}, alg.p_minus()({a, b, s.d, s.c}));
        break;
      case Sym::B:
        break;
      case Sym::XI: {
        const LaurentScalar k = -alg.sc(LaurentScalar::monomial(-2));
        for (const auto& [w, c] : raised_b(s.i, a, b)) {
          SymWord v{s, s};
          v.insert(v.end(), w.begin(), w.end());
          add_to(out, v, k * c);
        }
        break;
      }
    }
    return out;
  }

  LaurentScalar twist(const Sym& s) const { return s.kind == Sym::XI ? lambda : LaurentScalar(1); }

  SymPoly partial(const SymPoly& p, int b, int a) const {
    SymPoly out;
    for (const auto& [w, c] : p) {
      LaurentScalar tw(1);
      for (std::size_t n = 0; n < w.size(); ++n) {
        for (const auto& [dw, dc] : on_symbol(w[n], b, a)) {
          SymWord v(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(n));
          v.insert(v.end(), dw.begin(), dw.end());
          v.insert(v.end(), w.begin() + static_cast<std::ptrdiff_t>(n + 1), w.end());
          add_to(out, v, c * tw * dc);
        }
        tw *= twist(w[n]);
      }
    }
    return out;
  }

  NcPoly evaluate(const SymPoly& p) const {
    NcPoly out;
    for (const auto& [w, c] : p) {
      NcPoly t(c);
      for (const auto& s : w) {
        switch (s.kind) {
          case Sym::Y:
            t = t * alg.y()({s.c, s.d});
            break;
          case Sym::B:
            t = t * alg.b_tensor(s.i)({s.c, s.d});
            break;
          case Sym::XI:
            t = t * NcPoly::gen(alg.xinv(s.i));
            break;
        }
      }
      out += t;
    }
    return alg.forms().normal_form(out);
  }
};

}  // namespace

NcPoly UpperCalculus::partial_upper_xinv(int i, int b, int a) const {
  const UpperImpl u{alg, lambda};
  SymPoly p;
  add_to(p, {Sym{Sym::XI, i, 0, 0}}, 1);
  return u.evaluate(u.partial(p, b, a));
}

PolyTensor UpperCalculus::laplace_xinv(int i) const {
  const UpperImpl u{alg, lambda};
  const IndexSpace L = rmx::latin();
  PolyTensor out({up(L), up(L)});
  SymPoly p;
  add_to(p, {Sym{Sym::XI, i, 0, 0}}, 1);
  const LaurentScalar half(Rational(1, 2));
  for (int b = 0; b < 4; ++b)
    for (int a = 0; a < 4; ++a) {
      SymPoly first = u.partial(p, b, a);
      SymPoly acc = first;
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          const SymPoly second = contraction == Contraction::Literal ? u.partial(first, d, c) : u.partial(first, c, d);
          for (const auto& [w, k] : second) {
            SymWord v{Sym{Sym::Y, 0, c, d}};
            v.insert(v.end(), w.begin(), w.end());
            add_to(acc, v, half * k);
          }
        }
      out({b, a}) = u.evaluate(acc);
    }
  return out;
}

}  // namespace qtw::tw

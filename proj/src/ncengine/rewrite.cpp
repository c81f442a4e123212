#include "qtw/rewrite.hpp"

#include <algorithm>
#include <set>

#include "qtw/ratfunc.hpp"

namespace qtw::nc {

namespace {

const std::vector<Word> kNoRules;

Word concat(std::span<const Gen> a, std::span<const Gen> b, std::span<const Gen> c = {}) {
  Word w;
  w.reserve(a.size() + b.size() + c.size());
  w.insert(w.end(), a.begin(), a.end());
  w.insert(w.end(), b.begin(), b.end());
  w.insert(w.end(), c.begin(), c.end());
  return w;
}

}  // namespace

RewriteSystem::RewriteSystem(std::shared_ptr<Registry> reg) : reg_(std::move(reg)) {
  if (!reg_) throw std::invalid_argument("rewrite system needs a registry");
}

void RewriteSystem::add_rule(Word lhs, NcPoly rhs) {
  if (lhs.empty()) throw CompileError("rule with empty left side");
  for (const auto& [w, c] : rhs.terms()) {
    if (!reg_->less(w, lhs))
      throw CompileError("rule " + reg_->render(lhs) + " -> " + render(*reg_, rhs) + " does not decrease the order");
  }
  if (rules_.count(lhs)) throw CompileError("duplicate leading word " + reg_->render(lhs));
  by_first_[lhs.front()].push_back(lhs);
  if (std::find(lengths_.begin(), lengths_.end(), lhs.size()) == lengths_.end()) {
    lengths_.push_back(lhs.size());
    std::sort(lengths_.begin(), lengths_.end());
  }
  rules_.emplace(std::move(lhs), std::move(rhs));
  clear_cache();
}

void RewriteSystem::add_relation(const NcPoly& relation) {
  const NcPoly rel = normal_form(relation);
  if (rel.is_zero()) return;
  auto [lw, lc] = leading_term(*reg_, rel);
  auto inv = lc.inverse();
  if (!inv) throw CompileError("non-invertible pivot " + lc.str() + " on " + reg_->render(lw));
  NcPoly rhs = rel;
  rhs.add_term(lw, -lc);
  add_rule(lw, -(*inv * rhs));
}

void RewriteSystem::compile(const std::vector<NcPoly>& relations) {
  std::vector<NcPoly> rels;
  std::set<Word> words;
  for (const auto& r : relations) {
    NcPoly p = normal_form(r);
    if (p.is_zero()) continue;
    for (const auto& [w, c] : p.terms()) words.insert(w);
    rels.push_back(std::move(p));
  }
  if (rels.empty()) return;
  // Column 0 is the order-maximal word so that pivots solve for leading words.
  std::vector<Word> cols(words.begin(), words.end());
  std::sort(cols.begin(), cols.end(), [&](const Word& a, const Word& b) { return reg_->less(b, a); });
  std::map<Word, std::size_t> col_of;
  for (std::size_t i = 0; i < cols.size(); ++i) col_of.emplace(cols[i], i);
  std::vector<SparseRow> rows;
  for (const auto& p : rels) {
    SparseRow row;
    for (const auto& [w, c] : p.terms()) row.emplace(col_of.at(w), RatFunc(c));
    rows.push_back(std::move(row));
  }
  const auto pivots = rref(rows);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    NcPoly rhs;
    for (const auto& [col, x] : rows[k]) {
      if (col == pivots[k]) continue;
      auto v = x.to_laurent();
      if (!v)
        throw CompileError("non-invertible pivot while solving for " + reg_->render(cols[pivots[k]]) + ": coefficient " +
                           x.str());
      rhs.add_term(cols[col], -*v);
    }
    add_rule(cols[pivots[k]], std::move(rhs));
  }
}

const std::vector<Word>& RewriteSystem::rules_starting_with(Gen g) const {
  auto it = by_first_.find(g);
  return it == by_first_.end() ? kNoRules : it->second;
}

std::optional<RewriteSystem::Match> RewriteSystem::find_redex(const Word& w, Strategy s) const {
  const std::size_t n = w.size();
  auto try_at = [&](std::size_t pos) -> std::optional<Match> {
    auto it = by_first_.find(w[pos]);
    if (it == by_first_.end()) return std::nullopt;
    for (const Word& lhs : it->second) {
      if (pos + lhs.size() > n) continue;
      if (!std::equal(lhs.begin(), lhs.end(), w.begin() + static_cast<std::ptrdiff_t>(pos))) continue;
      auto r = rules_.find(lhs);
      return Match{pos, &r->first, &r->second};
    }
    return std::nullopt;
  };
  if (s == Strategy::Leftmost) {
    for (std::size_t pos = 0; pos < n; ++pos)
      if (auto m = try_at(pos)) return m;
  } else {
    for (std::size_t pos = n; pos-- > 0;)
      if (auto m = try_at(pos)) return m;
  }
  return std::nullopt;
}

bool RewriteSystem::is_irreducible(const Word& w) const { return !find_redex(w, Strategy::Leftmost); }

void RewriteSystem::check_inverse_adjacency(const Word& w) const {
  if (inverses_.empty()) return;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    const int fa = reg_->family_of(w[i]), fb = reg_->family_of(w[i + 1]);
    for (const auto& e : inverses_) {
      auto allowed = [&](int f) { return f == e.family || f == e.inverse_family || e.weights.count(f); };
      if ((fa == e.inverse_family && !allowed(fb)) || (fb == e.inverse_family && !allowed(fa)))
        throw std::logic_error("inverse generator next to a family with no exchange weight in " + reg_->render(w));
    }
  }
}

const NcPoly& RewriteSystem::reduce_word(const Word& w, Strategy s, std::size_t& steps) const {
  auto& cache = cache_[s == Strategy::Leftmost ? 0 : 1];
  if (auto it = cache.find(w); it != cache.end()) return it->second;
  NcPoly result;
  auto m = find_redex(w, s);
  if (!m) {
    check_inverse_adjacency(w);
    result = NcPoly::word(w);
  } else {
    if (++steps > step_limit_)
      throw StepLimitExceeded("normal form exceeded " + std::to_string(step_limit_) + " rewrite steps");
    const std::span<const Gen> all(w);
    const auto prefix = all.subspan(0, m->pos);
    const auto suffix = all.subspan(m->pos + m->lhs->size());
    for (const auto& [rw, c] : m->rhs->terms()) {
      const NcPoly& sub = reduce_word(concat(prefix, rw, suffix), s, steps);
      for (const auto& [sw, sc] : sub.terms()) result.add_term(sw, c * sc);
    }
  }
  return cache.emplace(w, std::move(result)).first->second;
}

NcPoly RewriteSystem::normal_form(const Word& w, Strategy s) const {
  std::size_t steps = 0;
  return reduce_word(w, s, steps);
}

NcPoly RewriteSystem::normal_form(const NcPoly& p, Strategy s) const {
  std::size_t steps = 0;
  NcPoly out;
  for (const auto& [w, c] : p.terms()) {
    const NcPoly& r = reduce_word(w, s, steps);
    for (const auto& [rw, rc] : r.terms()) out.add_term(rw, c * rc);
  }
  return out;
}

RewriteSystem RewriteSystem::specialized(const Rational& q0) const {
  RewriteSystem out(reg_);
  out.by_first_ = by_first_;
  out.lengths_ = lengths_;
  out.inverses_ = inverses_;
  out.step_limit_ = step_limit_;
  for (const auto& [lhs, rhs] : rules_) out.rules_.emplace(lhs, rhs.specialized(q0));
  for (const auto& [g, img] : custom_d_) out.custom_d_.emplace(g, img.specialized(q0));
  return out;
}

void RewriteSystem::set_differential(Gen g, NcPoly image) {
  if (reg_->info(g).diff != DiffKind::Custom)
    throw std::invalid_argument("family of " + reg_->name(g) + " is not declared with a custom differential");
  custom_d_[g] = std::move(image);
}

const NcPoly* RewriteSystem::custom_differential(Gen g) const {
  auto it = custom_d_.find(g);
  return it == custom_d_.end() ? nullptr : &it->second;
}

void RewriteSystem::add_inverse_entry(InverseEntry e) {
  inverses_.push_back(std::move(e));
  clear_cache();
}

void RewriteSystem::clear_cache() const {
  cache_[0].clear();
  cache_[1].clear();
}

ConfluenceReport check_local_confluence(const RewriteSystem& rs, const std::vector<std::string>& families) {
  const Registry& reg = rs.registry();
  std::set<int> keep;
  for (const auto& f : families) keep.insert(reg.family_id(f));
  auto in_scope = [&](const Word& w) {
    if (keep.empty()) return true;
    return std::all_of(w.begin(), w.end(), [&](Gen g) { return keep.count(reg.family_of(g)) > 0; });
  };
  std::vector<const Word*> lhss;
  for (const auto& [lhs, rhs] : rs.rules()) lhss.push_back(&lhs);
  std::sort(lhss.begin(), lhss.end(), [&](const Word* a, const Word* b) { return reg.less(*a, *b); });

  ConfluenceReport rep;
  auto resolve = [&](const Word& word, const NcPoly& path1, const NcPoly& path2) {
    NcPoly diff = rs.normal_form(path1) - rs.normal_form(path2);
    if (!diff.is_zero()) rep.mismatches.push_back({word, std::move(diff)});
  };
  for (const Word* l1p : lhss) {
    const Word& l1 = *l1p;
    const NcPoly& r1 = rs.rules().at(l1);
    for (std::size_t k = 0; k < l1.size(); ++k) {
      for (const Word& l2 : rs.rules_starting_with(l1[k])) {
        const NcPoly& r2 = rs.rules().at(l2);
        const std::size_t rem = l1.size() - k;
        const std::span<const Gen> s1(l1);
        if (l2.size() <= rem) {
          if (k == 0 && l2.size() == l1.size()) continue;
          if (!std::equal(l2.begin(), l2.end(), l1.begin() + static_cast<std::ptrdiff_t>(k))) continue;
          if (!in_scope(l1)) continue;
          ++rep.inclusions_checked;
          const NcPoly p2 = NcPoly::word(Word(s1.begin(), s1.begin() + static_cast<std::ptrdiff_t>(k))) * r2 *
                            NcPoly::word(Word(s1.begin() + static_cast<std::ptrdiff_t>(k + l2.size()), s1.end()));
          resolve(l1, r1, p2);
        } else {
          if (k == 0) continue;
          if (!std::equal(l1.begin() + static_cast<std::ptrdiff_t>(k), l1.end(), l2.begin())) continue;
          const Word tail(l2.begin() + static_cast<std::ptrdiff_t>(rem), l2.end());
          const Word word = concat(l1, tail);
          if (!in_scope(word)) continue;
          ++rep.overlaps_checked;
          const NcPoly p1 = r1 * NcPoly::word(tail);
          const NcPoly p2 = NcPoly::word(Word(l1.begin(), l1.begin() + static_cast<std::ptrdiff_t>(k))) * r2;
          resolve(word, p1, p2);
        }
      }
    }
  }
  return rep;
}

namespace {

NcPoly d_generator(Gen g, const RewriteSystem& rs) {
  const Registry& reg = rs.registry();
  const FamilyInfo& f = reg.info(g);
  switch (f.diff) {
    case DiffKind::Closed:
      return {};
    case DiffKind::Family: {
      const auto idx = reg.indices(g);
      return NcPoly::gen(reg.gen(f.diff_target, idx));
    }
    case DiffKind::Custom:
      if (const NcPoly* img = rs.custom_differential(g)) return *img;
      throw std::logic_error("no differential image supplied for " + reg.name(g));
    case DiffKind::Undeclared:
      break;
  }
  throw std::logic_error("family '" + f.name + "' has undeclared differential behaviour");
}

}  // namespace

NcPoly exterior_d_raw(const NcPoly& p, const RewriteSystem& rs) {
  const Registry& reg = rs.registry();
  NcPoly out;
  for (const auto& [w, c] : p.terms()) {
    int parity = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const NcPoly dg = d_generator(w[i], rs);
      if (!dg.is_zero()) {
        const std::span<const Gen> s(w);
        const LaurentScalar sign = parity % 2 ? -c : c;
        out += sign * (NcPoly::word(Word(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(i))) * dg *
                       NcPoly::word(Word(s.begin() + static_cast<std::ptrdiff_t>(i + 1), s.end())));
      }
      parity += reg.parity(w[i]);
    }
  }
  return out;
}

NcPoly exterior_d(const NcPoly& p, const RewriteSystem& rs) { return rs.normal_form(exterior_d_raw(p, rs)); }

RewriteSystem adjoin_inverse(const RewriteSystem& rs, const std::string& family, const std::string& inverse_name,
                             const std::map<std::string, int>& weights, int precedence) {
  Registry& reg = *rs.registry_ptr();
  const int fx = reg.family_id(family);
  const FamilyInfo fxi = reg.family(fx);
  int fi;
  if (auto existing = reg.find_family(inverse_name)) {
    fi = *existing;
    if (reg.family(fi).spaces != fxi.spaces || reg.family(fi).parity != fxi.parity)
      throw CompileError("family '" + inverse_name + "' exists with a different shape");
  } else {
    fi = reg.add_family({inverse_name, fxi.spaces, fxi.parity, precedence, fxi.weight});
  }
  for (const auto& e : rs.inverses())
    if (e.inverse_family == fi) throw CompileError("inverse family '" + inverse_name + "' already adjoined");

  InverseEntry entry{fx, fi, {}};
  for (const auto& [name, m] : weights) entry.weights[reg.family_id(name)] = m;

  // Verify q-centrality before adding anything.
  for (const auto& [fg, m] : entry.weights) {
    const FamilyInfo& g = reg.family(fg);
    for (std::size_t i = 0; i < fxi.count; ++i) {
      const Gen x = fxi.first + static_cast<Gen>(i);
      for (std::size_t j = 0; j < g.count; ++j) {
        const Gen y = g.first + static_cast<Gen>(j);
        if (y == x) continue;
        const NcPoly diff = NcPoly::word({x, y}) - NcPoly::word({y, x}, LaurentScalar::monomial(m));
        const NcPoly r = rs.normal_form(diff);
        if (!r.is_zero())
          throw CompileError("q-centrality of '" + family + "' fails for family '" + g.name + "' (m = " +
                             std::to_string(m) + "): " + reg.name(x) + "*" + reg.name(y) + " residual " +
                             render(reg, r));
      }
    }
  }

  RewriteSystem out = rs;
  out.add_inverse_entry(entry);
  for (std::size_t i = 0; i < fxi.count; ++i) {
    const Gen x = fxi.first + static_cast<Gen>(i);
    const Gen xi = reg.family(fi).first + static_cast<Gen>(i);
    out.add_rule({x, xi}, NcPoly(1));
    out.add_rule({xi, x}, NcPoly(1));
  }
  for (const auto& [fg, m] : entry.weights) {
    const FamilyInfo& g = reg.family(fg);
    for (std::size_t i = 0; i < fxi.count; ++i) {
      const Gen xi = reg.family(fi).first + static_cast<Gen>(i);
      for (std::size_t j = 0; j < g.count; ++j) {
        const Gen y = g.first + static_cast<Gen>(j);
        if (fg == fx && j == i) continue;
        out.add_relation(NcPoly::word({xi, y}) - NcPoly::word({y, xi}, LaurentScalar::monomial(-m)));
      }
    }
  }
  if (auto it = entry.weights.find(fx); it != entry.weights.end()) {
    for (std::size_t i = 0; i < fxi.count; ++i)
      for (std::size_t j = i + 1; j < fxi.count; ++j) {
        const Gen a = reg.family(fi).first + static_cast<Gen>(i);
        const Gen b = reg.family(fi).first + static_cast<Gen>(j);
        out.add_relation(NcPoly::word({a, b}) - NcPoly::word({b, a}, LaurentScalar::monomial(it->second)));
      }
  }
  if (fxi.diff != DiffKind::Undeclared) {
    reg.declare_custom_differential(inverse_name);
    for (std::size_t i = 0; i < fxi.count; ++i) {
      const Gen x = fxi.first + static_cast<Gen>(i);
      const Gen xi = reg.family(fi).first + static_cast<Gen>(i);
      const NcPoly dx = exterior_d_raw(NcPoly::gen(x), out);
      out.set_differential(xi, -(NcPoly::gen(xi) * dx * NcPoly::gen(xi)));
    }
  }
  return out;
}

RttSystem build_rtt_system(int n) {
  auto reg = std::make_shared<Registry>();
  const IndexSpace s{"gl" + std::to_string(n), n};
  reg->add_family({"T", {s, s}, 0, 0, 1});
  const auto r = rmx::build_glq_rmatrix(n);
  auto t = [&](int i, int j) { return reg->gen("T", {i, j}); };
  std::vector<NcPoly> rels;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          NcPoly rel;
          for (int l = 0; l < n; ++l)
            for (int m = 0; m < n; ++m) {
              rel.add_term({t(l, a), t(m, b)}, r.tensor({i, k, l, m}));
              rel.add_term({t(i, l), t(k, m)}, -r.tensor({l, m, a, b}));
            }
          rels.push_back(std::move(rel));
        }
  RewriteSystem rs(reg);
  rs.compile(rels);
  auto conf = check_local_confluence(rs);
  return {std::move(rs), std::move(conf)};
}

namespace {

// Rows indexed by word, columns by polynomial.
std::vector<SparseRow> word_rows(const std::vector<const NcPoly*>& cols) {
  std::map<Word, SparseRow> by_word;
  for (std::size_t k = 0; k < cols.size(); ++k)
    for (const auto& [w, c] : cols[k]->terms()) by_word[w].emplace(k, RatFunc(c));
  std::vector<SparseRow> rows;
  rows.reserve(by_word.size());
  for (auto& [w, r] : by_word) rows.push_back(std::move(r));
  return rows;
}

}  // namespace

std::optional<std::vector<LaurentScalar>> express_in_span(const NcPoly& target, const std::vector<NcPoly>& candidates) {
  std::vector<const NcPoly*> cols;
  for (const auto& c : candidates) cols.push_back(&c);
  cols.push_back(&target);
  auto rows = word_rows(cols);
  const auto pivots = rref(rows);
  const std::size_t n = candidates.size();
  std::vector<LaurentScalar> x(n);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (pivots[k] == n) return std::nullopt;
    auto it = rows[k].find(n);
    if (it == rows[k].end()) continue;
    auto v = it->second.to_laurent();
    if (!v) return std::nullopt;
    x[pivots[k]] = *v;
  }
  return x;
}

std::vector<std::vector<LaurentScalar>> linear_relations(const std::vector<NcPoly>& polys) {
  std::vector<const NcPoly*> cols;
  for (const auto& p : polys) cols.push_back(&p);
  auto rows = word_rows(cols);
  const auto pivots = rref(rows);
  std::vector<bool> is_pivot(polys.size());
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::vector<LaurentScalar>> out;
  for (std::size_t f = 0; f < polys.size(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<RatFunc> x(polys.size());
    x[f] = RatFunc(LaurentScalar(1));
    for (std::size_t k = 0; k < rows.size(); ++k) {
      auto it = rows[k].find(f);
      if (it != rows[k].end()) x[pivots[k]] = -it->second;
    }
    // Coefficients must stay in the Laurent ring.
    std::vector<LaurentScalar> v(polys.size());
    bool ok = true;
    for (std::size_t k = 0; k < x.size(); ++k) {
      auto l = x[k].to_laurent();
      if (!l) {
        ok = false;
        break;
      }
      v[k] = *l;
    }
    if (!ok) throw CompileError("linear relation with coefficients outside the Laurent ring");
    out.push_back(std::move(v));
  }
  return out;
}

PolyTensor normal_form(const PolyTensor& t, const RewriteSystem& rs) {
  return t.map([&](const NcPoly& p) { return rs.normal_form(p); });
}

PolyTensor lift(const ScalarTensor& t) {
  return t.map([](const LaurentScalar& x) { return NcPoly(x); });
}

}  // namespace qtw::nc

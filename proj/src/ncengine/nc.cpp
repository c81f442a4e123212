#include "qtw/nc.hpp"

#include <algorithm>
#include <stdexcept>

namespace qtw::nc {

int Registry::add_family(FamilySpec spec) {
  if (find_family(spec.name)) throw std::invalid_argument("duplicate generator family '" + spec.name + "'");
  if (spec.parity != 0 && spec.parity != 1) throw std::invalid_argument("family parity must be 0 or 1");
  if (spec.weight < 1) throw std::invalid_argument("family weight must be positive");
  FamilyInfo info;
  static_cast<FamilySpec&>(info) = std::move(spec);
  info.id = static_cast<int>(families_.size());
  info.first = static_cast<Gen>(owner_.size());
  info.count = 1;
  for (const auto& s : info.spaces) info.count *= static_cast<std::size_t>(s.dim);
  owner_.insert(owner_.end(), info.count, info.id);
  families_.push_back(std::move(info));
  rebuild_keys();
  return families_.back().id;
}

void Registry::rebuild_keys() {
  // Key layout: precedence (biased to stay positive), family id, flat index.
  keys_.resize(owner_.size());
  for (const auto& f : families_) {
    const auto prec = static_cast<std::uint64_t>(f.precedence + (1 << 15)) & 0xffff;
    for (std::size_t i = 0; i < f.count; ++i)
      keys_[f.first + i] = (prec << 48) | (static_cast<std::uint64_t>(f.id) << 32) | i;
  }
}

std::optional<int> Registry::find_family(std::string_view name) const {
  for (const auto& f : families_)
    if (f.name == name) return f.id;
  return std::nullopt;
}

int Registry::family_id(std::string_view name) const {
  if (auto f = find_family(name)) return *f;
  throw std::out_of_range("unknown generator family '" + std::string(name) + "'");
}

Gen Registry::gen(int family_id, std::span<const int> idx) const {
  const FamilyInfo& f = family(family_id);
  if (idx.size() != f.spaces.size())
    throw std::out_of_range("family '" + f.name + "' takes " + std::to_string(f.spaces.size()) + " indices");
  std::size_t flat = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] < 0 || idx[k] >= f.spaces[k].dim)
      throw std::out_of_range("index " + std::to_string(idx[k] + 1) + " out of range for '" + f.name + "' (" +
                              f.spaces[k].name + " has dim " + std::to_string(f.spaces[k].dim) + ")");
    flat = flat * static_cast<std::size_t>(f.spaces[k].dim) + static_cast<std::size_t>(idx[k]);
  }
  return f.first + static_cast<Gen>(flat);
}

Gen Registry::gen(std::string_view family_name, std::initializer_list<int> idx) const {
  return gen(family_id(family_name), std::span<const int>(idx.begin(), idx.size()));
}

std::vector<int> Registry::indices(Gen g) const {
  const FamilyInfo& f = info(g);
  std::size_t flat = g - f.first;
  std::vector<int> idx(f.spaces.size());
  for (std::size_t k = f.spaces.size(); k-- > 0;) {
    const auto d = static_cast<std::size_t>(f.spaces[k].dim);
    idx[k] = static_cast<int>(flat % d);
    flat /= d;
  }
  return idx;
}

void Registry::declare_closed(std::string_view family_name) {
  auto& f = families_[static_cast<std::size_t>(family_id(family_name))];
  f.diff = DiffKind::Closed;
}

void Registry::declare_differential(std::string_view family_name, std::string_view target) {
  auto& f = families_[static_cast<std::size_t>(family_id(family_name))];
  const auto& t = family(family_id(target));
  if (t.parity != f.parity + 1) throw std::invalid_argument("differential image must have parity one higher");
  if (t.spaces != f.spaces) throw std::invalid_argument("differential image must have identical index spaces");
  f.diff = DiffKind::Family;
  f.diff_target = t.id;
}

void Registry::declare_custom_differential(std::string_view family_name) {
  families_[static_cast<std::size_t>(family_id(family_name))].diff = DiffKind::Custom;
}

int Registry::parity(const Word& w) const {
  int p = 0;
  for (Gen g : w) p += parity(g);
  return p;
}

int Registry::weight(const Word& w) const {
  int s = 0;
  for (Gen g : w) s += info(g).weight;
  return s;
}

bool Registry::less(const Word& a, const Word& b) const {
  const int wa = weight(a), wb = weight(b);
  if (wa != wb) return wa < wb;
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto ka = key(a[i]), kb = key(b[i]);
    if (ka != kb) return ka < kb;
  }
  return false;
}

std::string Registry::name(Gen g) const {
  const FamilyInfo& f = info(g);
  if (f.spaces.empty()) return f.name;
  std::string s = f.name + "[";
  const auto idx = indices(g);
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(idx[k] + 1);
  }
  return s + "]";
}

std::string Registry::render(const Word& w) const {
  if (w.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += "*";
    s += name(w[i]);
  }
  return s;
}

NcPoly::NcPoly(const LaurentScalar& c) {
  if (!c.is_zero()) terms_.emplace(Word{}, c);
}

NcPoly NcPoly::word(Word w, const LaurentScalar& c) {
  NcPoly p;
  if (!c.is_zero()) p.terms_.emplace(std::move(w), c);
  return p;
}

void NcPoly::add_term(const Word& w, const LaurentScalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

LaurentScalar NcPoly::coeff(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? LaurentScalar{} : it->second;
}

NcPoly& NcPoly::operator+=(const NcPoly& o) {
  for (const auto& [w, c] : o.terms_) add_term(w, c);
  return *this;
}

NcPoly& NcPoly::operator-=(const NcPoly& o) {
  for (const auto& [w, c] : o.terms_) add_term(w, -c);
  return *this;
}

NcPoly operator*(const NcPoly& a, const NcPoly& b) {
  NcPoly out;
  Word w;
  for (const auto& [wa, ca] : a.terms_) {
    for (const auto& [wb, cb] : b.terms_) {
      w.assign(wa.begin(), wa.end());
      w.insert(w.end(), wb.begin(), wb.end());
      out.add_term(w, ca * cb);
    }
  }
  return out;
}

NcPoly operator*(const LaurentScalar& s, const NcPoly& p) {
  NcPoly out;
  if (s.is_zero()) return out;
  for (const auto& [w, c] : p.terms_) out.add_term(w, s * c);
  return out;
}

NcPoly NcPoly::operator-() const { return LaurentScalar(-1) * *this; }

NcPoly NcPoly::specialized(const Rational& q0) const {
  NcPoly out;
  for (const auto& [w, c] : terms_) out.add_term(w, c.specialize(q0));
  return out;
}

std::size_t NcPoly::max_length() const {
  std::size_t n = 0;
  for (const auto& [w, c] : terms_) n = std::max(n, w.size());
  return n;
}

namespace {

std::string render_coeff(const LaurentScalar& c) {
  const bool simple = c.denominator_power() == 0 && c.terms().size() == 1;
  const std::string s = c.str();
  return simple ? s : "(" + s + ")";
}

}  // namespace

std::string render(const Registry& reg, const NcPoly& p) {
  if (p.is_zero()) return "0";
  std::vector<const NcPoly::Terms::value_type*> terms;
  for (const auto& t : p.terms()) terms.push_back(&t);
  std::sort(terms.begin(), terms.end(), [&](auto* a, auto* b) { return reg.less(a->first, b->first); });
  std::string out;
  for (const auto* t : terms) {
    const Word& w = t->first;
    const LaurentScalar& c = t->second;
    std::string term;
    if (w.empty()) {
      term = render_coeff(c);
    } else if (c == LaurentScalar(1)) {
      term = reg.render(w);
    } else if (c == LaurentScalar(-1)) {
      term = "-" + reg.render(w);
    } else {
      term = render_coeff(c) + "*" + reg.render(w);
    }
    if (out.empty()) {
      out = term;
    } else if (term[0] == '-') {
      out += " - " + term.substr(1);
    } else {
      out += " + " + term;
    }
  }
  return out;
}

std::pair<Word, LaurentScalar> leading_term(const Registry& reg, const NcPoly& p) {
  if (p.is_zero()) throw std::invalid_argument("leading term of zero polynomial");
  auto best = p.terms().begin();
  for (auto it = p.terms().begin(); it != p.terms().end(); ++it)
    if (reg.less(best->first, it->first)) best = it;
  return {best->first, best->second};
}

}  // namespace qtw::nc

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "qtw/laurent.hpp"
#include "qtw/tensor.hpp"

namespace qtw::nc {

using Gen = std::uint32_t;
using Word = std::vector<Gen>;

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept {
    std::size_t h = w.size();
    for (Gen g : w) h = h * 0x100000001b3ULL ^ (g + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
    return h;
  }
};

/// How d acts on a family.
enum class DiffKind {
  Undeclared,  // d is an error
  Closed,      // d g = 0
  Family,      // d g = the generator of the target family with the same indices
  Custom,      // d g supplied per generator by the rewrite system
};

struct FamilySpec {
  std::string name;
  std::vector<IndexSpace> spaces;
  int parity = 0;      // form degree of each generator, 0 or 1
  int precedence = 0;  // position in the monomial order (smaller = earlier)
  int weight = 1;      // contribution to the graded length of a word
};

struct FamilyInfo : FamilySpec {
  int id = 0;
  Gen first = 0;
  std::size_t count = 0;
  DiffKind diff = DiffKind::Undeclared;
  int diff_target = -1;
};

/// Append-only table of generator families. Generators of a family occupy a
/// contiguous id range in row-major order of their (zero-based) indices.
class Registry {
 public:
  int add_family(FamilySpec spec);
  std::optional<int> find_family(std::string_view name) const;
  int family_id(std::string_view name) const;  // throws std::out_of_range
  const FamilyInfo& family(int id) const { return families_.at(static_cast<std::size_t>(id)); }
  const std::vector<FamilyInfo>& families() const { return families_; }

  int family_of(Gen g) const { return owner_.at(g); }
  const FamilyInfo& info(Gen g) const { return family(family_of(g)); }
  Gen gen(int family, std::span<const int> idx) const;
  Gen gen(std::string_view family, std::initializer_list<int> idx) const;
  std::vector<int> indices(Gen g) const;
  std::size_t size() const { return owner_.size(); }

  void declare_closed(std::string_view family);
  void declare_differential(std::string_view family, std::string_view target);
  void declare_custom_differential(std::string_view family);

  int parity(Gen g) const { return info(g).parity; }
  int parity(const Word& w) const;
  int weight(const Word& w) const;

  /// Monomial order: weighted length, then lexicographic by (family
  /// precedence, family id, index tuple) letter by letter.
  bool less(const Word& a, const Word& b) const;

  /// "z[1,3]" with one-based indices; bare name for index-free families.
  std::string name(Gen g) const;
  std::string render(const Word& w) const;

 private:
  std::uint64_t key(Gen g) const { return keys_[g]; }
  void rebuild_keys();

  std::vector<FamilyInfo> families_;
  std::vector<int> owner_;
  std::vector<std::uint64_t> keys_;
};

/// Finite linear combination of words with nonzero Laurent coefficients.
class NcPoly {
 public:
  using Terms = std::map<Word, LaurentScalar>;

  NcPoly() = default;
  NcPoly(const LaurentScalar& c);  // NOLINT(google-explicit-constructor)
  NcPoly(long c) : NcPoly(LaurentScalar(c)) {}  // NOLINT(google-explicit-constructor)
  static NcPoly word(Word w, const LaurentScalar& c = 1);
  static NcPoly gen(Gen g, const LaurentScalar& c = 1) { return word({g}, c); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  void add_term(const Word& w, const LaurentScalar& c);
  /// Coefficient of w (zero if absent).
  LaurentScalar coeff(const Word& w) const;

  NcPoly& operator+=(const NcPoly& o);
  NcPoly& operator-=(const NcPoly& o);
  friend NcPoly operator+(NcPoly a, const NcPoly& b) { return a += b; }
  friend NcPoly operator-(NcPoly a, const NcPoly& b) { return a -= b; }
  friend NcPoly operator*(const NcPoly& a, const NcPoly& b);
  friend NcPoly operator*(const LaurentScalar& s, const NcPoly& p);
  NcPoly operator-() const;
  friend bool operator==(const NcPoly& a, const NcPoly& b) { return a.terms_ == b.terms_; }

  NcPoly specialized(const Rational& q0) const;
  /// Largest word length among the terms (0 for constants and zero).
  std::size_t max_length() const;

 private:
  Terms terms_;
};

/// Canonical text: terms in ascending monomial order, "coef*w1*w2".
std::string render(const Registry& reg, const NcPoly& p);
/// Term with the largest word in the monomial order; p must be nonzero.
std::pair<Word, LaurentScalar> leading_term(const Registry& reg, const NcPoly& p);

/// Tensor whose entries are noncommutative polynomials.
using PolyTensor = Tensor<NcPoly>;

}  // namespace qtw::nc

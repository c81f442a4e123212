#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "qtw/nc.hpp"
#include "qtw/rmx.hpp"

namespace qtw::nc {

class CompileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StepLimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Strategy { Leftmost, Rightmost };

/// q-exchange data for an adjoined inverse family: x g = q^m g x.
struct InverseEntry {
  int family = -1;
  int inverse_family = -1;
  std::map<int, int> weights;  // family id -> m
};

/// Directed rules lhs -> rhs with every rhs word strictly below lhs in the
/// registry's monomial order. Reductions memoize word normal forms, so a
/// system must not be shared across threads while reducing.
class RewriteSystem {
 public:
  explicit RewriteSystem(std::shared_ptr<Registry> reg);

  const Registry& registry() const { return *reg_; }
  const std::shared_ptr<Registry>& registry_ptr() const { return reg_; }

  /// Adds one rule; throws CompileError on a duplicate lhs or a rhs word
  /// that does not precede lhs.
  void add_rule(Word lhs, NcPoly rhs);
  /// Orients a relation by its leading word. The leading coefficient must
  /// be a unit (c q^e (q + q^-1)^m).
  void add_relation(const NcPoly& relation);
  /// Gaussian elimination over Q(q) on the span of the relations, solving
  /// each pivot for its order-maximal word.
  void compile(const std::vector<NcPoly>& relations);

  const std::unordered_map<Word, NcPoly, WordHash>& rules() const { return rules_; }
  /// Rules whose left side starts with g.
  const std::vector<Word>& rules_starting_with(Gen g) const;

  NcPoly normal_form(const NcPoly& p, Strategy s = Strategy::Leftmost) const;
  NcPoly normal_form(const Word& w, Strategy s = Strategy::Leftmost) const;
  bool reduces_to_zero(const NcPoly& p) const { return normal_form(p).is_zero(); }
  bool is_irreducible(const Word& w) const;

  void set_step_limit(std::size_t n) { step_limit_ = n; }

  /// Copy with every rule coefficient evaluated at q = q0.
  RewriteSystem specialized(const Rational& q0) const;

  void set_differential(Gen g, NcPoly image);
  const NcPoly* custom_differential(Gen g) const;

  const std::vector<InverseEntry>& inverses() const { return inverses_; }
  void add_inverse_entry(InverseEntry e);

  void clear_cache() const;

 private:
  struct Match {
    std::size_t pos;
    const Word* lhs;
    const NcPoly* rhs;
  };
  std::optional<Match> find_redex(const Word& w, Strategy s) const;
  const NcPoly& reduce_word(const Word& w, Strategy s, std::size_t& steps) const;
  void check_inverse_adjacency(const Word& w) const;

  std::shared_ptr<Registry> reg_;
  std::unordered_map<Word, NcPoly, WordHash> rules_;
  std::unordered_map<Gen, std::vector<Word>> by_first_;
  std::vector<std::size_t> lengths_;
  std::unordered_map<Gen, NcPoly> custom_d_;
  std::vector<InverseEntry> inverses_;
  std::size_t step_limit_ = 10'000'000;
  mutable std::unordered_map<Word, NcPoly, WordHash> cache_[2];
};

struct Ambiguity {
  Word word;
  NcPoly difference;
};

struct ConfluenceReport {
  std::size_t overlaps_checked = 0;
  std::size_t inclusions_checked = 0;
  std::vector<Ambiguity> mismatches;
  bool confluent() const { return mismatches.empty(); }
};

/// Diamond-lemma check: every overlap and inclusion of rule left sides is
/// resolved both ways and compared. When families is nonempty only
/// ambiguities whose words lie entirely in those families are examined.
ConfluenceReport check_local_confluence(const RewriteSystem& rs, const std::vector<std::string>& families = {});

/// Adds the family `inverse_name` (same index spaces as `family`) with
/// x x^-1 -> 1, x^-1 x -> 1 and the exchange x^-1 g = q^-m g x^-1 for every
/// weighted family. The q-centrality x g = q^m g x is verified first for
/// every generator of every weighted family; failure throws CompileError
/// naming the family. Generators of `family` itself are weighted by
/// weights[family] (distinct labels).
RewriteSystem adjoin_inverse(const RewriteSystem& rs, const std::string& family, const std::string& inverse_name,
                             const std::map<std::string, int>& weights, int precedence);

/// Graded Leibniz extension of the declared differentials, then normal form.
NcPoly exterior_d(const NcPoly& p, const RewriteSystem& rs);
/// Same without the final normal form.
NcPoly exterior_d_raw(const NcPoly& p, const RewriteSystem& rs);

struct RttSystem {
  RewriteSystem rs;
  ConfluenceReport confluence;
};

/// Quantum matrix algebra R T1 T2 = T1 T2 R for GL_q(n), family "T".
RttSystem build_rtt_system(int n);

/// Coefficients x with target = sum_k x_k candidates[k], solved over Q(q)
/// (free unknowns set to zero). nullopt when target is outside the span or a
/// coefficient leaves the Laurent ring.
std::optional<std::vector<LaurentScalar>> express_in_span(const NcPoly& target, const std::vector<NcPoly>& candidates);
/// Basis of the linear relations sum_k x_k polys[k] = 0.
std::vector<std::vector<LaurentScalar>> linear_relations(const std::vector<NcPoly>& polys);

/// Entry-wise normal form of a tensor of polynomials.
PolyTensor normal_form(const PolyTensor& t, const RewriteSystem& rs);
/// Lifts a scalar tensor to constant polynomials.
PolyTensor lift(const ScalarTensor& t);

}  // namespace qtw::nc

#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qtw/rewrite.hpp"
#include "qtw/rmx.hpp"

namespace qtw::tw {

using nc::Gen;
using nc::NcPoly;
using nc::PolyTensor;
using nc::RewriteSystem;
using nc::Word;

/// Latin index pairs (c, d) with c < d, in lexicographic order.
const std::array<std::pair<int, int>, 6>& latin_pairs();

/// Position of (c, d), c < d, in latin_pairs().
int pair_index(int c, int d);

/// Scalar structure constants shared by every twistor construction.
struct Structure {
  rmx::RMatrix r_greek;      // SL_q(2) on Greek indices
  rmx::RMatrix r_latin;      // GL_q(4) on Latin indices
  rmx::RMatrix r_latin_inv;  // inverse of r_latin
  rmx::EpsilonPair eps;      // Greek epsilon pair
  rmx::Eps4Solution eps4;    // q-epsilon on Latin indices
  ScalarTensor p_minus, p_plus;

  static Structure build();
};

/// Quadratic relation families of the twistor algebra, written for the
/// generator layout of a registry holding z (greek, latin), dz (greek,
/// latin) and D (latin, greek). Families absent from the registry must not
/// be requested.
struct RelationBuilder {
  const Structure& s;
  const nc::Registry& reg;

  /// R z z = z z R.
  std::vector<NcPoly> zz(const std::string& z = "z") const;
  /// z dz exchange.
  std::vector<NcPoly> z_dz() const;
  /// dz dz exchange.
  std::vector<NcPoly> dz_dz() const;
  /// Derivative exchange D D.
  std::vector<NcPoly> dd() const;
  /// Inhomogeneous D z exchange.
  std::vector<NcPoly> d_z() const;
  /// y_{ab} = eps_{al be} z^al_a z^be_b (unreduced).
  PolyTensor y() const;
  /// eps_q^{abcd} z^be_b z^mu_c z^nu_d for every free (a, be, mu, nu).
  std::vector<NcPoly> eps_zzz() const;
};

/// Result of deriving the b-sector exchange relations from the two-twistor
/// realization b^i_{cd} = eps_{ga de} w^ga_c w^de_d.
struct BSectorDerivation {
  nc::ConfluenceReport forms_confluence;  // z, w, dz
  nc::ConfluenceReport weyl_confluence;   // z, w, D
  LaurentScalar swap_factor;              // b_{dc} = swap_factor * b_{cd}, c < d
  std::size_t bb_relation_count = 0;
};

/// The twistor algebra with k_inst copies of the instanton parameters b^i
/// and primitive central elements X^i with inverses.
///
/// Systems:
///  - forms(): z, b, X, X^-1, dz with d z = dz, d b = 0, d X = d(eps_q y b);
///  - weyl(): z, b and the derivatives D^a_al.
/// The b relations are derived from the realization by a second twistor w
/// braided with z through the inverse Latin R-matrix.
class TwistorAlgebra {
 public:
  struct Options {
    int k_inst = 1;
    /// Keep the quadratic isotropy relation (b, b) = 0 among the b relations.
    bool isotropy = true;
    /// Specialize every scalar at q = q0 after the symbolic construction.
    std::optional<Rational> q0;
    /// Index placement of the derivative-w exchange D^a_al w^ga_b =
    /// K w^ga_d D^c_al: 0 uses R^{da}_{cb}, 1 uses R^{cb}_{da}.
    int dw_variant = 0;
  };

  explicit TwistorAlgebra(Options opt);

  const Options& options() const { return opt_; }
  int k_inst() const { return opt_.k_inst; }
  const Structure& structure() const { return s_; }
  const nc::Registry& reg() const { return *reg_; }
  const std::shared_ptr<nc::Registry>& registry() const { return reg_; }
  const BSectorDerivation& derivation() const { return deriv_; }

  /// Evaluates at q0 when specialized.
  LaurentScalar sc(const LaurentScalar& x) const;
  ScalarTensor sc(const ScalarTensor& t) const;

  Gen z(int al, int a) const { return reg_->gen("z", {al, a}); }
  Gen dz(int al, int a) const { return reg_->gen("dz", {al, a}); }
  Gen d(int a, int al) const { return reg_->gen("D", {a, al}); }
  Gen x(int i) const { return reg_->gen("X", {i}); }
  Gen xinv(int i) const { return reg_->gen("Xinv", {i}); }
  /// b^i_{cd} for c < d; the second index of family b runs over latin_pairs().
  Gen b(int i, int c, int d) const;

  const RewriteSystem& forms() const { return forms_; }
  const RewriteSystem& weyl() const { return weyl_; }

  /// The b relations (same label) used in forms(); index of the isotropy
  /// relation within it.
  const std::vector<NcPoly>& bb_relations() const { return bb_rels_; }
  const NcPoly& isotropy_relation() const { return isotropy_; }
  /// b^i b^j (i < j) rewritten through b^j b^i, derived from the realization.
  const std::vector<NcPoly>& cross_relations() const { return bibj_rels_; }

  /// y_{ab}, normal-formed.
  const PolyTensor& y() const { return y_; }
  /// b^i_{cd} for all (c, d), using the derived swap factor.
  const PolyTensor& b_tensor(int i) const { return bt_.at(static_cast<std::size_t>(i)); }
  /// eps_q^{abcd} y_{ab} b^i_{cd}, normal-formed.
  const NcPoly& x_composite(int i) const { return xc_.at(static_cast<std::size_t>(i)); }
  /// eps_q^{abcd} b^i_{ab} b^i_{cd}, normal-formed.
  NcPoly isotropy(int i) const;

  /// Exponent m with D X^i = (D|>X^i) + q^m X^i D, found by verification.
  int d_x_weight() const { return d_x_weight_; }

  /// Derivative action D^a_al |> p on the function sector (z, b, X, X^-1),
  /// normal-formed in forms().
  NcPoly partial(int a, int al, const NcPoly& p) const;
  /// q/(1+q^2) eps^{al be} D^b_be |> D^a_al |> p as a (b, a) tensor.
  PolyTensor laplace(const NcPoly& p) const;

  /// Multiplies by the powers of X^i that clear every X^-1, then replaces X^i
  /// by its composite and normal-forms. Zero exactly when p is zero.
  NcPoly resolve(const NcPoly& p) const;
  /// Replaces X^i by the composite (no X^-1 allowed) and normal-forms.
  NcPoly substitute_x(const NcPoly& p) const;

  /// Greek epsilon and R in the (possibly specialized) scalar field.
  const ScalarTensor& eps_up() const { return eps_up_; }
  const ScalarTensor& eps_down() const { return eps_down_; }
  const ScalarTensor& eps4() const { return eps4_; }
  const ScalarTensor& p_minus() const { return p_minus_; }
  const ScalarTensor& p_plus() const { return p_plus_; }
  const ScalarTensor& r_greek() const { return r_greek_; }

 private:
  void derive_b_sector();
  void build_systems();
  void build_composites();
  void find_d_x_weight();
  void specialize_all();
  NcPoly act(Gen dgen, const Word& w, std::size_t pos) const;

  Options opt_;
  Structure s_;
  std::shared_ptr<nc::Registry> reg_;
  BSectorDerivation deriv_;
  RewriteSystem forms_;
  RewriteSystem weyl_;
  // Derived exchange relations in b-level generators.
  std::vector<NcPoly> bz_rels_, dzb_rels_, db_rels_, bb_rels_, bibj_rels_;
  NcPoly isotropy_;
  PolyTensor y_;
  std::vector<PolyTensor> bt_;
  std::vector<NcPoly> xc_;
  int d_x_weight_ = 0;
  // d_x_[i][a][al] = D^a_al |> X^i.
  std::vector<std::vector<std::vector<NcPoly>>> d_x_;
  ScalarTensor eps_up_, eps_down_, eps4_, p_minus_, p_plus_, r_greek_;
  mutable std::map<Word, NcPoly> act_cache_;
};

/// Outcome of the commuting-b postulate for one b-dz weight s (b dz = q^s dz b).
struct CommutingBResult {
  int s = 0;
  NcPoly x_z_residual;   // X z - z X for a witness generator (first nonzero)
  NcPoly x_dz_residual;  // X dz - q^2 dz X (first nonzero)
  bool holds() const { return x_z_residual.is_zero() && x_dz_residual.is_zero(); }
};

/// Tests b commuting with z and q^s-commuting with dz for s in {-2, 0, 2, 4}.
std::vector<CommutingBResult> scan_commuting_b();

/// Second reading of the Laplace operator: the 6D derivative on the
/// function sector generated by symbols y_{ab}, b^i_{cd} and X^-1.
struct UpperCalculus {
  enum class Contraction {
    Literal,  // y_{cd} D^{dc}
    Swapped,  // y_{cd} D^{cd}
  };
  const TwistorAlgebra& alg;
  LaurentScalar lambda;  // Leibniz twist of X^-1
  Contraction contraction = Contraction::Literal;

  /// D^{ba} (X^i)^-1 evaluated in the concrete algebra.
  NcPoly partial_upper_xinv(int i, int b, int a) const;
  /// (D^{ba} + 1/2 y_{cd} D^{..} D^{ba}) (X^i)^-1 as a (b, a) tensor.
  PolyTensor laplace_xinv(int i) const;
};

std::string to_string(UpperCalculus::Contraction c);

}  // namespace qtw::tw

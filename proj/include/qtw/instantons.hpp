#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qtw/gauge.hpp"
#include "qtw/twistor.hpp"

namespace qtw::inst {

using nc::Gen;
using nc::NcPoly;
using nc::PolyTensor;
using nc::RewriteSystem;

// ---------------------------------------------------------------------------
// t'Hooft connection

struct ThooftOptions {
  int k_inst = 1;
  /// Keep (b, b) = 0 among the b relations.
  bool isotropy = true;
  std::optional<Rational> q0;
  /// The connection carries the prefactor q^prefactor_exponent.
  int prefactor_exponent = 3;
};

/// Quantum-trace weights diag(q^first, q^second).
struct TraceWeights {
  int first = 0;
  int second = 0;
  std::string str() const;
  friend bool operator==(const TraceWeights&, const TraceWeights&) = default;
};

/// The weights selected by the trace scan.
inline constexpr TraceWeights kPinnedTraceWeights{-1, 1};

struct TraceScanEntry {
  TraceWeights weights;
  NcPoly trace_identity;  // Tr_q A + c dPhi Phi^-1, resolved
  NcPoly trace_da;        // Tr_q dA, resolved
  bool holds() const { return trace_identity.is_zero() && trace_da.is_zero(); }
};

/// The 2x2 connection A^al_be = c dz^al_a (D^a_mu |> X^-1) X W^mu_be with
/// W^mu_be = eps^{sg mu} eps_{sg be} and c = q^prefactor_exponent, built on
/// the one-term twistor algebra. For k_inst >= 2 only the algebra is built.
class ThooftModel {
 public:
  explicit ThooftModel(ThooftOptions opt);

  const ThooftOptions& options() const { return opt_; }
  const tw::TwistorAlgebra& algebra() const { return alg_; }
  LaurentScalar prefactor() const;

  /// Throws std::logic_error when k_inst != 1.
  const PolyTensor& connection() const;
  /// d(X^-1) X, normal-formed.
  const NcPoly& dphi_phi_inv() const;

  /// Gauge-algebra residual for one slot reading, entries resolved.
  PolyTensor gauge_algebra(gauge::GaugeReading reading) const;

  NcPoly trace_identity(TraceWeights w) const;
  NcPoly trace_da(TraceWeights w) const;
  /// Tr_q A^2, resolved.
  NcPoly trace_a_squared(TraceWeights w) const;
  /// Tr_q A Tr_q A, resolved.
  NcPoly trace_squared(TraceWeights w) const;
  /// Scans diag(1,q^-2), diag(q^-2,1), diag(q,q^-1), diag(q^-1,q).
  std::vector<TraceScanEntry> scan_trace_weights() const;

  /// dA - A A with entries resolved (X^-1 cleared, X substituted).
  const PolyTensor& curvature() const;
  /// Tr_q F, resolved.
  NcPoly curvature_trace(TraceWeights w) const;
  gauge::StarData star() const;
  /// Anti-self-dual part of every curvature entry.
  std::vector<NcPoly> asd_curvature() const;

 private:
  ThooftOptions opt_;
  tw::TwistorAlgebra alg_;
  PolyTensor a_;
  NcPoly dphi_;
  mutable std::optional<PolyTensor> f_;
};

struct LaplaceScanEntry {
  std::string label;  // "q^-2", "1", "q^2"
  LaurentScalar lambda;
  PolyTensor residual;  // Laplacian of (X^i)^-1, both forms of the operator agree
  bool holds() const;
};

/// Leibniz twists scanned for the Laplacian of X^-1.
std::vector<LaplaceScanEntry> scan_laplace_twist(const tw::TwistorAlgebra& alg, int term = 0);
/// Laplacian of Phi = sum_i (X^i)^-1 at twist lambda, term by term.
PolyTensor laplace_phi(const tw::TwistorAlgebra& alg, const LaurentScalar& lambda);

// ---------------------------------------------------------------------------
// ADHM construction

struct AdhmOptions {
  int n = 1;  // gauge size N
  int k = 1;  // instanton number (only 1 is supported)
  std::optional<Rational> q0;
  /// Impose P^- b bt = 0 instead of P^+ b bt = 0.
  bool flipped_projector = false;
  /// bt z = q^s K z bt with s = bt_weight (b carries s = 0).
  int bt_weight = -1;
};

/// Two presentations sharing the letters z, dz, b, bt:
///  - base(): z, dz, b, bt with the twistor relations, the projector
///    constraint and the braided exchange b z = K z b, b dz = K dz b
///    (K^{ac}_{bd} = R^{ba}_{cd}), bt likewise with weight q^s;
///  - frame(): u, u~, du, du~, g, G = g^-1 and the base letters as free
///    letters, with normalization, Gram, orthogonality, completeness and the
///    du relations; g, G central.
class AdhmModel {
 public:
  explicit AdhmModel(AdhmOptions opt);

  const AdhmOptions& options() const { return opt_; }
  int big() const { return opt_.n + 2 * opt_.k; }
  const tw::Structure& structure() const { return s_; }

  const RewriteSystem& base() const { return base_; }
  const RewriteSystem& frame() const { return frame_; }
  const nc::ConfluenceReport& base_confluence() const { return base_conf_; }

  LaurentScalar sc(const LaurentScalar& x) const { return opt_.q0 ? x.specialize(*opt_.q0) : x; }

  /// Generators of the base registry.
  Gen z(int al, int a) const;
  Gen dz(int al, int a) const;
  Gen b(int a, int I) const;
  Gen bt(int I, int a) const;

  /// P b bt contracted as imposed, normal-formed in base(); zero by construction.
  std::vector<NcPoly> projector_residual() const;
  /// Normalization of g: g = gram_coefficient() * b^a_I bt^{Ib} y_ab.
  LaurentScalar gram_coefficient() const;
  /// The composite g, normal-formed in base().
  const NcPoly& g() const { return g_; }
  /// (v bt-z)^{al be} = z^al_a b^a_I bt^{Ib} z^be_b, normal-formed.
  const PolyTensor& gram() const { return vv_; }
  /// vv^{al be} - g eps^{al be}.
  std::vector<NcPoly> gram_residual() const;
  /// Exponent m with g z = q^m z g for every z, if any m in [-4, 4] works.
  std::optional<int> g_central_weight() const;

  /// Anti-self-dual part of bt^{Ia} dz^al_a W_{al be} dz^be_b b^b_K for all
  /// (I, K), with W = eps_{al be} or, with gram_kernel, the lowered Gram
  /// matrix eps_{al ga} vv^{ga de} eps_{de be}.
  std::vector<NcPoly> core_asd(bool gram_kernel) const;

  /// Frame relations grouped by label, each normal-formed in frame().
  std::vector<NcPoly> frame_residual(const std::string& label) const;
  /// Labels accepted by frame_residual.
  static const std::vector<std::string>& frame_labels();

  /// Consistency of the completeness relation, by normal form in frame():
  /// u P - u, P u~ - u~, P P - P, Q Q - Q, P Q, Q P with P = u~ u and
  /// Q = bt z G eps z b.
  std::vector<NcPoly> completeness_residual(const std::string& which) const;
  static const std::vector<std::string>& completeness_labels();

  /// F = dA - A A with A = du u~, computed in the free algebra.
  PolyTensor curvature_free() const;
  /// -u bt G eps dz dz b u~, the expected curvature.
  PolyTensor curvature_expected() const;
  /// F - expected - certificate, expanded in the free algebra. The
  /// certificate is a sum of left and right multiples of frame relations.
  PolyTensor curvature_certificate_residual() const;
  /// Normal forms in frame() of the relations the certificate uses.
  std::vector<NcPoly> certificate_relations_residual() const;

  /// The u-sector exchange relations (normalization, R_G u u = u u R,
  /// R u~ u~ = u~ u~ R_G, u~ R_G u = u R u~, the du relations) compiled on
  /// their own: residuals of every relation and the normal form of 1.
  std::vector<NcPoly> exchange_residual() const;
  bool exchange_nondegenerate() const;

  const nc::Registry& base_registry() const { return base_.registry(); }
  const nc::Registry& frame_registry() const { return frame_.registry(); }

 private:
  void build_base();
  void build_frame();

  struct FrameRel {
    std::string label;
    NcPoly rel;
  };

  AdhmOptions opt_;
  tw::Structure s_;
  ScalarTensor eps_up_, eps_down_, p_plus_, p_minus_, r_latin_;
  RewriteSystem base_;
  nc::ConfluenceReport base_conf_;
  NcPoly g_;
  PolyTensor vv_;
  RewriteSystem frame_;
  std::vector<FrameRel> frame_rels_;
};

}  // namespace qtw::inst

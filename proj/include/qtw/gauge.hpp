#pragma once

#include <string>
#include <vector>

#include "qtw/rewrite.hpp"

namespace qtw::gauge {

using nc::NcPoly;
using nc::PolyTensor;
using nc::RewriteSystem;

/// How the Latin projector acts on the index pair of dz^al_a dz^be_b.
enum class StarConvention {
  Reversed,  // dz^al_c dz^be_d P^{dc}_{ba}
  Direct,    // dz^al_c dz^be_d P^{cd}_{ab}
};
std::string to_string(StarConvention c);

/// Data for the duality operator on 2-forms whose words end in two letters
/// of the 1-form family `dz` (index spaces (spinor, latin)).
struct StarData {
  const RewriteSystem* rs = nullptr;
  std::string dz = "dz";
  ScalarTensor p_plus, p_minus;
  StarConvention convention = StarConvention::Reversed;
};

/// star(f) = f P^+ - f P^- on the Latin pair of the trailing dz dz,
/// normal-formed. Throws std::invalid_argument when a word does not end in
/// exactly two dz letters preceded by 0-forms.
NcPoly duality_star(const NcPoly& f, const StarData& s);
/// (f - star f) / 2.
NcPoly asd_part(const NcPoly& f, const StarData& s);
/// (f + star f) / 2.
NcPoly sd_part(const NcPoly& f, const StarData& s);

/// sum_i w_i m^i_i.
NcPoly q_trace(const PolyTensor& m, const std::vector<LaurentScalar>& weights);

/// Matrix product of (up, down) polynomial matrices, entries in operand order.
PolyTensor matmul(const PolyTensor& a, const PolyTensor& b);

/// Placement of the connection inside the two-slot operator algebra.
enum class GaugeReading {
  Slot1,  // A (x) 1
  Slot2,  // 1 (x) A
};
std::string to_string(GaugeReading r);

/// A_k R A_k + R A_k R A_k R with A_k the connection placed on slot k of
/// V (x) V and R the gauge-group R-matrix; entries normal-formed.
PolyTensor gauge_algebra_residual(const PolyTensor& a, const ScalarTensor& r, GaugeReading reading,
                                  const RewriteSystem& rs);

/// dA - A A, normal-formed.
PolyTensor curvature(const PolyTensor& a, const RewriteSystem& rs);

}  // namespace qtw::gauge

#pragma once

#include <string>
#include <utility>

#include "qtw/tensor.hpp"

namespace qtw::rmx {

/// Braid-form (hat) R-matrix: tensor(a, b, c, d) = R^{ab}_{cd}, shape
/// (up, up, down, down) over one index space. Acts on V (x) V as
/// (R v)^{ab} = R^{ab}_{cd} v^{cd}.
struct RMatrix {
  ScalarTensor tensor;
  int n = 0;
  IndexSpace space() const { return tensor.shape()[0].space; }
};

IndexSpace greek();
IndexSpace latin();

/// Standard GL_q(n) hat R-matrix with the (q - q^-1) band on a < b.
RMatrix build_glq_rmatrix(int n, const std::string& space_name = "");
/// q delta delta + eps^{ab} eps_{cd}; coincides with build_glq_rmatrix(2).
RMatrix build_slq2_rmatrix();
/// The n^2 x n^2 identity written as an R-matrix (used for controls).
RMatrix identity_rmatrix(int n, const std::string& space_name = "");
/// R^-1 = R - (q - q^-1) Id, valid for Hecke R.
RMatrix inverse_rmatrix(const RMatrix& r);

/// Deformed 2D antisymmetric symbols:
/// eps^{12} = 1, eps^{21} = -q, eps_{12} = -q^-1, eps_{21} = 1.
struct EpsilonPair {
  ScalarTensor eps_up;    // (up, up) on greek
  ScalarTensor eps_down;  // (down, down) on greek
};
EpsilonPair build_epsilon2();

/// Which index pattern of the rank-4 eigen-constraint is imposed on each
/// adjacent slot pair of eps_q.
enum class Eps4Reading {
  Reversed,  // sum_{e,f} R^{ba}_{fe} eps^{ef..} = -q^-1 eps^{ab..}  (as written)
  Direct,    // sum_{e,f} R^{ab}_{ef} eps^{ef..} = -q^-1 eps^{ab..}
};
std::string to_string(Eps4Reading r);

struct Eps4Solution {
  ScalarTensor eps;         // (up)^4 on latin, eps^{1234} = 1
  Eps4Reading reading;      // reading that produced a 1-dimensional solution
  int nullity_reversed = 0;  // solution-space dimensions seen for each reading
  int nullity_direct = 0;
};

/// Solves the GL_q(4) eigen-constraints for the q-antisymmetric rank-4
/// symbol. Throws std::runtime_error when no reading yields a 1-dimensional
/// solution space.
Eps4Solution build_q_epsilon4(const RMatrix& r4);
/// Same constraints for a chosen reading; returns the nullity and (when it is
/// 1) the normalized solution.
std::pair<int, ScalarTensor> solve_q_epsilon4(const RMatrix& r4, Eps4Reading reading);

/// (R^{ba}_{fe} or R^{ab}_{ef}) eps^{ef cd} + q^-1 eps^{abcd}, acting on slots
/// (slot, slot + 1).
ScalarTensor eps4_residual(const RMatrix& r4, const ScalarTensor& eps, Eps4Reading reading, int slot = 0);

/// (P-, P+) with P- = (q Id - R)/(q + q^-1), P+ = (q^-1 Id + R)/(q + q^-1).
/// Throws std::invalid_argument when R fails the Hecke relation.
std::pair<ScalarTensor, ScalarTensor> projectors(const RMatrix& r);

ScalarTensor identity_operator(const IndexSpace& s);
/// Operator product (A B)^{ab}_{ef} = A^{ab}_{cd} B^{cd}_{ef}.
ScalarTensor compose(const ScalarTensor& a, const ScalarTensor& b);

/// R12 R23 R12 - R23 R12 R23 on V^{(x)3}.
ScalarTensor ybe_residual(const RMatrix& r);
/// R^2 - Id - (q - q^-1) R.
ScalarTensor hecke_residual(const RMatrix& r);

RMatrix specialize(const RMatrix& r, const Rational& q0);

}  // namespace qtw::rmx

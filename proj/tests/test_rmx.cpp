#include <algorithm>
#include <array>

#include "doctest.h"
#include "qtw/rmx.hpp"

using namespace qtw;
using namespace qtw::rmx;

namespace {

using Mat = std::vector<std::vector<Rational>>;

// R on V (x) V at a numeric q, written directly from the matrix-unit
// expansion q sum e_aa(x)e_aa + sum_{a!=b} e_ab(x)e_ba + (q - 1/q) sum_{a<b} e_aa(x)e_bb.
Mat numeric_glq(int n, const Rational& q) {
  const int N = n * n;
  Mat m(N, std::vector<Rational>(N));
  auto row = [n](int a, int b) { return a * n + b; };
  for (int a = 0; a < n; ++a) m[row(a, a)][row(a, a)] += q;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b) m[row(a, b)][row(b, a)] += 1;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) m[row(a, b)][row(a, b)] += q - 1 / q;
  return m;
}

Mat mul(const Mat& a, const Mat& b) {
  const std::size_t n = a.size();
  Mat c(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (a[i][k] != 0)
        for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

int rank_of(Mat m) {
  int rank = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && rank < static_cast<int>(m.size()); ++c) {
    std::size_t p = static_cast<std::size_t>(rank);
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[static_cast<std::size_t>(rank)]);
    auto& pr = m[static_cast<std::size_t>(rank)];
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == static_cast<std::size_t>(rank) || m[r][c] == 0) continue;
      const Rational f = m[r][c] / pr[c];
      for (std::size_t j = c; j < cols; ++j) m[r][j] -= f * pr[j];
    }
    ++rank;
  }
  return rank;
}

int levi_civita(std::array<int, 4> p) {
  int sign = 1;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      if (p[i] == p[j]) return 0;
      if (p[i] > p[j]) sign = -sign;
    }
  return sign;
}

}  // namespace

TEST_CASE("GL_q(n) R-matrix agrees with the matrix-unit expansion") {
  for (int n : {2, 3, 4}) {
    const auto r = build_glq_rmatrix(n);
    const Rational q0(3, 2);
    const Mat m = numeric_glq(n, q0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) CHECK(r.tensor({a, b, c, d}).eval(q0) == m[a * n + b][c * n + d]);
  }
}

TEST_CASE("Hecke and Yang-Baxter hold symbolically") {
  for (int n : {2, 3, 4}) {
    const auto r = build_glq_rmatrix(n);
    CHECK(hecke_residual(r).is_zero());
    CHECK(ybe_residual(r).is_zero());
  }
}

TEST_CASE("numeric Hecke oracle at several q") {
  for (const Rational q0 : {Rational(2), Rational(5, 7)}) {
    const Mat m = numeric_glq(3, q0);
    const Mat m2 = mul(m, m);
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = 0; j < m.size(); ++j)
        CHECK(m2[i][j] == (i == j ? Rational(1) : Rational(0)) + (q0 - 1 / q0) * m[i][j]);
  }
}

TEST_CASE("identity fails Hecke and projectors refuse it") {
  const auto id = identity_rmatrix(2);
  CHECK_FALSE(hecke_residual(id).is_zero());
  CHECK(ybe_residual(id).is_zero());
  CHECK_THROWS_AS(projectors(id), std::invalid_argument);
}

TEST_CASE("SL_q(2) from epsilons equals GL_q(2)") {
  const auto s = build_slq2_rmatrix();
  const auto g = build_glq_rmatrix(2, "greek");
  CHECK(s.tensor == g.tensor);
  const auto e = build_epsilon2();
  // eps^{ab} eps_{bc} = delta^a_c
  const auto raise_lower = contract(e.eps_up, e.eps_down, {{1, 0}});
  CHECK(raise_lower == delta(greek()));
  // eps^{ab} eps_{ab} = -(q + q^-1)
  const auto full = contract(e.eps_up, e.eps_down, {{0, 0}, {1, 1}});
  CHECK(full.data()[0] == -LaurentScalar::q_int2());
}

TEST_CASE("projectors are complementary idempotents") {
  const auto r = build_glq_rmatrix(4, "latin");
  const auto [pm, pp] = projectors(r);
  const auto id = identity_operator(latin());
  CHECK(pm + pp == id);
  CHECK(compose(pm, pm) == pm);
  CHECK(compose(pp, pp) == pp);
  CHECK(compose(pm, pp).is_zero());
  // R = q P+ - q^-1 P-
  CHECK(scaled(pp, LaurentScalar::q()) - scaled(pm, LaurentScalar::monomial(-1)) == r.tensor);
  CHECK(compose(r.tensor, inverse_rmatrix(r).tensor) == id);
}

TEST_CASE("q-epsilon symbol on four indices") {
  const auto r = build_glq_rmatrix(4, "latin");
  const auto sol = build_q_epsilon4(r);
  CHECK(sol.reading == Eps4Reading::Reversed);
  CHECK(sol.nullity_reversed == 1);
  for (int slot = 0; slot < 3; ++slot) CHECK(eps4_residual(r, sol.eps, sol.reading, slot).is_zero());
  CHECK(sol.eps({0, 1, 2, 3}) == LaurentScalar(1));
  // Adjacent transposition of increasing indices costs -q^-1.
  CHECK(sol.eps({1, 0, 2, 3}) == -LaurentScalar::monomial(-1));
  CHECK(sol.eps({3, 2, 1, 0}) == LaurentScalar::monomial(-6));
  for (std::size_t off = 0; off < sol.eps.size(); ++off) {
    const auto idx = sol.eps.unflatten(off);
    CHECK(sol.eps.data()[off].eval(1) == levi_civita({idx[0], idx[1], idx[2], idx[3]}));
  }
}

TEST_CASE("q-epsilon constraint nullity matches a numeric oracle") {
  const auto r = build_glq_rmatrix(4, "latin");
  for (auto reading : {Eps4Reading::Reversed, Eps4Reading::Direct}) {
    const int symbolic = solve_q_epsilon4(r, reading).first;
    const Rational q0(2);
    const Mat m = numeric_glq(4, q0);
    Mat rows;
    for (int slot = 0; slot < 3; ++slot)
      for (int off = 0; off < 256; ++off) {
        std::array<int, 4> idx{off / 64, off / 16 % 4, off / 4 % 4, off % 4};
        std::vector<Rational> row(256);
        row[off] += 1 / q0;
        for (int e = 0; e < 4; ++e)
          for (int f = 0; f < 4; ++f) {
            auto j = idx;
            j[slot] = e;
            j[slot + 1] = f;
            const int a = idx[slot], b = idx[slot + 1];
            const Rational coeff = reading == Eps4Reading::Reversed ? m[b * 4 + a][f * 4 + e] : m[a * 4 + b][e * 4 + f];
            row[j[0] * 64 + j[1] * 16 + j[2] * 4 + j[3]] += coeff;
          }
        rows.push_back(std::move(row));
      }
    CHECK(256 - rank_of(rows) == symbolic);
  }
}

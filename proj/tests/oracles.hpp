#pragma once

#include <random>
#include <utility>
#include <vector>

#include "qtw/nc.hpp"

namespace oracle {

using qtw::Rational;
using Mat = std::vector<std::vector<Rational>>;

// GL_q(n) hat R on V (x) V at numeric q, from the matrix-unit expansion
// q sum e_aa(x)e_aa + sum_{a!=b} e_ab(x)e_ba + (q - 1/q) sum_{a<b} e_aa(x)e_bb.
// Row (a, b) = a n + b holds R^{ab}_{..}.
inline Mat glq(int n, const Rational& q) {
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

inline int rank(Mat m) {
  int r = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && r < static_cast<int>(m.size()); ++c) {
    std::size_t p = static_cast<std::size_t>(r);
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[static_cast<std::size_t>(r)]);
    const auto& pr = m[static_cast<std::size_t>(r)];
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == static_cast<std::size_t>(r) || m[i][c] == 0) continue;
      const Rational f = m[i][c] / pr[c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * pr[j];
    }
    ++r;
  }
  return r;
}

// Random polynomial in the given generators: up to `terms` words of length
// 1..max_len with coefficients +-q^e, |e| <= 2.
inline qtw::nc::NcPoly random_poly(std::mt19937& rng, const std::vector<qtw::nc::Gen>& gens, int terms,
                                   int max_len) {
  std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
  std::uniform_int_distribution<int> len(1, max_len), ex(-2, 2), sign(0, 1);
  qtw::nc::NcPoly p;
  for (int t = 0; t < terms; ++t) {
    qtw::nc::Word w;
    for (int i = len(rng); i > 0; --i) w.push_back(gens[pick(rng)]);
    p.add_term(w, qtw::LaurentScalar::monomial(ex(rng), sign(rng) ? 1 : -1));
  }
  return p;
}

}  // namespace oracle

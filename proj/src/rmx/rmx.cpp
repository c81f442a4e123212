#include "qtw/rmx.hpp"

#include <array>
#include <stdexcept>

#include "qtw/ratfunc.hpp"

namespace qtw::rmx {

namespace {

IndexSpace space_for(int n, const std::string& name) {
  if (!name.empty()) return {name, n};
  return {"gl" + std::to_string(n), n};
}

ScalarTensor empty_operator(const IndexSpace& s) { return ScalarTensor({up(s), up(s), down(s), down(s)}); }

}  // namespace

IndexSpace greek() { return {"greek", 2}; }
IndexSpace latin() { return {"latin", 4}; }

ScalarTensor identity_operator(const IndexSpace& s) {
  ScalarTensor id = empty_operator(s);
  for (int a = 0; a < s.dim; ++a)
    for (int b = 0; b < s.dim; ++b) id({a, b, a, b}) = 1;
  return id;
}

ScalarTensor compose(const ScalarTensor& a, const ScalarTensor& b) {
  const std::size_t k = a.rank() / 2;
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < k; ++i) pairs.emplace_back(static_cast<int>(k + i), static_cast<int>(i));
  return contract(a, b, pairs);
}

RMatrix build_glq_rmatrix(int n, const std::string& space_name) {
  if (n < 1) throw std::invalid_argument("GL_q(n) requires n >= 1");
  const IndexSpace s = space_for(n, space_name);
  RMatrix r{empty_operator(s), n};
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a == b) {
        r.tensor({a, a, a, a}) = LaurentScalar::q();
        continue;
      }
      r.tensor({a, b, b, a}) = 1;
      if (a < b) r.tensor({a, b, a, b}) = LaurentScalar::q_diff();
    }
  }
  return r;
}

EpsilonPair build_epsilon2() {
  const IndexSpace g = greek();
  EpsilonPair e{ScalarTensor({up(g), up(g)}), ScalarTensor({down(g), down(g)})};
  e.eps_up({0, 1}) = 1;
  e.eps_up({1, 0}) = -LaurentScalar::q();
  e.eps_down({0, 1}) = -LaurentScalar::monomial(-1);
  e.eps_down({1, 0}) = 1;
  return e;
}

RMatrix build_slq2_rmatrix() {
  const auto eps = build_epsilon2();
  const IndexSpace g = greek();
  ScalarTensor r = scaled(identity_operator(g), LaurentScalar::q());
  r += contract(eps.eps_up, eps.eps_down, {});
  return {r, 2};
}

RMatrix identity_rmatrix(int n, const std::string& space_name) {
  return {identity_operator(space_for(n, space_name)), n};
}

RMatrix inverse_rmatrix(const RMatrix& r) {
  return {r.tensor - scaled(identity_operator(r.space()), LaurentScalar::q_diff()), r.n};
}

ScalarTensor hecke_residual(const RMatrix& r) {
  const ScalarTensor r2 = compose(r.tensor, r.tensor);
  return r2 - identity_operator(r.space()) - scaled(r.tensor, LaurentScalar::q_diff());
}

ScalarTensor ybe_residual(const RMatrix& r) {
  const IndexSpace s = r.space();
  const ScalarTensor d = delta(s);
  // R12 = R (x) 1 and R23 = 1 (x) R as (up^3, down^3) operators.
  const ScalarTensor r12 = permute_axes(contract(r.tensor, d, {}), {0, 1, 4, 2, 3, 5});
  const ScalarTensor r23 = permute_axes(contract(d, r.tensor, {}), {0, 2, 3, 1, 4, 5});
  const ScalarTensor lhs = compose(compose(r12, r23), r12);
  const ScalarTensor rhs = compose(compose(r23, r12), r23);
  return lhs - rhs;
}

std::pair<ScalarTensor, ScalarTensor> projectors(const RMatrix& r) {
  if (!hecke_residual(r).is_zero()) throw std::invalid_argument("projectors: R-matrix fails the Hecke relation");
  const ScalarTensor id = identity_operator(r.space());
  const ScalarTensor minus = (scaled(id, LaurentScalar::q()) - r.tensor).map([](const LaurentScalar& x) {
    return x.div_q_int2();
  });
  const ScalarTensor plus = (scaled(id, LaurentScalar::monomial(-1)) + r.tensor).map([](const LaurentScalar& x) {
    return x.div_q_int2();
  });
  return {minus, plus};
}

std::string to_string(Eps4Reading r) { return r == Eps4Reading::Reversed ? "reversed" : "direct"; }

namespace {

// Operator on an adjacent slot pair: M(a, b, e, f) multiplies eps^{..ef..}.
LaurentScalar slot_operator(const RMatrix& r, Eps4Reading reading, int a, int b, int e, int f) {
  if (reading == Eps4Reading::Reversed) return r.tensor({b, a, f, e});
  return r.tensor({a, b, e, f});
}

}  // namespace

ScalarTensor eps4_residual(const RMatrix& r4, const ScalarTensor& eps, Eps4Reading reading, int slot) {
  ScalarTensor res(eps.shape());
  const int n = r4.n;
  const LaurentScalar qinv = LaurentScalar::monomial(-1);
  for (std::size_t off = 0; off < eps.size(); ++off) {
    auto idx = eps.unflatten(off);
    LaurentScalar acc = qinv * eps.data()[off];
    auto j = idx;
    for (int e = 0; e < n; ++e) {
      for (int f = 0; f < n; ++f) {
        const LaurentScalar m = slot_operator(r4, reading, idx[slot], idx[slot + 1], e, f);
        if (m.is_zero()) continue;
        j[slot] = e;
        j[slot + 1] = f;
        acc += m * eps.at(j);
      }
    }
    res.data()[off] = acc;
  }
  return res;
}

std::pair<int, ScalarTensor> solve_q_epsilon4(const RMatrix& r4, Eps4Reading reading) {
  if (r4.n != 4) throw std::invalid_argument("q-epsilon symbol needs the GL_q(4) R-matrix");
  const IndexSpace s = r4.space();
  ScalarTensor shape_only({up(s), up(s), up(s), up(s)});
  const std::size_t nunk = shape_only.size();
  const LaurentScalar qinv = LaurentScalar::monomial(-1);
  std::vector<SparseRow> rows;
  for (int slot = 0; slot < 3; ++slot) {
    for (std::size_t off = 0; off < nunk; ++off) {
      auto idx = shape_only.unflatten(off);
      SparseRow row;
      auto add = [&](std::size_t col, const LaurentScalar& c) {
        RatFunc v = row.count(col) ? row[col] + RatFunc(c) : RatFunc(c);
        if (v.is_zero())
          row.erase(col);
        else
          row[col] = v;
      };
      add(off, qinv);
      auto j = idx;
      for (int e = 0; e < 4; ++e) {
        for (int f = 0; f < 4; ++f) {
          const LaurentScalar m = slot_operator(r4, reading, idx[slot], idx[slot + 1], e, f);
          if (m.is_zero()) continue;
          j[slot] = e;
          j[slot + 1] = f;
          add(shape_only.offset(j), m);
        }
      }
      if (!row.empty()) rows.push_back(std::move(row));
    }
  }
  const auto pivots = rref(rows);
  const int nullity = static_cast<int>(nunk - pivots.size());
  if (nullity != 1) return {nullity, ScalarTensor{}};
  std::vector<bool> is_pivot(nunk);
  for (auto p : pivots) is_pivot[p] = true;
  std::size_t free_col = 0;
  while (is_pivot[free_col]) ++free_col;
  std::vector<RatFunc> x(nunk);
  x[free_col] = RatFunc(LaurentScalar(1));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    auto it = rows[k].find(free_col);
    if (it != rows[k].end()) x[pivots[k]] = -it->second;
  }
  const std::array<int, 4> norm_idx{0, 1, 2, 3};
  const RatFunc norm = x[shape_only.offset(norm_idx)];
  if (norm.is_zero()) throw std::runtime_error("q-epsilon solution vanishes at (1,2,3,4)");
  ScalarTensor eps = shape_only;
  for (std::size_t off = 0; off < nunk; ++off) {
    if (x[off].is_zero()) continue;
    auto v = (x[off] / norm).to_laurent();
    if (!v) throw std::runtime_error("q-epsilon entry outside the Laurent ring: " + (x[off] / norm).str());
    eps.data()[off] = *v;
  }
  return {1, eps};
}

Eps4Solution build_q_epsilon4(const RMatrix& r4) {
  auto [nr, er] = solve_q_epsilon4(r4, Eps4Reading::Reversed);
  auto [nd, ed] = solve_q_epsilon4(r4, Eps4Reading::Direct);
  if (nr == 1) return {er, Eps4Reading::Reversed, nr, nd};
  if (nd == 1) return {ed, Eps4Reading::Direct, nr, nd};
  throw std::runtime_error("q-epsilon constraint system has no 1-dimensional solution space (nullities " +
                           std::to_string(nr) + ", " + std::to_string(nd) + ")");
}

RMatrix specialize(const RMatrix& r, const Rational& q0) { return {qtw::specialize(r.tensor, q0), r.n}; }

}  // namespace qtw::rmx

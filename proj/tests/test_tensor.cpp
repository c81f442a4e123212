#include <random>

#include "doctest.h"
#include "qtw/tensor.hpp"

using namespace qtw;

namespace {

const IndexSpace kV{"v", 3};

ScalarTensor random_tensor(std::vector<Axis> shape, std::mt19937& rng) {
  ScalarTensor t(std::move(shape));
  std::uniform_int_distribution<int> c(-2, 2), e(-2, 2);
  for (auto& x : t.data()) x = LaurentScalar::monomial(e(rng), c(rng));
  return t;
}

}  // namespace

TEST_CASE("contraction matches explicit index sums") {
  std::mt19937 rng(3);
  const auto a = random_tensor({up(kV), down(kV)}, rng);
  const auto b = random_tensor({up(kV), down(kV)}, rng);
  const auto ab = contract(a, b, {{1, 0}});
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) {
      LaurentScalar s;
      for (int j = 0; j < 3; ++j) s += a({i, j}) * b({j, k});
      CHECK(ab({i, k}) == s);
    }
  const auto outer = contract(a, b, {});
  CHECK(outer.rank() == 4);
  CHECK(outer({1, 2, 0, 1}) == a({1, 2}) * b({0, 1}));
}

TEST_CASE("contraction is bilinear and associative") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_tensor({up(kV), down(kV)}, rng);
    const auto a2 = random_tensor({up(kV), down(kV)}, rng);
    const auto b = random_tensor({up(kV), down(kV), down(kV)}, rng);
    const auto c = random_tensor({up(kV)}, rng);
    CHECK(contract(a + a2, b, {{1, 0}}) == contract(a, b, {{1, 0}}) + contract(a2, b, {{1, 0}}));
    const auto lhs = contract(contract(a, b, {{1, 0}}), c, {{2, 0}});
    const auto rhs = contract(a, contract(b, c, {{2, 0}}), {{1, 0}});
    CHECK(lhs == rhs);
  }
}

TEST_CASE("contraction rejects mismatched axes") {
  const ScalarTensor a({up(kV)});
  const ScalarTensor b({up(kV)});
  const ScalarTensor w({down(IndexSpace{"w", 2})});
  CHECK_THROWS_AS(contract(a, b, {{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(contract(a, w, {{0, 0}}), std::invalid_argument);
}

TEST_CASE("axis permutation and delta") {
  std::mt19937 rng(5);
  const auto t = random_tensor({up(kV), down(kV), up(kV)}, rng);
  const auto p = permute_axes(t, {2, 0, 1});
  CHECK(p({1, 2, 0}) == t({2, 0, 1}));
  CHECK(contract(delta(kV), t, {{1, 0}}) == t);
}

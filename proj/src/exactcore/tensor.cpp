#include "qtw/tensor.hpp"

namespace qtw {

ScalarTensor delta(const IndexSpace& s) {
  ScalarTensor d({up(s), down(s)});
  for (int i = 0; i < s.dim; ++i) d({i, i}) = 1;
  return d;
}

ScalarTensor specialize(const ScalarTensor& t, const Rational& q0) {
  return t.map([&](const LaurentScalar& x) { return x.specialize(q0); });
}

}  // namespace qtw

#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qtw/laurent.hpp"

namespace qtw {

struct IndexSpace {
  std::string name;
  int dim = 1;
  friend bool operator==(const IndexSpace&, const IndexSpace&) = default;
};

enum class Variance { Up, Down };

struct Axis {
  IndexSpace space;
  Variance variance = Variance::Up;
  friend bool operator==(const Axis&, const Axis&) = default;
};

inline Axis up(const IndexSpace& s) { return {s, Variance::Up}; }
inline Axis down(const IndexSpace& s) { return {s, Variance::Down}; }

/// Dense multi-index array. Indices are zero-based; entry (i0, i1, ...) is
/// stored row-major with the last axis fastest.
template <class T>
class Tensor {
 public:
  using value_type = T;

  Tensor() = default;
  explicit Tensor(std::vector<Axis> shape) : shape_(std::move(shape)) {
    std::size_t n = 1;
    for (const auto& a : shape_) {
      if (a.space.dim < 1) throw std::invalid_argument("index space '" + a.space.name + "' has dim < 1");
      n *= static_cast<std::size_t>(a.space.dim);
    }
    data_.assign(n, T{});
  }

  const std::vector<Axis>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }
  int dim(std::size_t axis) const { return shape_[axis].space.dim; }

  std::size_t offset(std::span<const int> idx) const {
    if (idx.size() != shape_.size()) throw std::out_of_range("tensor index has wrong rank");
    std::size_t off = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (idx[k] < 0 || idx[k] >= shape_[k].space.dim) throw std::out_of_range("tensor index out of range");
      off = off * static_cast<std::size_t>(shape_[k].space.dim) + static_cast<std::size_t>(idx[k]);
    }
    return off;
  }

  T& at(std::span<const int> idx) { return data_[offset(idx)]; }
  const T& at(std::span<const int> idx) const { return data_[offset(idx)]; }
  T& operator()(std::initializer_list<int> idx) { return at(std::span<const int>(idx.begin(), idx.size())); }
  const T& operator()(std::initializer_list<int> idx) const {
    return at(std::span<const int>(idx.begin(), idx.size()));
  }

  std::vector<int> unflatten(std::size_t off) const {
    std::vector<int> idx(shape_.size());
    for (std::size_t k = shape_.size(); k-- > 0;) {
      const auto d = static_cast<std::size_t>(shape_[k].space.dim);
      idx[k] = static_cast<int>(off % d);
      off /= d;
    }
    return idx;
  }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  bool is_zero() const {
    for (const auto& x : data_)
      if (!x.is_zero()) return false;
    return true;
  }

  template <class F>
  auto map(F&& f) const -> Tensor<std::decay_t<decltype(f(std::declval<const T&>()))>> {
    Tensor<std::decay_t<decltype(f(std::declval<const T&>()))>> out(shape_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data()[i] = f(data_[i]);
    return out;
  }

  Tensor& operator+=(const Tensor& o) {
    check_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Tensor& operator-=(const Tensor& o) {
    check_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
  friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }

  friend bool operator==(const Tensor& a, const Tensor& b) { return a.shape_ == b.shape_ && a.data_ == b.data_; }

 private:
  void check_same_shape(const Tensor& o) const {
    if (o.shape_ != shape_) throw std::invalid_argument("tensor shape mismatch");
  }

  std::vector<Axis> shape_;
  std::vector<T> data_;
};

using ScalarTensor = Tensor<LaurentScalar>;

template <class T, class S>
Tensor<T> scaled(const Tensor<T>& t, const S& s) {
  return t.map([&](const T& x) { return s * x; });
}

/// Generalized inner product. Uncontracted axes of t1 come first, then those
/// of t2; each product is formed as (entry of t1) * (entry of t2) so that
/// noncommutative word order follows operand order.
template <class A, class B>
auto contract(const Tensor<A>& t1, const Tensor<B>& t2, const std::vector<std::pair<int, int>>& pairs)
    -> Tensor<std::decay_t<decltype(std::declval<const A&>() * std::declval<const B&>())>> {
  using C = std::decay_t<decltype(std::declval<const A&>() * std::declval<const B&>())>;
  std::vector<bool> used1(t1.rank()), used2(t2.rank());
  for (const auto& [a1, a2] : pairs) {
    if (a1 < 0 || a2 < 0 || static_cast<std::size_t>(a1) >= t1.rank() || static_cast<std::size_t>(a2) >= t2.rank())
      throw std::invalid_argument("contraction axis out of range");
    if (used1[a1] || used2[a2]) throw std::invalid_argument("axis contracted twice");
    const Axis& x = t1.shape()[a1];
    const Axis& y = t2.shape()[a2];
    if (x.space.dim != y.space.dim)
      throw std::invalid_argument("contraction dim mismatch: " + x.space.name + " vs " + y.space.name);
    if (x.variance == y.variance)
      throw std::invalid_argument("contraction variance mismatch on " + x.space.name + "/" + y.space.name);
    used1[a1] = used2[a2] = true;
  }
  std::vector<Axis> out_shape;
  std::vector<int> free1, free2;
  for (std::size_t k = 0; k < t1.rank(); ++k)
    if (!used1[k]) {
      out_shape.push_back(t1.shape()[k]);
      free1.push_back(static_cast<int>(k));
    }
  for (std::size_t k = 0; k < t2.rank(); ++k)
    if (!used2[k]) {
      out_shape.push_back(t2.shape()[k]);
      free2.push_back(static_cast<int>(k));
    }
  Tensor<C> out(out_shape);
  std::size_t free2_size = 1;
  for (int k : free2) free2_size *= static_cast<std::size_t>(t2.dim(static_cast<std::size_t>(k)));

  // Bucket nonzero entries of t2 by their contracted index tuple.
  std::map<std::vector<int>, std::vector<std::pair<std::size_t, std::size_t>>> buckets;
  for (std::size_t off = 0; off < t2.size(); ++off) {
    if (t2.data()[off].is_zero()) continue;
    const auto idx = t2.unflatten(off);
    std::vector<int> key;
    key.reserve(pairs.size());
    for (const auto& pr : pairs) key.push_back(idx[static_cast<std::size_t>(pr.second)]);
    std::size_t foff = 0;
    for (int k : free2) foff = foff * static_cast<std::size_t>(t2.dim(static_cast<std::size_t>(k))) + idx[k];
    buckets[key].emplace_back(off, foff);
  }
  for (std::size_t off = 0; off < t1.size(); ++off) {
    const A& a = t1.data()[off];
    if (a.is_zero()) continue;
    const auto idx = t1.unflatten(off);
    std::vector<int> key;
    key.reserve(pairs.size());
    for (const auto& pr : pairs) key.push_back(idx[static_cast<std::size_t>(pr.first)]);
    auto it = buckets.find(key);
    if (it == buckets.end()) continue;
    std::size_t foff1 = 0;
    for (int k : free1) foff1 = foff1 * static_cast<std::size_t>(t1.dim(static_cast<std::size_t>(k))) + idx[k];
    for (const auto& [off2, foff2] : it->second) out.data()[foff1 * free2_size + foff2] += a * t2.data()[off2];
  }
  return out;
}

/// Reorders axes: output axis k is input axis perm[k].
template <class T>
Tensor<T> permute_axes(const Tensor<T>& t, const std::vector<int>& perm) {
  if (perm.size() != t.rank()) throw std::invalid_argument("permutation has wrong length");
  std::vector<Axis> shape;
  for (int p : perm) shape.push_back(t.shape()[static_cast<std::size_t>(p)]);
  Tensor<T> out(shape);
  std::vector<int> oidx(perm.size());
  for (std::size_t off = 0; off < t.size(); ++off) {
    const auto idx = t.unflatten(off);
    for (std::size_t k = 0; k < perm.size(); ++k) oidx[k] = idx[static_cast<std::size_t>(perm[k])];
    out.at(oidx) = t.data()[off];
  }
  return out;
}

/// Kronecker delta with shape (up s, down s).
ScalarTensor delta(const IndexSpace& s);

ScalarTensor specialize(const ScalarTensor& t, const Rational& q0);

}  // namespace qtw

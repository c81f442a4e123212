#include "qtw/ratfunc.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace qtw {

Poly::Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

Poly Poly::constant(const Rational& c) { return Poly(std::vector<Rational>{c}); }

Poly Poly::monomial(int degree, const Rational& c) {
  std::vector<Rational> v(static_cast<std::size_t>(degree + 1));
  v.back() = c;
  return Poly(std::move(v));
}

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Poly operator+(const Poly& a, const Poly& b) {
  std::vector<Rational> v(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] += b.c_[i];
  return Poly(std::move(v));
}

Poly operator-(const Poly& a, const Poly& b) { return a + b.scaled(-1); }

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> v(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
  }
  return Poly(std::move(v));
}

Poly Poly::scaled(const Rational& c) const {
  if (c == 0) return {};
  std::vector<Rational> v = c_;
  for (auto& x : v) x *= c;
  return Poly(std::move(v));
}

void Poly::divmod(const Poly& a, const Poly& b, Poly& quotient, Poly& remainder) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  std::vector<Rational> r = a.c_;
  const int db = b.degree();
  std::vector<Rational> quo(a.degree() >= db ? static_cast<std::size_t>(a.degree() - db + 1) : 0);
  for (int k = a.degree(); k >= db; --k) {
    const Rational& top = r[static_cast<std::size_t>(k)];
    if (top == 0) continue;
    Rational f = top / b.lead();
    quo[static_cast<std::size_t>(k - db)] = f;
    for (int j = 0; j <= db; ++j) r[static_cast<std::size_t>(k - db + j)] -= f * b.c_[static_cast<std::size_t>(j)];
  }
  quotient = Poly(std::move(quo));
  remainder = Poly(std::move(r));
}

Poly Poly::monic() const {
  if (is_zero()) return {};
  return scaled(1 / lead());
}

Poly Poly::gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly quo, rem;
    divmod(a, b, quo, rem);
    a = std::move(b);
    b = rem.monic();
  }
  return a.monic();
}

RatFunc::RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
  reduce();
}

RatFunc::RatFunc(const LaurentScalar& s) : den_(Poly::constant(1)) {
  if (s.is_zero()) return;
  const auto& t = s.terms();
  const int shift = t.front().first;
  std::vector<Rational> v(static_cast<std::size_t>(t.back().first - shift + 1));
  for (const auto& [e, c] : t) v[static_cast<std::size_t>(e - shift)] = c;
  Poly p(std::move(v));
  // (q + q^-1)^k = q^-k (q^2 + 1)^k
  const int k = s.denominator_power();
  Poly den = Poly::constant(1);
  const Poly q2p1(std::vector<Rational>{1, 0, 1});
  for (int i = 0; i < k; ++i) den = den * q2p1;
  const int qpow = shift + k;
  if (qpow >= 0) {
    p = p * Poly::monomial(qpow);
  } else {
    den = den * Poly::monomial(-qpow);
  }
  num_ = std::move(p);
  den_ = std::move(den);
  reduce();
}

void RatFunc::reduce() {
  if (num_.is_zero()) {
    den_ = Poly::constant(1);
    return;
  }
  Poly g = Poly::gcd(num_, den_);
  if (g.degree() > 0) {
    Poly r;
    Poly::divmod(num_, g, num_, r);
    Poly::divmod(den_, g, den_, r);
  }
  const Rational lc = den_.lead();
  if (lc != 1) {
    num_ = num_.scaled(1 / lc);
    den_ = den_.scaled(1 / lc);
  }
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
  return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
  if (a.is_zero() || b.is_zero()) return {};
  return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) {
  if (b.is_zero()) throw std::domain_error("rational function division by zero");
  return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
}

RatFunc RatFunc::operator-() const {
  RatFunc r = *this;
  r.num_ = r.num_.scaled(-1);
  return r;
}

std::optional<LaurentScalar> RatFunc::to_laurent() const {
  if (num_.is_zero()) return LaurentScalar{};
  Poly den = den_;
  int qpow = 0;
  while (den.degree() > 0 && den.coeffs()[0] == 0) {
    den = Poly(std::vector<Rational>(den.coeffs().begin() + 1, den.coeffs().end()));
    ++qpow;
  }
  const Poly q2p1(std::vector<Rational>{1, 0, 1});
  int m = 0;
  while (den.degree() >= 2) {
    Poly quo, rem;
    Poly::divmod(den, q2p1, quo, rem);
    if (!rem.is_zero()) return std::nullopt;
    den = quo;
    ++m;
  }
  if (den.degree() != 0) return std::nullopt;
  // num / (c q^qpow (q^2+1)^m) = num q^(-qpow-m) / (c [2]^m)
  LaurentScalar out;
  const auto& nc = num_.coeffs();
  for (std::size_t i = 0; i < nc.size(); ++i)
    if (nc[i] != 0) out += LaurentScalar::monomial(static_cast<int>(i) - qpow - m, nc[i] / den.lead());
  return out.div_q_int2(m);
}

Rational RatFunc::eval(const Rational& q0) const {
  auto at = [&](const Poly& p) {
    Rational r;
    for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) r = r * q0 + *it;
    return r;
  };
  Rational d = at(den_);
  if (d == 0) throw std::domain_error("rational function pole at evaluation point");
  Rational r = at(num_) / d;
  r.canonicalize();
  return r;
}

std::string RatFunc::str() const {
  if (auto l = to_laurent()) return l->str();
  auto render = [](const Poly& p) {
    std::string s;
    for (int i = p.degree(); i >= 0; --i) {
      const Rational& c = p.coeffs()[static_cast<std::size_t>(i)];
      if (c == 0) continue;
      if (!s.empty()) s += " + ";
      s += "(" + c.get_str() + ")q^" + std::to_string(i);
    }
    return s;
  };
  return "(" + render(num_) + ")/(" + render(den_) + ")";
}

std::vector<std::size_t> rref(std::vector<SparseRow>& rows) {
  std::vector<SparseRow> done;
  std::vector<std::size_t> pivots;
  std::vector<SparseRow> pending;
  for (auto& r : rows)
    if (!r.empty()) pending.push_back(std::move(r));
  while (!pending.empty()) {
    // Smallest leading column first; among ties the sparsest row.
    std::size_t best = 0;
    for (std::size_t i = 1; i < pending.size(); ++i) {
      const auto ci = pending[i].begin()->first, cb = pending[best].begin()->first;
      if (ci < cb || (ci == cb && pending[i].size() < pending[best].size())) best = i;
    }
    SparseRow piv = std::move(pending[best]);
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(best));
    const std::size_t col = piv.begin()->first;
    const RatFunc inv = RatFunc(LaurentScalar(1)) / piv.begin()->second;
    for (auto& [c, x] : piv) x = x * inv;
    auto eliminate = [&](SparseRow& row) {
      auto it = row.find(col);
      if (it == row.end()) return;
      const RatFunc f = it->second;
      for (const auto& [c, x] : piv) {
        auto [pos, inserted] = row.try_emplace(c, RatFunc{});
        pos->second = pos->second - f * x;
        if (pos->second.is_zero()) row.erase(pos);
      }
    };
    for (auto& r : pending) eliminate(r);
    for (auto& r : done) eliminate(r);
    std::erase_if(pending, [](const SparseRow& r) { return r.empty(); });
    done.push_back(std::move(piv));
    pivots.push_back(col);
  }
  // Row order follows pivot order.
  std::vector<std::size_t> order(done.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pivots[a] < pivots[b]; });
  rows.clear();
  std::vector<std::size_t> sorted;
  for (auto k : order) {
    rows.push_back(std::move(done[k]));
    sorted.push_back(pivots[k]);
  }
  return sorted;
}

}  // namespace qtw

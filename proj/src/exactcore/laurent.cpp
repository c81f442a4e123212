#include "qtw/laurent.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace qtw {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  Rational r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational literal '" + s + "'");
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

namespace {

using Terms = std::vector<LaurentScalar::Term>;

Terms add_terms(const Terms& a, const Terms& b, int sign) {
  Terms out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, sign > 0 ? b[j].second : Rational(-b[j].second));
      ++j;
    } else {
      Rational c = sign > 0 ? Rational(a[i].second + b[j].second) : Rational(a[i].second - b[j].second);
      if (c != 0) out.emplace_back(a[i].first, std::move(c));
      ++i;
      ++j;
    }
  }
  return out;
}

Terms mul_terms(const Terms& a, const Terms& b) {
  if (a.empty() || b.empty()) return {};
  if (a.size() == 1 && b.size() == 1) {
    Rational c = a[0].second * b[0].second;
    return {{a[0].first + b[0].first, std::move(c)}};
  }
  const int lo = a.front().first + b.front().first;
  const int hi = a.back().first + b.back().first;
  std::vector<Rational> acc(static_cast<std::size_t>(hi - lo + 1));
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) acc[static_cast<std::size_t>(ea + eb - lo)] += ca * cb;
  Terms out;
  for (std::size_t k = 0; k < acc.size(); ++k)
    if (acc[k] != 0) out.emplace_back(lo + static_cast<int>(k), std::move(acc[k]));
  return out;
}

const Terms& q_int2_terms() {
  static const Terms t{{-1, Rational(1)}, {1, Rational(1)}};
  return t;
}

// q + q^-1 divides p iff p vanishes at q = i.
bool divisible_by_q_int2(const Terms& p) {
  if (p.empty()) return true;
  Rational re, im;
  for (const auto& [e, c] : p) {
    switch (((e % 4) + 4) % 4) {
      case 0: re += c; break;
      case 1: im += c; break;
      case 2: re -= c; break;
      default: im -= c; break;
    }
  }
  return re == 0 && im == 0;
}

// Exact quotient p / (q + q^-1); p must be divisible.
Terms exact_div_q_int2(Terms p) {
  Terms quotient;
  // Peel off the top term each step: c q^e = c q^(e-1) (q + q^-1) - c q^(e-2).
  while (!p.empty()) {
    auto [e, c] = p.back();
    quotient.emplace_back(e - 1, c);
    p = add_terms(p, Terms{{e - 2, c}, {e, c}}, -1);
  }
  std::reverse(quotient.begin(), quotient.end());
  return quotient;
}

}  // namespace

LaurentScalar::LaurentScalar(long value) {
  if (value != 0) terms_.emplace_back(0, Rational(value));
}

LaurentScalar::LaurentScalar(const Rational& value) {
  Rational v = value;
  v.canonicalize();
  if (v != 0) terms_.emplace_back(0, std::move(v));
}

LaurentScalar LaurentScalar::monomial(int exponent, const Rational& coeff) {
  LaurentScalar s;
  Rational c = coeff;
  c.canonicalize();
  if (c != 0) s.terms_.emplace_back(exponent, std::move(c));
  return s;
}

LaurentScalar LaurentScalar::q_int2() {
  LaurentScalar s;
  s.terms_ = q_int2_terms();
  return s;
}

LaurentScalar LaurentScalar::q_diff() { return monomial(1) - monomial(-1); }

bool LaurentScalar::is_constant() const {
  return den_ == 0 && (terms_.empty() || (terms_.size() == 1 && terms_[0].first == 0));
}

void LaurentScalar::normalize() {
  if (terms_.empty()) {
    den_ = 0;
    return;
  }
  while (den_ > 0 && divisible_by_q_int2(terms_)) {
    terms_ = exact_div_q_int2(std::move(terms_));
    --den_;
  }
}

LaurentScalar& LaurentScalar::operator+=(const LaurentScalar& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_ == o.den_) {
    terms_ = add_terms(terms_, o.terms_, +1);
    if (den_ > 0) normalize();
    return *this;
  }
  Terms a = terms_, b = o.terms_;
  const int d = std::max(den_, o.den_);
  for (int k = den_; k < d; ++k) a = mul_terms(a, q_int2_terms());
  for (int k = o.den_; k < d; ++k) b = mul_terms(b, q_int2_terms());
  terms_ = add_terms(a, b, +1);
  den_ = d;
  normalize();
  return *this;
}

LaurentScalar& LaurentScalar::operator-=(const LaurentScalar& o) { return *this += -o; }

LaurentScalar operator*(const LaurentScalar& a, const LaurentScalar& b) {
  LaurentScalar out;
  out.terms_ = mul_terms(a.terms_, b.terms_);
  out.den_ = out.terms_.empty() ? 0 : a.den_ + b.den_;
  if (out.den_ > 0) out.normalize();
  return out;
}

LaurentScalar& LaurentScalar::operator*=(const LaurentScalar& o) { return *this = *this * o; }

LaurentScalar LaurentScalar::operator-() const {
  LaurentScalar out = *this;
  for (auto& t : out.terms_) t.second = -t.second;
  return out;
}

LaurentScalar LaurentScalar::bar() const {
  LaurentScalar out;
  out.den_ = den_;
  out.terms_.reserve(terms_.size());
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) out.terms_.emplace_back(-it->first, it->second);
  return out;
}

Rational LaurentScalar::eval(const Rational& q0) const {
  if (q0 == 0) throw std::domain_error("cannot evaluate a Laurent polynomial at q = 0");
  auto power = [](const Rational& x, int e) {
    Rational base = e >= 0 ? x : Rational(1 / x);
    Rational r = 1;
    for (int k = 0; k < (e >= 0 ? e : -e); ++k) r *= base;
    return r;
  };
  Rational num;
  for (const auto& [e, c] : terms_) num += c * power(q0, e);
  if (den_ == 0) return num;
  const Rational two = q0 + 1 / q0;
  Rational r = num / power(two, den_);
  r.canonicalize();
  return r;
}

std::optional<LaurentScalar> LaurentScalar::inverse() const {
  if (is_zero()) return std::nullopt;
  Terms p = terms_;
  int m = 0;
  while (p.size() > 1 && divisible_by_q_int2(p)) {
    p = exact_div_q_int2(std::move(p));
    ++m;
  }
  if (p.size() != 1) return std::nullopt;
  LaurentScalar out = monomial(-p[0].first, Rational(1 / p[0].second));
  const int net = den_ - m;
  if (net >= 0) {
    for (int k = 0; k < net; ++k) out *= q_int2();
  } else {
    out.den_ = -net;
    out.normalize();
  }
  return out;
}

LaurentScalar LaurentScalar::div_q_int2(int k) const {
  if (is_zero()) return {};
  LaurentScalar out = *this;
  out.den_ += k;
  out.normalize();
  return out;
}

namespace {

std::string render_numerator(const Terms& terms) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms) {
    const bool negative = c < 0;
    Rational mag = negative ? Rational(-c) : c;
    if (first) {
      if (negative) os << '-';
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    if (e == 0) {
      os << mag.get_str();
      continue;
    }
    if (mag != 1) os << mag.get_str() << '*';
    os << 'q';
    if (e != 1) os << '^' << e;
  }
  return os.str();
}

}  // namespace

std::string LaurentScalar::str() const {
  if (terms_.empty()) return "0";
  std::string num = render_numerator(terms_);
  if (den_ == 0) return num;
  std::string out = "(" + num + ")/(q + q^-1)";
  if (den_ > 1) out += "^" + std::to_string(den_);
  return out;
}

std::size_t LaurentScalar::hash() const {
  std::size_t h = std::hash<int>{}(den_);
  for (const auto& [e, c] : terms_) {
    h = h * 1000003u ^ std::hash<int>{}(e);
    h = h * 1000003u ^ std::hash<std::string>{}(c.get_str());
  }
  return h;
}

}  // namespace qtw

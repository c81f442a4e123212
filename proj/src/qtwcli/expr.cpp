#include "qtw/expr.hpp"

#include <cctype>

namespace qtw::expr {

bool operator==(const Expr& a, const Expr& b) {
  return a.kind == b.kind && a.value == b.value && a.exponent == b.exponent && a.name == b.name &&
         a.indices == b.indices && a.kids == b.kids;
}

ParseError::ParseError(std::size_t column, const std::string& message)
    : std::runtime_error("column " + std::to_string(column) + ": " + message), column_(column) {}

namespace {

Expr leaf(Expr::Kind k) {
  Expr e;
  e.kind = k;
  return e;
}

Expr node(Expr::Kind k, std::vector<Expr> kids) {
  Expr e = leaf(k);
  e.kids = std::move(kids);
  return e;
}

class Parser {
 public:
  Parser(std::string_view src, const nc::Registry* reg) : src_(src), reg_(reg) {}

  Expr run() {
    Expr e = expr();
    skip();
    if (pos_ < src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, std::size_t at) const { throw ParseError(at + 1, msg); }
  [[noreturn]] void fail(const std::string& msg) const { fail(msg, pos_); }

  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  bool peek_digit() {
    skip();
    return pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]));
  }

  std::string digits() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    return std::string(src_.substr(start, pos_ - start));
  }

  int small_int(const std::string& what) {
    const std::size_t at = pos_;
    const std::string d = digits();
    if (d.empty()) fail("expected " + what);
    if (d.size() > 9) fail(what + " too large", at);
    return std::stoi(d);
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (eat('+'))
        e = node(Expr::Kind::Add, {std::move(e), term()});
      else if (eat('-'))
        e = node(Expr::Kind::Sub, {std::move(e), term()});
      else
        return e;
    }
  }

  Expr term() {
    Expr e = unary();
    while (eat('*')) e = node(Expr::Kind::Mul, {std::move(e), unary()});
    return e;
  }

  Expr unary() {
    if (eat('-')) return node(Expr::Kind::Neg, {unary()});
    return primary();
  }

  Expr primary() {
    skip();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    if (eat('(')) {
      Expr e = expr();
      expect(')');
      return e;
    }
    if (peek_digit()) return number();
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
    const std::string id(src_.substr(start, pos_ - start));
    if (id.empty()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    if (id == "q") return qpower();
    if (id == "d") {
      skip();
      if (pos_ < src_.size() && src_[pos_] == '(') {
        expect('(');
        Expr e = node(Expr::Kind::D, {expr()});
        expect(')');
        return e;
      }
    }
    return generator(id, start);
  }

  Expr number() {
    Expr e = leaf(Expr::Kind::Number);
    std::string text = digits();
    if (eat('/')) {
      const std::size_t at = pos_;
      const std::string den = digits();
      if (den.empty()) fail("expected denominator");
      if (den.find_first_not_of('0') == std::string::npos) fail("zero denominator", at);
      text += "/" + den;
    }
    e.value = parse_rational(text);
    return e;
  }

  Expr qpower() {
    Expr e = leaf(Expr::Kind::QPower);
    e.exponent = 1;
    if (!eat('^')) return e;
    skip();
    const std::size_t at = pos_;
    const bool neg = eat('-');
    if (!peek_digit()) fail("malformed exponent", at);
    const int v = small_int("exponent");
    e.exponent = neg ? -v : v;
    return e;
  }

  Expr generator(const std::string& id, std::size_t at) {
    Expr e = leaf(Expr::Kind::Gen);
    e.name = id;
    if (eat('[')) {
      do {
        e.indices.push_back(small_int("index"));
      } while (eat(','));
      expect(']');
    }
    skip();
    if (pos_ < src_.size() && src_[pos_] == '^') fail("malformed exponent: only q takes an exponent");
    if (reg_) validate(e, at);
    return e;
  }

  void validate(const Expr& e, std::size_t at) const {
    const auto fid = reg_->find_family(e.name);
    if (!fid) fail("unknown generator family '" + e.name + "'", at);
    const auto& fam = reg_->family(*fid);
    if (e.indices.size() != fam.spaces.size())
      fail("family '" + e.name + "' takes " + std::to_string(fam.spaces.size()) + " indices", at);
    for (std::size_t k = 0; k < e.indices.size(); ++k)
      if (e.indices[k] < 1 || e.indices[k] > fam.spaces[k].dim)
        fail("index out of range: " + e.name + " index " + std::to_string(k + 1) + " is " +
                 std::to_string(e.indices[k]) + ", " + fam.spaces[k].name + " has dimension " +
                 std::to_string(fam.spaces[k].dim),
             at);
  }

  std::string_view src_;
  const nc::Registry* reg_;
  std::size_t pos_ = 0;
};

int prec(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
      return 1;
    case Expr::Kind::Mul:
      return 2;
    case Expr::Kind::Neg:
      return 3;
    default:
      return 4;
  }
}

std::string render_at(const Expr& e, int min_prec) {
  std::string s;
  switch (e.kind) {
    case Expr::Kind::Number:
      s = e.value.get_str();
      break;
    case Expr::Kind::QPower:
      s = e.exponent == 1 ? "q" : "q^" + std::to_string(e.exponent);
      break;
    case Expr::Kind::Gen:
      s = e.name;
      if (!e.indices.empty()) {
        s += "[";
        for (std::size_t k = 0; k < e.indices.size(); ++k) s += (k ? "," : "") + std::to_string(e.indices[k]);
        s += "]";
      }
      break;
    case Expr::Kind::Neg:
      s = "-" + render_at(e.kids[0], 3);
      break;
    case Expr::Kind::Add:
      s = render_at(e.kids[0], 1) + " + " + render_at(e.kids[1], 2);
      break;
    case Expr::Kind::Sub:
      s = render_at(e.kids[0], 1) + " - " + render_at(e.kids[1], 2);
      break;
    case Expr::Kind::Mul:
      s = render_at(e.kids[0], 2) + " * " + render_at(e.kids[1], 3);
      break;
    case Expr::Kind::D:
      s = "d(" + render_at(e.kids[0], 0) + ")";
      break;
  }
  return prec(e) < min_prec ? "(" + s + ")" : s;
}

}  // namespace

Expr parse(std::string_view source, const nc::Registry& reg) { return Parser(source, &reg).run(); }

Expr parse_unchecked(std::string_view source) { return Parser(source, nullptr).run(); }

std::string render(const Expr& e) { return render_at(e, 0); }

nc::NcPoly to_poly(const Expr& e, const nc::RewriteSystem& rs) {
  using nc::NcPoly;
  switch (e.kind) {
    case Expr::Kind::Number:
      return NcPoly(LaurentScalar(e.value));
    case Expr::Kind::QPower:
      return NcPoly(LaurentScalar::monomial(e.exponent));
    case Expr::Kind::Gen: {
      const auto& reg = rs.registry();
      std::vector<int> idx;
      for (int i : e.indices) idx.push_back(i - 1);
      return NcPoly::gen(reg.gen(reg.family_id(e.name), idx));
    }
    case Expr::Kind::Neg:
      return -to_poly(e.kids[0], rs);
    case Expr::Kind::Add:
      return to_poly(e.kids[0], rs) + to_poly(e.kids[1], rs);
    case Expr::Kind::Sub:
      return to_poly(e.kids[0], rs) - to_poly(e.kids[1], rs);
    case Expr::Kind::Mul:
      return to_poly(e.kids[0], rs) * to_poly(e.kids[1], rs);
    case Expr::Kind::D:
      return nc::exterior_d_raw(to_poly(e.kids[0], rs), rs);
  }
  return {};
}

}  // namespace qtw::expr

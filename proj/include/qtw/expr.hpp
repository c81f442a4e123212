#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qtw/rewrite.hpp"

namespace qtw::expr {

/// Syntax tree of the expression language:
///   expr    := term (('+' | '-') term)*
///   term    := unary ('*' unary)*
///   unary   := '-' unary | primary
///   primary := integer ['/' integer] | 'q' ['^' ['-'] integer]
///            | 'd' '(' expr ')' | name ['[' integer (',' integer)* ']']
///            | '(' expr ')'
/// Generator indices are one-based as written.
struct Expr {
  enum class Kind { Number, QPower, Gen, Neg, Add, Sub, Mul, D };

  Kind kind = Kind::Number;
  Rational value;            // Number
  int exponent = 0;          // QPower
  std::string name;          // Gen
  std::vector<int> indices;  // Gen, one-based
  std::vector<Expr> kids;

  friend bool operator==(const Expr& a, const Expr& b);
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t column, const std::string& message);
  /// One-based column of the offending character.
  std::size_t column() const { return column_; }

 private:
  std::size_t column_;
};

/// Parses and validates generator names and index ranges against reg.
Expr parse(std::string_view source, const nc::Registry& reg);
/// Parses without a registry: names and indices are not checked.
Expr parse_unchecked(std::string_view source);

/// Minimal-parenthesis rendering; parse(render(e)) == e.
std::string render(const Expr& e);

/// Evaluates to a polynomial over rs's registry; d(...) uses the graded
/// differential of rs. The result is not normal-formed.
nc::NcPoly to_poly(const Expr& e, const nc::RewriteSystem& rs);

}  // namespace qtw::expr

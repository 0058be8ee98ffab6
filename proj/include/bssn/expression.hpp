#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bssn {

/// Parse failure at a 1-based column of the source text.
class ExpressionError : public std::runtime_error {
 public:
  ExpressionError(const std::string& what, std::size_t column)
      : std::runtime_error(what), column_(column) {}
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

/// Arithmetic over the variables x1, x2, y.
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('+' | '-') unary | power
///   power   := primary ('^' unary)?          right associative
///   primary := number | x1 | x2 | y | pi | func '(' expr ')' | '(' expr ')'
///   func    := sin | cos | exp | abs
///
/// Compiled to a postfix program; evaluation does not allocate.
class Expression {
 public:
  enum class Variables { Space, SpaceAndState };

  /// Throws ExpressionError. With Variables::Space the identifier y is rejected.
  static Expression parse(std::string_view source, Variables vars = Variables::SpaceAndState);

  double operator()(double x1, double x2, double y = 0.0) const;

  const std::string& source() const noexcept { return source_; }

 private:
  enum class Op : unsigned char { Const, X1, X2, Y, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp, Abs };
  struct Instr {
    Op op;
    double value;
  };

  friend class ExpressionParser;

  std::string source_;
  std::vector<Instr> program_;
  std::size_t max_depth_ = 0;
};

}  // namespace bssn

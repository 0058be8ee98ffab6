#include "bssn/expression.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

namespace bssn {

class ExpressionParser {
 public:
  ExpressionParser(std::string_view src, Expression::Variables vars, Expression& out)
      : src_(src), vars_(vars), out_(out) {}

  void run() {
    skip_space();
    if (pos_ == src_.size()) fail("empty expression");
    expr();
    skip_space();
    if (pos_ != src_.size()) fail(std::string("unexpected '") + src_[pos_] + "'");
  }

 private:
  using Op = Expression::Op;

  [[noreturn]] void fail(const std::string& msg) const { throw ExpressionError(msg, pos_ + 1); }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void emit(Op op, double value = 0.0) {
    out_.program_.push_back({op, value});
    switch (op) {
      case Op::Const: case Op::X1: case Op::X2: case Op::Y: ++depth_; break;
      case Op::Add: case Op::Sub: case Op::Mul: case Op::Div: case Op::Pow: --depth_; break;
      default: break;
    }
    if (depth_ > out_.max_depth_) out_.max_depth_ = depth_;
  }

  void expr() {
    term();
    while (true) {
      if (accept('+')) {
        term();
        emit(Op::Add);
      } else if (accept('-')) {
        term();
        emit(Op::Sub);
      } else {
        return;
      }
    }
  }

  void term() {
    unary();
    while (true) {
      if (accept('*')) {
        unary();
        emit(Op::Mul);
      } else if (accept('/')) {
        unary();
        emit(Op::Div);
      } else {
        return;
      }
    }
  }

  void unary() {
    if (accept('-')) {
      unary();
      emit(Op::Neg);
    } else if (accept('+')) {
      unary();
    } else {
      power();
    }
  }

  void power() {
    primary();
    if (accept('^')) {
      unary();
      emit(Op::Pow);
    }
  }

  void primary() {
    skip_space();
    if (pos_ == src_.size()) fail("unexpected end of expression");
    const char c = src_[pos_];

    if (c == '(') {
      ++pos_;
      expr();
      if (!accept(')')) fail("expected ')'");
      return;
    }

    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double value = 0.0;
      const char* first = src_.data() + pos_;
      const auto [ptr, ec] = std::from_chars(first, src_.data() + src_.size(), value);
      if (ec != std::errc()) fail("malformed number");
      pos_ += static_cast<std::size_t>(ptr - first);
      emit(Op::Const, value);
      return;
    }

    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      const std::string_view name = src_.substr(start, pos_ - start);

      static constexpr std::array<std::pair<std::string_view, Op>, 4> functions{
          {{"sin", Op::Sin}, {"cos", Op::Cos}, {"exp", Op::Exp}, {"abs", Op::Abs}}};
      for (const auto& [fname, op] : functions) {
        if (name == fname) {
          if (!accept('(')) fail("expected '(' after " + std::string(name));
          expr();
          if (!accept(')')) fail("expected ')'");
          emit(op);
          return;
        }
      }
      if (name == "x1") return emit(Op::X1);
      if (name == "x2") return emit(Op::X2);
      if (name == "pi") return emit(Op::Const, std::numbers::pi);
      if (name == "y") {
        if (vars_ == Expression::Variables::Space) {
          pos_ = start;
          fail("y is not available here");
        }
        return emit(Op::Y);
      }
      pos_ = start;
      fail("unknown identifier '" + std::string(name) + "'");
    }

    fail(std::string("unexpected '") + c + "'");
  }

  std::string_view src_;
  Expression::Variables vars_;
  Expression& out_;
  std::size_t pos_ = 0;
  std::size_t depth_ = 0;
};

Expression Expression::parse(std::string_view source, Variables vars) {
  Expression e;
  e.source_ = std::string(source);
  ExpressionParser(e.source_, vars, e).run();
  return e;
}

double Expression::operator()(double x1, double x2, double y) const {
  // Parser depth is small in practice; keep a fixed stack and fall back for deep inputs.
  constexpr std::size_t kInline = 64;
  std::array<double, kInline> inline_stack{};
  std::vector<double> heap_stack;
  double* stack = inline_stack.data();
  if (max_depth_ > kInline) {
    heap_stack.resize(max_depth_);
    stack = heap_stack.data();
  }

  std::size_t top = 0;
  for (const Instr& in : program_) {
    switch (in.op) {
      case Op::Const: stack[top++] = in.value; break;
      case Op::X1: stack[top++] = x1; break;
      case Op::X2: stack[top++] = x2; break;
      case Op::Y: stack[top++] = y; break;
      case Op::Add: --top; stack[top - 1] += stack[top]; break;
      case Op::Sub: --top; stack[top - 1] -= stack[top]; break;
      case Op::Mul: --top; stack[top - 1] *= stack[top]; break;
      case Op::Div: --top; stack[top - 1] /= stack[top]; break;
      case Op::Pow: --top; stack[top - 1] = std::pow(stack[top - 1], stack[top]); break;
      case Op::Neg: stack[top - 1] = -stack[top - 1]; break;
      case Op::Sin: stack[top - 1] = std::sin(stack[top - 1]); break;
      case Op::Cos: stack[top - 1] = std::cos(stack[top - 1]); break;
      case Op::Exp: stack[top - 1] = std::exp(stack[top - 1]); break;
      case Op::Abs: stack[top - 1] = std::abs(stack[top - 1]); break;
    }
  }
  return stack[0];
}

}  // namespace bssn

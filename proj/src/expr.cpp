#include "filterlab/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

#include "filterlab/error.hpp"

namespace filterlab {

namespace {

using Op = Expression::Op;
using Instr = Expression::Instr;

class Parser {
 public:
  Parser(std::string_view text, std::string_view variable) : s_(text), var_(variable) {}

  std::vector<Instr> run() {
    expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return std::move(out_);
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("expression '" + std::string(s_) + "': " + msg + " at offset " +
                         std::to_string(pos_),
                     pos_);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void emit(Op op, double v = 0.0) { out_.push_back({op, v}); }

  void expr() {
    term();
    for (;;) {
      if (eat('+')) {
        term();
        emit(Op::add);
      } else if (eat('-')) {
        term();
        emit(Op::sub);
      } else {
        return;
      }
    }
  }

  void term() {
    unary();
    for (;;) {
      if (eat('*')) {
        unary();
        emit(Op::mul);
      } else if (eat('/')) {
        unary();
        emit(Op::div);
      } else {
        return;
      }
    }
  }

  void unary() {
    if (eat('-')) {
      unary();
      emit(Op::neg);
      return;
    }
    if (eat('+')) {
      unary();
      return;
    }
    power();
  }

  void power() {
    primary();
    if (eat('^')) {
      unary();
      emit(Op::pow);
    }
  }

  std::size_t arguments() {
    if (!eat('(')) fail("expected '('");
    std::size_t count = 0;
    do {
      expr();
      ++count;
    } while (eat(','));
    if (!eat(')')) fail("expected ')'");
    return count;
  }

  void primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      expr();
      if (!eat(')')) fail("expected ')'");
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = 0.0;
      const char* first = s_.data() + pos_;
      auto [ptr, ec] = std::from_chars(first, s_.data() + s_.size(), v);
      if (ec != std::errc{}) fail("bad number");
      pos_ += static_cast<std::size_t>(ptr - first);
      emit(Op::constant, v);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      const std::string_view id = s_.substr(start, pos_ - start);
      if (id == var_) return emit(Op::variable);
      if (id == "pi") return emit(Op::constant, std::numbers::pi);
      if (id == "e") return emit(Op::constant, std::numbers::e);
      function(id);
      return;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  void function(std::string_view id) {
    struct Fn {
      std::string_view name;
      Op op;
      std::size_t arity;
    };
    static constexpr std::array<Fn, 12> table{{
        {"log", Op::log, 1},   {"ln", Op::log, 1},     {"log1p", Op::log1p, 1},
        {"exp", Op::exp, 1},   {"sqrt", Op::sqrt, 1},  {"abs", Op::abs, 1},
        {"sin", Op::sin, 1},   {"cos", Op::cos, 1},    {"floor", Op::floor, 1},
        {"pow", Op::pow, 2},   {"min", Op::min, 2},    {"max", Op::max, 2},
    }};
    const auto it = std::find_if(table.begin(), table.end(), [&](const Fn& f) { return f.name == id; });
    if (it == table.end()) fail("unknown identifier '" + std::string(id) + "'");
    const std::size_t n = arguments();
    if (n != it->arity)
      fail("function '" + std::string(id) + "' takes " + std::to_string(it->arity) + " argument(s)");
    emit(it->op);
  }

  std::string_view s_;
  std::string_view var_;
  std::size_t pos_ = 0;
  std::vector<Instr> out_;
};

std::size_t stack_depth(const std::vector<Instr>& program) {
  std::size_t depth = 0, best = 0;
  for (const Instr& in : program) {
    switch (in.op) {
      case Op::constant:
      case Op::variable: ++depth; break;
      case Op::add: case Op::sub: case Op::mul: case Op::div:
      case Op::pow: case Op::min: case Op::max: --depth; break;
      default: break;
    }
    best = std::max(best, depth);
  }
  return best;
}

}  // namespace

Expression Expression::parse(std::string_view text, std::string_view variable) {
  Expression e;
  e.text_ = std::string(text);
  e.variable_ = std::string(variable);
  e.program_ = Parser(text, variable).run();
  e.max_stack_ = stack_depth(e.program_);
  if (e.max_stack_ > 64) throw ParseError("expression too deeply nested: " + e.text_);
  return e;
}

double Expression::operator()(double value) const noexcept {
  double stack[64];
  std::size_t sp = 0;
  for (const Instr& in : program_) {
    switch (in.op) {
      case Op::constant: stack[sp++] = in.value; break;
      case Op::variable: stack[sp++] = value; break;
      case Op::add: --sp; stack[sp - 1] += stack[sp]; break;
      case Op::sub: --sp; stack[sp - 1] -= stack[sp]; break;
      case Op::mul: --sp; stack[sp - 1] *= stack[sp]; break;
      case Op::div: --sp; stack[sp - 1] /= stack[sp]; break;
      case Op::pow: --sp; stack[sp - 1] = std::pow(stack[sp - 1], stack[sp]); break;
      case Op::min: --sp; stack[sp - 1] = std::min(stack[sp - 1], stack[sp]); break;
      case Op::max: --sp; stack[sp - 1] = std::max(stack[sp - 1], stack[sp]); break;
      case Op::neg: stack[sp - 1] = -stack[sp - 1]; break;
      case Op::log: stack[sp - 1] = std::log(stack[sp - 1]); break;
      case Op::log1p: stack[sp - 1] = std::log1p(stack[sp - 1]); break;
      case Op::exp: stack[sp - 1] = std::exp(stack[sp - 1]); break;
      case Op::sqrt: stack[sp - 1] = std::sqrt(stack[sp - 1]); break;
      case Op::abs: stack[sp - 1] = std::fabs(stack[sp - 1]); break;
      case Op::sin: stack[sp - 1] = std::sin(stack[sp - 1]); break;
      case Op::cos: stack[sp - 1] = std::cos(stack[sp - 1]); break;
      case Op::floor: stack[sp - 1] = std::floor(stack[sp - 1]); break;
    }
  }
  return stack[0];
}

}  // namespace filterlab

#pragma once
// Small arithmetic expression language over one variable, e.g. "log(1+t)",
// "t^0.5", "(-1)^n / n". Parsed once into a flat postfix program, so
// evaluation is a tight loop with no allocation.
//
// Grammar:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | variable | 'pi' | 'e' | func '(' expr (',' expr)* ')' | '(' expr ')'
// Functions: log ln log1p exp sqrt abs sin cos floor pow min max.

#include <string>
#include <string_view>
#include <vector>

namespace filterlab {

class Expression {
 public:
  /// Throws ParseError on malformed text or unknown identifiers.
  static Expression parse(std::string_view text, std::string_view variable);

  double operator()(double value) const noexcept;

  const std::string& text() const noexcept { return text_; }
  const std::string& variable() const noexcept { return variable_; }

  enum class Op : unsigned char {
    constant, variable, add, sub, mul, div, neg, pow,
    log, log1p, exp, sqrt, abs, sin, cos, floor, min, max
  };
  struct Instr {
    Op op;
    double value;
  };

 private:
  Expression() = default;
  std::string text_;
  std::string variable_;
  std::vector<Instr> program_;
  std::size_t max_stack_ = 0;
};

}  // namespace filterlab

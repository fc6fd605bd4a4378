#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "heatlab/common.hpp"

namespace heatlab {

// Tiny arithmetic expression language used by weight batteries and the
// --weight / --forcing CLI flags.  Grammar (version 1):
//
//   expr   := term  (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' unary)?                  right-associative
//   atom   := number | name | call | '(' expr ')' | '|' expr '|'
//   call   := ('abs'|'exp'|'sqrt'|'log') '(' expr ')'
//           | ('min'|'max'|'pow') '(' expr ',' expr ')'
//
// Names are free variables bound at evaluation time; weights use x,
// space-time forcings use y and s.  Numbers are ordinary decimal
// literals.  '|e|' is shorthand for abs(e).  Anything else is a parse
// error (config_error), including unbound names at eval time.
inline constexpr int kExprGrammarVersion = 1;

class Expr {
  public:
    // evaluate with the single variable "x" bound
    double operator()(double x) const;
    // evaluate with explicit name bindings
    double eval(const std::vector<std::pair<std::string, double>>& vars) const;
    // natural log of the value.  When the outermost operation is exp(.)
    // the wrapper is peeled off and the argument returned directly, so
    // exp(-4*x^2) keeps its exact log far past where the linear value
    // under- or overflows.  Other shapes go through log(eval).
    double eval_log(const std::vector<std::pair<std::string, double>>& vars) const;

    const std::string& source() const { return source_; }
    const std::vector<std::string>& variables() const { return names_; }

  private:
    // flat postfix program for a small stack machine
    enum class Op : std::uint8_t {
        push_const, push_var,
        neg, abs_, exp_, sqrt_, log_,
        add, sub, mul, div, pow_, min_, max_,
    };
    struct Instr {
        Op op;
        double value = 0.0;     // push_const
        std::size_t slot = 0;   // push_var
    };
    std::vector<Instr> code_;
    std::vector<std::string> names_;
    std::string source_;

    double run(const std::vector<std::pair<std::string, double>>& vars,
               std::size_t count) const;

    friend Expr parse_expr(const std::string& src);
    friend class ExprParser;
};

Expr parse_expr(const std::string& src);

}  // namespace heatlab

#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shs/dual.hpp"
#include "shs/errors.hpp"

namespace shs {

// Function set of the expression language. Fixed for v1.
enum class Func { Sin, Cos, Exp, Log, Sqrt, Tanh };

std::string_view func_name(Func f);

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Declared symbols of a field: phase-space coordinates first, then
// parameters. Slot order is also the evaluation-environment layout.
class SymbolTable {
public:
  SymbolTable() = default;
  SymbolTable(std::vector<std::string> variables, std::vector<std::string> parameters);

  int size() const { return static_cast<int>(variables_.size() + parameters_.size()); }
  int variable_count() const { return static_cast<int>(variables_.size()); }
  bool is_variable(int slot) const { return slot >= 0 && slot < variable_count(); }

  // Returns -1 when the name is not declared.
  int slot_of(std::string_view name) const;
  const std::string& name_of(int slot) const;

  const std::vector<std::string>& variables() const { return variables_; }
  const std::vector<std::string>& parameters() const { return parameters_; }

private:
  std::vector<std::string> variables_;
  std::vector<std::string> parameters_;
};

// Slot-indexed bindings for one evaluation. Covers exactly the symbols the
// table declares; variable slots are overwritten point by point, parameter
// slots are set once.
class EvalEnv {
public:
  explicit EvalEnv(const SymbolTable& symbols)
      : symbols_(&symbols), values_(symbols.size(), 0.0) {}

  void set(std::string_view name, double value);
  double get(std::string_view name) const;

  double& operator[](int slot) { return values_[slot]; }
  double operator[](int slot) const { return values_[slot]; }

  std::span<const double> values() const { return values_; }
  const SymbolTable& symbols() const { return *symbols_; }

private:
  const SymbolTable* symbols_;
  std::vector<double> values_;
};

// Immutable expression AST. Identifier nodes come out of the parser
// unresolved; bind_symbols() maps them to variable/parameter slots of a SymbolTable
// and must run before eval. Trees are shared freely across threads.
class Expr {
public:
  enum class Kind {
    Number,     // literal
    Ident,      // unresolved reference (parser output)
    Variable,   // bound coordinate reference
    Parameter,  // bound parameter reference
    Neg,
    Add, Sub, Mul, Div, Pow,
    Call,
  };

  static ExprPtr number(double value);
  static ExprPtr ident(std::string name);
  static ExprPtr variable(std::string name, int slot);
  static ExprPtr parameter(std::string name, int slot);
  static ExprPtr neg(ExprPtr operand);
  static ExprPtr binary(Kind op, ExprPtr lhs, ExprPtr rhs);
  static ExprPtr call(Func f, ExprPtr argument);

  Kind kind() const { return kind_; }
  double number_value() const { return number_; }
  const std::string& name() const { return name_; }
  int slot() const { return slot_; }
  Func func() const { return func_; }
  const ExprPtr& left() const { return left_; }    // also unary operand / call argument
  const ExprPtr& right() const { return right_; }

private:
  Expr() = default;

  Kind kind_ = Kind::Number;
  double number_ = 0.0;
  std::string name_;
  int slot_ = -1;
  Func func_ = Func::Sin;
  ExprPtr left_;
  ExprPtr right_;
};

// Parses the expression grammar (see docs/formats.md). Precedence
// ^  >  unary -  >  * /  >  + -, with ^ right-associative and the rest
// left-associative. Throws ParseError with a byte offset.
ExprPtr parse(std::string_view source);

// Resolves every identifier against `symbols`; throws UnknownSymbolError.
// Returns a fully bound copy, sharing untouched subtrees where possible.
ExprPtr bind_symbols(const ExprPtr& e, const SymbolTable& symbols);

// Prints an AST back to parseable source with minimal parentheses.
std::string print(const Expr& e);
inline std::string print(const ExprPtr& e) { return print(*e); }

// Plain IEEE double evaluation of a bound tree.
double eval(const Expr& e, std::span<const double> env);
inline double eval(const ExprPtr& e, const EvalEnv& env) { return eval(*e, env.values()); }

// Forward-mode evaluation: deriv is the exact partial derivative with
// respect to the variable in `seed_slot`, up to rounding.
Dual eval_dual(const Expr& e, std::span<const double> env, int seed_slot);
inline Dual eval_dual(const ExprPtr& e, const EvalEnv& env, int seed_slot) {
  return eval_dual(*e, env.values(), seed_slot);
}

// Symbolic derivative with respect to the named variable, with constant
// folding (0*x, x+0, 1*x, literal arithmetic). Only semantic equality with
// eval_dual is promised, not a particular tree shape.
ExprPtr differentiate(const ExprPtr& e, std::string_view var);

}  // namespace shs

#include "shs/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <utility>

namespace shs {

namespace {

constexpr std::array<std::string_view, 6> kFuncNames = {"sin", "cos", "exp",
                                                        "log", "sqrt", "tanh"};

bool is_integer(double x) { return std::isfinite(x) && x == std::floor(x); }

}  // namespace

std::string_view func_name(Func f) { return kFuncNames[static_cast<int>(f)]; }

// ---------------------------------------------------------------------------
// SymbolTable / EvalEnv

SymbolTable::SymbolTable(std::vector<std::string> variables,
                         std::vector<std::string> parameters)
    : variables_(std::move(variables)), parameters_(std::move(parameters)) {}

int SymbolTable::slot_of(std::string_view name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i)
    if (variables_[i] == name) return static_cast<int>(i);
  for (std::size_t i = 0; i < parameters_.size(); ++i)
    if (parameters_[i] == name) return static_cast<int>(variables_.size() + i);
  return -1;
}

const std::string& SymbolTable::name_of(int slot) const {
  const int nv = variable_count();
  return slot < nv ? variables_[slot] : parameters_[slot - nv];
}

void EvalEnv::set(std::string_view name, double value) {
  const int slot = symbols_->slot_of(name);
  if (slot < 0) throw UnknownSymbolError(std::string(name));
  values_[slot] = value;
}

double EvalEnv::get(std::string_view name) const {
  const int slot = symbols_->slot_of(name);
  if (slot < 0) throw UnknownSymbolError(std::string(name));
  return values_[slot];
}

// ---------------------------------------------------------------------------
// Node constructors

ExprPtr Expr::number(double value) {
  auto e = std::shared_ptr<Expr>(new Expr);
  e->kind_ = Kind::Number;
  e->number_ = value;
  return e;
}

ExprPtr Expr::ident(std::string name) {
  auto e = std::shared_ptr<Expr>(new Expr);
  e->kind_ = Kind::Ident;
  e->name_ = std::move(name);
  return e;
}

ExprPtr Expr::variable(std::string name, int slot) {
  auto e = std::shared_ptr<Expr>(new Expr);
  e->kind_ = Kind::Variable;
  e->name_ = std::move(name);
  e->slot_ = slot;
  return e;
}

ExprPtr Expr::parameter(std::string name, int slot) {
  auto e = std::shared_ptr<Expr>(new Expr);
  e->kind_ = Kind::Parameter;
  e->name_ = std::move(name);
  e->slot_ = slot;
  return e;
}

ExprPtr Expr::neg(ExprPtr operand) {
  auto e = std::shared_ptr<Expr>(new Expr);
  e->kind_ = Kind::Neg;
  e->left_ = std::move(operand);
  return e;
}

ExprPtr Expr::binary(Kind op, ExprPtr lhs, ExprPtr rhs) {
  auto e = std::shared_ptr<Expr>(new Expr);
  e->kind_ = op;
  e->left_ = std::move(lhs);
  e->right_ = std::move(rhs);
  return e;
}

ExprPtr Expr::call(Func f, ExprPtr argument) {
  auto e = std::shared_ptr<Expr>(new Expr);
  e->kind_ = Kind::Call;
  e->func_ = f;
  e->left_ = std::move(argument);
  return e;
}

// ---------------------------------------------------------------------------
// Parser
//
//   expression = term { ("+" | "-") term }
//   term       = unary { ("*" | "/") unary }
//   unary      = "-" unary | power
//   power      = atom [ "^" unary ]
//   atom       = number | ident | func "(" expression ")" | "(" expression ")"

namespace {

class Parser {
public:
  explicit Parser(std::string_view src) : src_(src) {}

  ExprPtr run() {
    skip_space();
    if (pos_ >= src_.size()) throw ParseError("empty expression", 0);
    ExprPtr e = expression();
    skip_space();
    if (pos_ < src_.size())
      throw ParseError("unexpected '" + std::string(1, src_[pos_]) +
                           "', expected end of expression",
                       pos_);
    return e;
  }

private:
  ExprPtr expression() {
    ExprPtr e = term();
    for (;;) {
      skip_space();
      if (accept('+'))
        e = Expr::binary(Expr::Kind::Add, e, term());
      else if (accept('-'))
        e = Expr::binary(Expr::Kind::Sub, e, term());
      else
        return e;
    }
  }

  ExprPtr term() {
    ExprPtr e = unary();
    for (;;) {
      skip_space();
      if (accept('*'))
        e = Expr::binary(Expr::Kind::Mul, e, unary());
      else if (accept('/'))
        e = Expr::binary(Expr::Kind::Div, e, unary());
      else
        return e;
    }
  }

  ExprPtr unary() {
    skip_space();
    if (accept('-')) return Expr::neg(unary());
    return power();
  }

  ExprPtr power() {
    ExprPtr base = atom();
    skip_space();
    if (accept('^')) return Expr::binary(Expr::Kind::Pow, base, unary());
    return base;
  }

  ExprPtr atom() {
    skip_space();
    if (pos_ >= src_.size())
      throw ParseError("unexpected end of expression, expected a value", pos_);
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return ident_or_call();
    if (accept('(')) {
      ExprPtr e = expression();
      expect(')');
      return e;
    }
    throw ParseError("unexpected '" + std::string(1, c) + "', expected a value", pos_);
  }

  ExprPtr number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    if (pos_ == start || (pos_ == start + 1 && src_[start] == '.'))
      throw ParseError("malformed number", start);
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t mark = pos_++;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        pos_ = mark;  // the 'e' belongs to an identifier-like token, not us
      } else {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    double value = 0.0;
    const auto first = src_.data() + start;
    const auto last = src_.data() + pos_;
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last)
      throw ParseError("malformed number", start);
    return Expr::number(value);
  }

  ExprPtr ident_or_call() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    std::string name(src_.substr(start, pos_ - start));
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == '(') {
      int fi = -1;
      for (std::size_t i = 0; i < kFuncNames.size(); ++i)
        if (kFuncNames[i] == name) fi = static_cast<int>(i);
      if (fi < 0) throw ParseError("unknown function '" + name + "'", start);
      ++pos_;
      ExprPtr arg = expression();
      expect(')');
      return Expr::call(static_cast<Func>(fi), arg);
    }
    return Expr::ident(std::move(name));
  }

  void skip_space() {
    while (pos_ < src_.size() &&
           (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\r'))
      ++pos_;
  }

  bool accept(char c) {
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    skip_space();
    if (!accept(c))
      throw ParseError(std::string("expected '") + c + "'", pos_);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

ExprPtr parse(std::string_view source) { return Parser(source).run(); }

// ---------------------------------------------------------------------------
// Binding

ExprPtr bind_symbols(const ExprPtr& e, const SymbolTable& symbols) {
  switch (e->kind()) {
    case Expr::Kind::Number:
      return e;
    case Expr::Kind::Ident:
    case Expr::Kind::Variable:
    case Expr::Kind::Parameter: {
      const int slot = symbols.slot_of(e->name());
      if (slot < 0) throw UnknownSymbolError(e->name());
      return symbols.is_variable(slot) ? Expr::variable(e->name(), slot)
                                       : Expr::parameter(e->name(), slot);
    }
    case Expr::Kind::Neg:
      return Expr::neg(bind_symbols(e->left(), symbols));
    case Expr::Kind::Call:
      return Expr::call(e->func(), bind_symbols(e->left(), symbols));
    default:
      return Expr::binary(e->kind(), bind_symbols(e->left(), symbols),
                          bind_symbols(e->right(), symbols));
  }
}

// ---------------------------------------------------------------------------
// Printer

namespace {

// Precedence used for minimal parenthesization. Atoms rank highest.
int precedence(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
      return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div:
      return 2;
    case Expr::Kind::Neg:
      return 3;
    case Expr::Kind::Pow:
      return 4;
    case Expr::Kind::Number:
      return e.number_value() < 0 ? 3 : 5;
    default:
      return 5;
  }
}

void print_number(double v, std::string& out) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

void print_node(const Expr& e, int min_prec, std::string& out) {
  const bool parens = precedence(e) < min_prec;
  if (parens) out.push_back('(');
  switch (e.kind()) {
    case Expr::Kind::Number:
      print_number(e.number_value(), out);
      break;
    case Expr::Kind::Ident:
    case Expr::Kind::Variable:
    case Expr::Kind::Parameter:
      out += e.name();
      break;
    case Expr::Kind::Neg:
      out.push_back('-');
      print_node(*e.left(), 3, out);
      break;
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
      print_node(*e.left(), 1, out);
      out.push_back(e.kind() == Expr::Kind::Add ? '+' : '-');
      print_node(*e.right(), 2, out);
      break;
    case Expr::Kind::Mul:
    case Expr::Kind::Div:
      print_node(*e.left(), 2, out);
      out.push_back(e.kind() == Expr::Kind::Mul ? '*' : '/');
      print_node(*e.right(), 3, out);
      break;
    case Expr::Kind::Pow:
      print_node(*e.left(), 5, out);
      out.push_back('^');
      print_node(*e.right(), 3, out);  // exponent slot admits unary minus
      break;
    case Expr::Kind::Call:
      out += func_name(e.func());
      out.push_back('(');
      print_node(*e.left(), 0, out);
      out.push_back(')');
      break;
  }
  if (parens) out.push_back(')');
}

}  // namespace

std::string print(const Expr& e) {
  std::string out;
  print_node(e, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

[[noreturn]] void domain_error(const char* message, const Expr& e) {
  throw EvalError(message, print(e));
}

}  // namespace

double eval(const Expr& e, std::span<const double> env) {
  switch (e.kind()) {
    case Expr::Kind::Number:
      return e.number_value();
    case Expr::Kind::Variable:
    case Expr::Kind::Parameter:
      return env[e.slot()];
    case Expr::Kind::Ident:
      throw Error("evaluating unbound expression '" + print(e) + "'");
    case Expr::Kind::Neg:
      return -eval(*e.left(), env);
    case Expr::Kind::Add:
      return eval(*e.left(), env) + eval(*e.right(), env);
    case Expr::Kind::Sub:
      return eval(*e.left(), env) - eval(*e.right(), env);
    case Expr::Kind::Mul:
      return eval(*e.left(), env) * eval(*e.right(), env);
    case Expr::Kind::Div: {
      const double num = eval(*e.left(), env);
      const double den = eval(*e.right(), env);
      if (den == 0.0) domain_error("division by zero", e);
      return num / den;
    }
    case Expr::Kind::Pow: {
      const double base = eval(*e.left(), env);
      const double expo = eval(*e.right(), env);
      if (base == 0.0 && expo < 0.0) domain_error("zero raised to a negative power", e);
      if (base < 0.0 && !is_integer(expo))
        domain_error("negative base with non-integer exponent", e);
      return std::pow(base, expo);
    }
    case Expr::Kind::Call: {
      const double a = eval(*e.left(), env);
      switch (e.func()) {
        case Func::Sin:  return std::sin(a);
        case Func::Cos:  return std::cos(a);
        case Func::Exp:  return std::exp(a);
        case Func::Tanh: return std::tanh(a);
        case Func::Log:
          if (a <= 0.0) domain_error("log of a non-positive value", e);
          return std::log(a);
        case Func::Sqrt:
          if (a < 0.0) domain_error("sqrt of a negative value", e);
          return std::sqrt(a);
      }
      break;
    }
  }
  throw Error("corrupt expression node");
}

Dual eval_dual(const Expr& e, std::span<const double> env, int seed_slot) {
  switch (e.kind()) {
    case Expr::Kind::Number:
      return {e.number_value(), 0.0};
    case Expr::Kind::Variable:
      return {env[e.slot()], e.slot() == seed_slot ? 1.0 : 0.0};
    case Expr::Kind::Parameter:
      return {env[e.slot()], 0.0};
    case Expr::Kind::Ident:
      throw Error("evaluating unbound expression '" + print(e) + "'");
    case Expr::Kind::Neg:
      return -eval_dual(*e.left(), env, seed_slot);
    case Expr::Kind::Add:
      return eval_dual(*e.left(), env, seed_slot) + eval_dual(*e.right(), env, seed_slot);
    case Expr::Kind::Sub:
      return eval_dual(*e.left(), env, seed_slot) - eval_dual(*e.right(), env, seed_slot);
    case Expr::Kind::Mul:
      return eval_dual(*e.left(), env, seed_slot) * eval_dual(*e.right(), env, seed_slot);
    case Expr::Kind::Div: {
      const Dual num = eval_dual(*e.left(), env, seed_slot);
      const Dual den = eval_dual(*e.right(), env, seed_slot);
      if (den.value == 0.0) domain_error("division by zero", e);
      return num / den;
    }
    case Expr::Kind::Pow: {
      const Dual base = eval_dual(*e.left(), env, seed_slot);
      const Dual expo = eval_dual(*e.right(), env, seed_slot);
      if (expo.deriv == 0.0) {
        // Constant exponent: power rule, valid for negative bases with
        // integer exponents.
        const double c = expo.value;
        if (base.value < 0.0 && !is_integer(c))
          domain_error("negative base with non-integer exponent", e);
        if (base.value == 0.0) {
          if (c > 1.0) return {0.0, 0.0};
          if (c == 1.0) return {0.0, base.deriv};
          if (c == 0.0) return {1.0, 0.0};
          domain_error("derivative of power singular at zero base", e);
        }
        return {std::pow(base.value, c),
                c * std::pow(base.value, c - 1.0) * base.deriv};
      }
      if (base.value <= 0.0)
        domain_error("non-positive base with varying exponent", e);
      const double v = std::pow(base.value, expo.value);
      return {v, v * (expo.deriv * std::log(base.value) +
                      expo.value * base.deriv / base.value)};
    }
    case Expr::Kind::Call: {
      const Dual a = eval_dual(*e.left(), env, seed_slot);
      switch (e.func()) {
        case Func::Sin:  return sin(a);
        case Func::Cos:  return cos(a);
        case Func::Exp:  return exp(a);
        case Func::Tanh: return tanh(a);
        case Func::Log:
          if (a.value <= 0.0) domain_error("log of a non-positive value", e);
          return log(a);
        case Func::Sqrt:
          if (a.value < 0.0) domain_error("sqrt of a negative value", e);
          if (a.value == 0.0 && a.deriv != 0.0)
            domain_error("derivative of sqrt singular at zero", e);
          return a.value == 0.0 ? Dual{0.0, 0.0} : sqrt(a);
      }
      break;
    }
  }
  throw Error("corrupt expression node");
}

// ---------------------------------------------------------------------------
// Symbolic differentiation with constant folding

namespace {

bool is_number(const ExprPtr& e, double v) {
  return e->kind() == Expr::Kind::Number && e->number_value() == v;
}

ExprPtr fold_neg(ExprPtr a) {
  if (a->kind() == Expr::Kind::Number) {
    const double v = -a->number_value();
    if (std::isfinite(v)) return Expr::number(v);
  }
  return Expr::neg(std::move(a));
}

ExprPtr fold_add(ExprPtr a, ExprPtr b) {
  if (is_number(a, 0.0)) return b;
  if (is_number(b, 0.0)) return a;
  if (a->kind() == Expr::Kind::Number && b->kind() == Expr::Kind::Number) {
    const double v = a->number_value() + b->number_value();
    if (std::isfinite(v)) return Expr::number(v);
  }
  return Expr::binary(Expr::Kind::Add, std::move(a), std::move(b));
}

ExprPtr fold_sub(ExprPtr a, ExprPtr b) {
  if (is_number(b, 0.0)) return a;
  if (is_number(a, 0.0)) return fold_neg(std::move(b));
  if (a->kind() == Expr::Kind::Number && b->kind() == Expr::Kind::Number) {
    const double v = a->number_value() - b->number_value();
    if (std::isfinite(v)) return Expr::number(v);
  }
  return Expr::binary(Expr::Kind::Sub, std::move(a), std::move(b));
}

ExprPtr fold_mul(ExprPtr a, ExprPtr b) {
  if (is_number(a, 0.0) || is_number(b, 0.0)) return Expr::number(0.0);
  if (is_number(a, 1.0)) return b;
  if (is_number(b, 1.0)) return a;
  if (a->kind() == Expr::Kind::Number && b->kind() == Expr::Kind::Number) {
    const double v = a->number_value() * b->number_value();
    if (std::isfinite(v)) return Expr::number(v);
  }
  return Expr::binary(Expr::Kind::Mul, std::move(a), std::move(b));
}

ExprPtr fold_div(ExprPtr a, ExprPtr b) {
  if (is_number(b, 1.0)) return a;
  if (a->kind() == Expr::Kind::Number && b->kind() == Expr::Kind::Number &&
      b->number_value() != 0.0) {
    const double v = a->number_value() / b->number_value();
    if (std::isfinite(v)) return Expr::number(v);
  }
  return Expr::binary(Expr::Kind::Div, std::move(a), std::move(b));
}

ExprPtr fold_pow(ExprPtr a, ExprPtr b) {
  if (is_number(b, 1.0)) return a;
  if (is_number(b, 0.0)) return Expr::number(1.0);
  return Expr::binary(Expr::Kind::Pow, std::move(a), std::move(b));
}

}  // namespace

ExprPtr differentiate(const ExprPtr& e, std::string_view var) {
  switch (e->kind()) {
    case Expr::Kind::Number:
    case Expr::Kind::Parameter:
      return Expr::number(0.0);
    case Expr::Kind::Ident:
    case Expr::Kind::Variable:
      return Expr::number(e->name() == var ? 1.0 : 0.0);
    case Expr::Kind::Neg:
      return fold_neg(differentiate(e->left(), var));
    case Expr::Kind::Add:
      return fold_add(differentiate(e->left(), var), differentiate(e->right(), var));
    case Expr::Kind::Sub:
      return fold_sub(differentiate(e->left(), var), differentiate(e->right(), var));
    case Expr::Kind::Mul:
      return fold_add(fold_mul(differentiate(e->left(), var), e->right()),
                      fold_mul(e->left(), differentiate(e->right(), var)));
    case Expr::Kind::Div:
      // (u/v)' = (u'v - uv') / v^2
      return fold_div(
          fold_sub(fold_mul(differentiate(e->left(), var), e->right()),
                   fold_mul(e->left(), differentiate(e->right(), var))),
          fold_pow(e->right(), Expr::number(2.0)));
    case Expr::Kind::Pow: {
      const ExprPtr& u = e->left();
      const ExprPtr& v = e->right();
      if (v->kind() == Expr::Kind::Number) {
        // Power rule: (u^c)' = c * u^(c-1) * u'
        const double c = v->number_value();
        return fold_mul(fold_mul(Expr::number(c), fold_pow(u, Expr::number(c - 1.0))),
                        differentiate(u, var));
      }
      // General: (u^v)' = u^v * (v' * log(u) + v * u' / u)
      return fold_mul(
          fold_pow(u, v),
          fold_add(fold_mul(differentiate(v, var), Expr::call(Func::Log, u)),
                   fold_div(fold_mul(v, differentiate(u, var)), u)));
    }
    case Expr::Kind::Call: {
      const ExprPtr& u = e->left();
      ExprPtr du = differentiate(u, var);
      switch (e->func()) {
        case Func::Sin:
          return fold_mul(Expr::call(Func::Cos, u), std::move(du));
        case Func::Cos:
          return fold_mul(fold_neg(Expr::call(Func::Sin, u)), std::move(du));
        case Func::Exp:
          return fold_mul(Expr::call(Func::Exp, u), std::move(du));
        case Func::Log:
          return fold_div(std::move(du), u);
        case Func::Sqrt:
          return fold_div(std::move(du),
                          fold_mul(Expr::number(2.0), Expr::call(Func::Sqrt, u)));
        case Func::Tanh:
          return fold_mul(fold_sub(Expr::number(1.0),
                                   fold_pow(Expr::call(Func::Tanh, u), Expr::number(2.0))),
                          std::move(du));
      }
      break;
    }
  }
  throw Error("corrupt expression node");
}

}  // namespace shs

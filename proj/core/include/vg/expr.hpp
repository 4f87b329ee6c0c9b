#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "vg/variables.hpp"

namespace vg {

enum class NodeKind : std::uint8_t { Number, Pi, Symbol, Sum, Product, Power, Call };
enum class Func : std::uint8_t { Exp, Ln, Erf, Sin, Cos };

std::string func_name(Func f);
std::optional<Func> func_from_name(std::string_view s);

class Expr;
using Ex = std::shared_ptr<const Expr>;

// Immutable symbolic expression node. Instances are only created through the
// factory functions below, which enforce the canonical form: sums and products
// flattened and sorted, rational constants folded, powers collected. Structural
// equality on canonical forms is what identical() decides.
class Expr {
 public:
  NodeKind kind() const { return kind_; }

  const mpq_class& number() const { return q_; }    // Number
  Var symbol() const { return var_; }               // Symbol
  const mpq_class& exponent() const { return q_; }  // Power
  Func func() const { return func_; }               // Call

  const std::vector<Ex>& children() const { return kids_; }  // Sum / Product
  const Ex& base() const { return kids_[0]; }                // Power
  const Ex& arg() const { return kids_[0]; }                 // Call

  bool is_number() const { return kind_ == NodeKind::Number; }
  bool is_zero() const { return kind_ == NodeKind::Number && q_ == 0; }
  bool is_one() const { return kind_ == NodeKind::Number && q_ == 1; }

 private:
  Expr() = default;
  friend struct ExprFactory;

  NodeKind kind_ = NodeKind::Number;
  mpq_class q_;  // Number value, or Power exponent
  Var var_{VarClass::Indep, 0};
  Func func_ = Func::Exp;
  std::vector<Ex> kids_;
};

// ---- factories (canonicalizing) ----
Ex number(long v);
Ex number(long num, long den);
Ex number(const mpq_class& q);
Ex pi();
Ex symbol(Var v);
Ex sum(std::vector<Ex> terms);
Ex product(std::vector<Ex> factors);
Ex power(const Ex& base, const mpq_class& exponent);
Ex call(Func f, const Ex& arg);

Ex add(const Ex& a, const Ex& b);
Ex sub(const Ex& a, const Ex& b);
Ex neg(const Ex& a);
Ex mul(const Ex& a, const Ex& b);
Ex div(const Ex& a, const Ex& b);
Ex sqrt_of(const Ex& a);  // normalizes to a^(1/2)

inline Ex operator+(const Ex& a, const Ex& b) { return add(a, b); }
inline Ex operator-(const Ex& a, const Ex& b) { return sub(a, b); }
inline Ex operator-(const Ex& a) { return neg(a); }
inline Ex operator*(const Ex& a, const Ex& b) { return mul(a, b); }
inline Ex operator/(const Ex& a, const Ex& b) { return div(a, b); }

// Total order on canonical forms; 0 iff structurally equal.
int compare(const Ex& a, const Ex& b);
bool identical(const Ex& a, const Ex& b);
struct ExLess {
  bool operator()(const Ex& a, const Ex& b) const { return compare(a, b) < 0; }
};

// Rebuild an expression bottom-up through the factories (canonicalization is
// idempotent: rebuild(e) is structurally equal to e).
Ex rebuild(const Ex& e);

// ---- calculus / structure ----
struct UnknownVariableError : std::runtime_error {
  explicit UnknownVariableError(Var v)
      : std::runtime_error("unknown variable: " + name(v)), var(v) {}
  Var var;
};

Ex partial(const Ex& e, Var v);
// Validating overload: rejects v outside the declared space.
Ex partial(const Ex& e, Var v, const VariableSpace& space);
Ex substitute(const Ex& e, const std::map<Var, Ex>& repl);

std::set<Var> free_vars(const Ex& e);
bool depends_on(const Ex& e, Var v);
bool depends_on_class(const Ex& e, VarClass cls);

// Singular guards derived from the expression: denominators must stay nonzero,
// radicands of fractional powers and ln arguments positive.
struct Guard {
  enum class Kind { NonZero, Positive };
  Kind kind;
  Ex expr;
};
std::vector<Guard> collect_guards(const Ex& e);

// ---- evaluation ----
using Value = std::variant<mpq_class, double>;

struct EvalPoint {
  std::map<Var, Value> values;

  void set(Var v, mpq_class q) { values[v] = std::move(q); }
  void set(Var v, double d) { values[v] = d; }
  bool has(Var v) const { return values.count(v) != 0; }
};

struct SingularPointError : std::runtime_error {
  SingularPointError(std::string msg, Ex offending_expr)
      : std::runtime_error(std::move(msg)), offending(std::move(offending_expr)) {}
  Ex offending;
};

struct UnboundVariableError : std::runtime_error {
  explicit UnboundVariableError(Var v)
      : std::runtime_error("variable not assigned: " + name(v)), var(v) {}
  Var var;
};

// Exact evaluation; nullopt when the value is not an exact rational along the
// evaluation path (pi, transcendental calls, non-perfect fractional powers).
// Throws SingularPointError / UnboundVariableError.
std::optional<mpq_class> try_eval_exact(const Ex& e, const EvalPoint& p);
double eval_double(const Ex& e, const EvalPoint& p);
// Exact if possible, floating otherwise.
Value eval(const Ex& e, const EvalPoint& p);

double value_as_double(const Value& v);
mpq_class rational_value(const Value& v);  // throws if the value is floating

// Exact rational power helper: rounds nothing, reports failure instead.
// Returns false when base^e is not an exact rational (or is singular).
bool rational_pow_exact(const mpq_class& base, const mpq_class& e, mpq_class& out);

// Determinant of a row-major dim x dim matrix of expressions, by Laplace
// expansion with structural-zero skipping. Intended for the small, often
// sparse matrices that show up here.
Ex symbolic_det(const std::vector<Ex>& rowmajor, int dim);

// ---- printing ----
// Canonical textual form in the fixture grammar; parse(to_string(e)) == e.
std::string to_string(const Ex& e);
std::string to_string(const mpq_class& q);

}  // namespace vg

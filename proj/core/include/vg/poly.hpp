#pragma once

#include <map>
#include <optional>

#include "vg/expr.hpp"

namespace vg {

// Sparse multivariate polynomial over the rationals, used as the exact normal
// form behind zero testing of rational-function expressions.
class Poly {
 public:
  using Monomial = std::map<Var, int>;  // variable -> positive exponent

  Poly() = default;
  static Poly constant(const mpq_class& c);
  static Poly variable(Var v);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  const std::map<Monomial, mpq_class>& terms() const { return terms_; }

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly pow(int k) const;  // k >= 0

  Ex to_expr() const;

 private:
  std::map<Monomial, mpq_class> terms_;
  void add_term(const Monomial& m, const mpq_class& c);
};

struct RatForm {
  Poly num;
  Poly den;
};

// Clears denominators: e == num/den wherever defined. Fails (nullopt) when the
// expression contains pi, a transcendental call, a fractional power, or a
// denominator that is identically zero.
std::optional<RatForm> rational_form(const Ex& e);

}  // namespace vg

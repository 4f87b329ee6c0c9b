#include "vg/poly.hpp"

namespace vg {

Poly Poly::constant(const mpq_class& c) {
  Poly p;
  if (c != 0) p.terms_[{}] = c;
  return p;
}

Poly Poly::variable(Var v) {
  Poly p;
  p.terms_[{{v, 1}}] = 1;
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

void Poly::add_term(const Monomial& m, const mpq_class& c) {
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    if (c != 0) terms_.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

Poly Poly::operator+(const Poly& o) const {
  Poly out = *this;
  for (const auto& [m, c] : o.terms_) out.add_term(m, c);
  return out;
}

Poly Poly::operator-(const Poly& o) const {
  Poly out = *this;
  for (const auto& [m, c] : o.terms_) out.add_term(m, -c);
  return out;
}

Poly Poly::operator*(const Poly& o) const {
  Poly out;
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) {
      Monomial m = ma;
      for (const auto& [v, e] : mb) m[v] += e;
      out.add_term(m, ca * cb);
    }
  }
  return out;
}

Poly Poly::pow(int k) const {
  Poly out = Poly::constant(1);
  Poly base = *this;
  while (k > 0) {
    if (k & 1) out = out * base;
    base = base * base;
    k >>= 1;
  }
  return out;
}

Ex Poly::to_expr() const {
  std::vector<Ex> terms;
  for (const auto& [m, c] : terms_) {
    std::vector<Ex> factors;
    factors.push_back(number(c));
    for (const auto& [v, e] : m) factors.push_back(power(symbol(v), mpq_class(e)));
    terms.push_back(product(std::move(factors)));
  }
  return sum(std::move(terms));
}

namespace {

std::optional<RatForm> to_rat(const Ex& e) {
  switch (e->kind()) {
    case NodeKind::Number:
      return RatForm{Poly::constant(e->number()), Poly::constant(1)};
    case NodeKind::Pi:
    case NodeKind::Call:
      return std::nullopt;
    case NodeKind::Symbol:
      return RatForm{Poly::variable(e->symbol()), Poly::constant(1)};
    case NodeKind::Sum: {
      RatForm acc{Poly::constant(0), Poly::constant(1)};
      for (const auto& k : e->children()) {
        auto r = to_rat(k);
        if (!r) return std::nullopt;
        acc = RatForm{acc.num * r->den + r->num * acc.den, acc.den * r->den};
      }
      return acc;
    }
    case NodeKind::Product: {
      RatForm acc{Poly::constant(1), Poly::constant(1)};
      for (const auto& k : e->children()) {
        auto r = to_rat(k);
        if (!r) return std::nullopt;
        acc = RatForm{acc.num * r->num, acc.den * r->den};
      }
      return acc;
    }
    case NodeKind::Power: {
      const mpq_class& ex = e->exponent();
      if (ex.get_den() != 1 || !ex.get_num().fits_sint_p()) return std::nullopt;
      int k = static_cast<int>(ex.get_num().get_si());
      auto b = to_rat(e->base());
      if (!b) return std::nullopt;
      if (k >= 0) return RatForm{b->num.pow(k), b->den.pow(k)};
      if (b->num.is_zero()) return std::nullopt;  // identically singular
      return RatForm{b->den.pow(-k), b->num.pow(-k)};
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<RatForm> rational_form(const Ex& e) {
  auto r = to_rat(e);
  if (r && r->den.is_zero()) return std::nullopt;
  return r;
}

}  // namespace vg

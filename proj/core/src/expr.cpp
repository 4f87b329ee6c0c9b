#include "vg/expr.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace vg {

std::string func_name(Func f) {
  switch (f) {
    case Func::Exp: return "exp";
    case Func::Ln: return "ln";
    case Func::Erf: return "erf";
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
  }
  return "?";
}

std::optional<Func> func_from_name(std::string_view s) {
  if (s == "exp") return Func::Exp;
  if (s == "ln") return Func::Ln;
  if (s == "erf") return Func::Erf;
  if (s == "sin") return Func::Sin;
  if (s == "cos") return Func::Cos;
  return std::nullopt;
}

struct ExprFactory {
  static Ex make(NodeKind k) {
    auto e = std::shared_ptr<Expr>(new Expr());
    e->kind_ = k;
    return e;
  }
  static Ex make_number(mpq_class q) {
    auto e = std::shared_ptr<Expr>(new Expr());
    e->kind_ = NodeKind::Number;
    e->q_ = std::move(q);
    return e;
  }
  static Ex make_symbol(Var v) {
    auto e = std::shared_ptr<Expr>(new Expr());
    e->kind_ = NodeKind::Symbol;
    e->var_ = v;
    return e;
  }
  // Raw node builders: callers guarantee the canonical-form invariants.
  static Ex make_sum(std::vector<Ex> kids) {
    auto e = std::shared_ptr<Expr>(new Expr());
    e->kind_ = NodeKind::Sum;
    e->kids_ = std::move(kids);
    return e;
  }
  static Ex make_product(std::vector<Ex> kids) {
    auto e = std::shared_ptr<Expr>(new Expr());
    e->kind_ = NodeKind::Product;
    e->kids_ = std::move(kids);
    return e;
  }
  static Ex make_power(Ex base, mpq_class exponent) {
    auto e = std::shared_ptr<Expr>(new Expr());
    e->kind_ = NodeKind::Power;
    e->kids_ = {std::move(base)};
    e->q_ = std::move(exponent);
    return e;
  }
  static Ex make_call(Func f, Ex arg) {
    auto e = std::shared_ptr<Expr>(new Expr());
    e->kind_ = NodeKind::Call;
    e->func_ = f;
    e->kids_ = {std::move(arg)};
    return e;
  }
};

namespace {

int kind_rank(NodeKind k) {
  switch (k) {
    case NodeKind::Number: return 0;
    case NodeKind::Pi: return 1;
    case NodeKind::Symbol: return 2;
    case NodeKind::Power: return 3;
    case NodeKind::Call: return 4;
    case NodeKind::Product: return 5;
    case NodeKind::Sum: return 6;
  }
  return 7;
}

int cmp_q(const mpq_class& a, const mpq_class& b) {
  int c = ::cmp(a, b);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

}  // namespace

int compare(const Ex& a, const Ex& b) {
  if (a.get() == b.get()) return 0;
  // Powers order by (base, exponent) so that x, x^2, x^(-1) sort together;
  // a plain node is treated as its own first power.
  if (a->kind() == NodeKind::Power || b->kind() == NodeKind::Power) {
    const Ex& ba = a->kind() == NodeKind::Power ? a->base() : a;
    const Ex& bb = b->kind() == NodeKind::Power ? b->base() : b;
    if (int c = compare(ba, bb)) return c;
    mpq_class ea = a->kind() == NodeKind::Power ? a->exponent() : mpq_class(1);
    mpq_class eb = b->kind() == NodeKind::Power ? b->exponent() : mpq_class(1);
    return cmp_q(ea, eb);
  }
  int ra = kind_rank(a->kind()), rb = kind_rank(b->kind());
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (a->kind()) {
    case NodeKind::Number:
      return cmp_q(a->number(), b->number());
    case NodeKind::Pi:
      return 0;
    case NodeKind::Symbol: {
      if (a->symbol() == b->symbol()) return 0;
      return a->symbol() < b->symbol() ? -1 : 1;
    }
    case NodeKind::Power:
      return 0;  // handled above
    case NodeKind::Call: {
      if (a->func() != b->func()) return a->func() < b->func() ? -1 : 1;
      return compare(a->arg(), b->arg());
    }
    case NodeKind::Product:
    case NodeKind::Sum: {
      const auto& ka = a->children();
      const auto& kb = b->children();
      size_t m = std::min(ka.size(), kb.size());
      for (size_t i = 0; i < m; ++i)
        if (int c = compare(ka[i], kb[i])) return c;
      if (ka.size() != kb.size()) return ka.size() < kb.size() ? -1 : 1;
      return 0;
    }
  }
  return 0;
}

bool identical(const Ex& a, const Ex& b) { return compare(a, b) == 0; }

// ---- numeric helpers ----

bool rational_pow_exact(const mpq_class& base, const mpq_class& e, mpq_class& out) {
  const mpz_class& p = e.get_num();
  const mpz_class& q = e.get_den();
  if (!p.fits_slong_p() || !q.fits_ulong_p()) return false;
  long pl = p.get_si();
  unsigned long ql = q.get_ui();

  mpq_class root;
  if (ql == 1) {
    root = base;
  } else {
    if (sgn(base) < 0) return false;  // fractional powers guarded positive
    if (base == 0) {
      if (pl > 0) { out = 0; return true; }
      return false;
    }
    mpz_class rn, rd;
    if (mpz_root(rn.get_mpz_t(), base.get_num().get_mpz_t(), ql) == 0) return false;
    if (mpz_root(rd.get_mpz_t(), base.get_den().get_mpz_t(), ql) == 0) return false;
    root = mpq_class(rn, rd);
  }
  unsigned long ap = static_cast<unsigned long>(pl < 0 ? -pl : pl);
  if (ap > 1000000UL) return false;
  if (root == 0) {
    if (pl > 0) { out = 0; return true; }
    return false;
  }
  mpz_class num_pow, den_pow;
  mpz_pow_ui(num_pow.get_mpz_t(), root.get_num().get_mpz_t(), ap);
  mpz_pow_ui(den_pow.get_mpz_t(), root.get_den().get_mpz_t(), ap);
  mpq_class r(num_pow, den_pow);
  r.canonicalize();
  if (pl < 0) r = 1 / r;
  out = r;
  return true;
}

// ---- canonicalizing factories ----

Ex number(long v) { return ExprFactory::make_number(mpq_class(v)); }

Ex number(long num, long den) {
  mpq_class q(num, den);
  q.canonicalize();
  return ExprFactory::make_number(std::move(q));
}

Ex number(const mpq_class& q) {
  mpq_class c = q;
  c.canonicalize();
  return ExprFactory::make_number(std::move(c));
}

Ex pi() {
  static const Ex instance = ExprFactory::make(NodeKind::Pi);
  return instance;
}

Ex symbol(Var v) { return ExprFactory::make_symbol(v); }

namespace {

// Splits a canonical term as coefficient * rest, rest free of leading Number.
std::pair<mpq_class, Ex> split_coeff(const Ex& term) {
  if (term->kind() == NodeKind::Product && term->children().front()->is_number()) {
    const auto& kids = term->children();
    mpq_class c = kids.front()->number();
    if (kids.size() == 2) return {c, kids[1]};
    std::vector<Ex> rest(kids.begin() + 1, kids.end());
    return {c, ExprFactory::make_product(std::move(rest))};
  }
  return {mpq_class(1), term};
}

std::pair<Ex, mpq_class> split_power(const Ex& factor) {
  if (factor->kind() == NodeKind::Power) return {factor->base(), factor->exponent()};
  return {factor, mpq_class(1)};
}

bool negative_leading(const Ex& e) {
  if (e->is_number()) return sgn(e->number()) < 0;
  if (e->kind() == NodeKind::Product && e->children().front()->is_number())
    return sgn(e->children().front()->number()) < 0;
  return false;
}

}  // namespace

Ex sum(std::vector<Ex> terms) {
  mpq_class constant(0);
  std::map<Ex, mpq_class, ExLess> collected;

  std::vector<Ex> queue = std::move(terms);
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    Ex t = queue[qi];
    if (t->kind() == NodeKind::Sum) {
      for (const auto& k : t->children()) queue.push_back(k);
      continue;
    }
    if (t->is_number()) {
      constant += t->number();
      continue;
    }
    auto [c, rest] = split_coeff(t);
    collected[rest] += c;
  }

  std::vector<Ex> out;
  if (constant != 0) out.push_back(number(constant));
  for (auto& [rest, c] : collected) {
    if (c == 0) continue;
    if (c == 1) {
      out.push_back(rest);
    } else if (rest->kind() == NodeKind::Product) {
      std::vector<Ex> kids;
      kids.reserve(rest->children().size() + 1);
      kids.push_back(number(c));
      kids.insert(kids.end(), rest->children().begin(), rest->children().end());
      out.push_back(ExprFactory::make_product(std::move(kids)));
    } else {
      out.push_back(ExprFactory::make_product({number(c), rest}));
    }
  }

  if (out.empty()) return number(0L);
  if (out.size() == 1) return out[0];
  std::sort(out.begin(), out.end(), ExLess{});
  return ExprFactory::make_sum(std::move(out));
}

Ex product(std::vector<Ex> factors) {
  mpq_class coeff(1);
  std::map<Ex, mpq_class, ExLess> powers;  // base -> accumulated exponent

  std::vector<Ex> queue = std::move(factors);
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    Ex f = queue[qi];
    if (f->kind() == NodeKind::Product) {
      for (const auto& k : f->children()) queue.push_back(k);
      continue;
    }
    if (f->is_number()) {
      coeff *= f->number();
      continue;
    }
    auto [base, e] = split_power(f);
    powers[base] += e;
  }

  if (coeff == 0) return number(0L);

  std::vector<Ex> out;
  std::vector<Ex> sums;  // plain sum factors, distributed below
  for (auto& [base, e] : powers) {
    if (e == 0) continue;
    Ex f = power(base, e);
    if (f->is_number()) {
      coeff *= f->number();
    } else if (f->kind() == NodeKind::Product) {
      // power() may have folded back into a product (e.g. exponents summing
      // to an integer over a product base); merge its factors.
      for (const auto& k : f->children()) {
        if (k->is_number())
          coeff *= k->number();
        else if (k->kind() == NodeKind::Sum)
          sums.push_back(k);
        else
          out.push_back(k);
      }
    } else if (f->kind() == NodeKind::Sum) {
      sums.push_back(f);
    } else {
      out.push_back(f);
    }
  }

  // Expand over sum factors so products of polynomials share one normal form.
  if (!sums.empty()) {
    std::vector<Ex> core;
    core.reserve(out.size() + 1);
    if (coeff != 1) core.push_back(number(coeff));
    core.insert(core.end(), out.begin(), out.end());
    std::vector<Ex> terms{product(std::move(core))};
    for (const Ex& s : sums) {
      std::vector<Ex> next;
      next.reserve(terms.size() * s->children().size());
      for (const Ex& t : terms)
        for (const Ex& c : s->children()) next.push_back(product({t, c}));
      terms = std::move(next);
    }
    return sum(std::move(terms));
  }

  if (out.empty()) return number(coeff);
  std::sort(out.begin(), out.end(), ExLess{});
  if (coeff == 1) {
    if (out.size() == 1) return out[0];
    return ExprFactory::make_product(std::move(out));
  }
  std::vector<Ex> kids;
  kids.reserve(out.size() + 1);
  kids.push_back(number(coeff));
  kids.insert(kids.end(), out.begin(), out.end());
  return ExprFactory::make_product(std::move(kids));
}

Ex power(const Ex& base, const mpq_class& exponent) {
  mpq_class e = exponent;
  e.canonicalize();
  if (e == 0) return number(1L);
  if (e == 1) return base;

  if (base->is_number()) {
    const mpq_class& b = base->number();
    if (b == 0 && sgn(e) > 0) return number(0L);
    mpq_class out;
    if (b != 0 && rational_pow_exact(b, e, out)) return number(out);
    return ExprFactory::make_power(base, std::move(e));
  }

  if (base->kind() == NodeKind::Power) {
    const mpq_class& inner = base->exponent();
    bool e_int = e.get_den() == 1;
    bool inner_odd_int = inner.get_den() == 1 && mpz_odd_p(inner.get_num().get_mpz_t());
    if (e_int || inner_odd_int) return power(base->base(), inner * e);
  }

  if (base->kind() == NodeKind::Product && e.get_den() == 1) {
    std::vector<Ex> kids;
    kids.reserve(base->children().size());
    for (const auto& k : base->children()) kids.push_back(power(k, e));
    return product(std::move(kids));
  }

  // Integer powers of sums: normalize the base sign so S and -S share one
  // representative (the term with the least coefficient-stripped part gets a
  // positive coefficient).
  if (base->kind() == NodeKind::Sum && e.get_den() == 1) {
    const Ex* min_term = nullptr;
    Ex min_stripped;
    mpq_class min_coeff;
    for (const Ex& t : base->children()) {
      auto [c, rest] = split_coeff(t);
      Ex stripped = t->is_number() ? number(1L) : rest;
      mpq_class coeff = t->is_number() ? t->number() : c;
      if (!min_term || compare(stripped, min_stripped) < 0) {
        min_term = &t;
        min_stripped = stripped;
        min_coeff = coeff;
      }
    }
    if (min_term && sgn(min_coeff) < 0) {
      Ex flipped = power(neg(base), e);
      bool odd = mpz_odd_p(e.get_num().get_mpz_t());
      return odd ? neg(flipped) : flipped;
    }
  }

  return ExprFactory::make_power(base, std::move(e));
}

Ex call(Func f, const Ex& arg) {
  if (arg->is_number()) {
    const mpq_class& v = arg->number();
    if (v == 0) {
      switch (f) {
        case Func::Exp: return number(1L);
        case Func::Erf:
        case Func::Sin: return number(0L);
        case Func::Cos: return number(1L);
        case Func::Ln: break;  // singular, keep the node
      }
    }
    if (v == 1 && f == Func::Ln) return number(0L);
  }
  // Parity normalization keeps erf/sin odd and cos even on negated arguments.
  if (negative_leading(arg) && (f == Func::Erf || f == Func::Sin || f == Func::Cos)) {
    Ex inner = ExprFactory::make_call(f, neg(arg));
    return f == Func::Cos ? inner : neg(inner);
  }
  return ExprFactory::make_call(f, arg);
}

Ex add(const Ex& a, const Ex& b) { return sum({a, b}); }
Ex sub(const Ex& a, const Ex& b) { return sum({a, neg(b)}); }
Ex neg(const Ex& a) { return product({number(-1L), a}); }
Ex mul(const Ex& a, const Ex& b) { return product({a, b}); }
Ex div(const Ex& a, const Ex& b) { return product({a, power(b, mpq_class(-1))}); }
Ex sqrt_of(const Ex& a) { return power(a, mpq_class(1, 2)); }

Ex rebuild(const Ex& e) {
  switch (e->kind()) {
    case NodeKind::Number:
    case NodeKind::Pi:
    case NodeKind::Symbol:
      return e;
    case NodeKind::Sum: {
      std::vector<Ex> kids;
      for (const auto& k : e->children()) kids.push_back(rebuild(k));
      return sum(std::move(kids));
    }
    case NodeKind::Product: {
      std::vector<Ex> kids;
      for (const auto& k : e->children()) kids.push_back(rebuild(k));
      return product(std::move(kids));
    }
    case NodeKind::Power:
      return power(rebuild(e->base()), e->exponent());
    case NodeKind::Call:
      return call(e->func(), rebuild(e->arg()));
  }
  return e;
}

// ---- calculus ----

Ex partial(const Ex& e, Var v) {
  switch (e->kind()) {
    case NodeKind::Number:
    case NodeKind::Pi:
      return number(0L);
    case NodeKind::Symbol:
      return e->symbol() == v ? number(1L) : number(0L);
    case NodeKind::Sum: {
      std::vector<Ex> kids;
      for (const auto& k : e->children()) kids.push_back(partial(k, v));
      return sum(std::move(kids));
    }
    case NodeKind::Product: {
      const auto& kids = e->children();
      std::vector<Ex> terms;
      for (size_t i = 0; i < kids.size(); ++i) {
        Ex d = partial(kids[i], v);
        if (d->is_zero()) continue;
        std::vector<Ex> fac;
        fac.reserve(kids.size());
        fac.push_back(d);
        for (size_t j = 0; j < kids.size(); ++j)
          if (j != i) fac.push_back(kids[j]);
        terms.push_back(product(std::move(fac)));
      }
      return sum(std::move(terms));
    }
    case NodeKind::Power: {
      Ex db = partial(e->base(), v);
      if (db->is_zero()) return db;
      return product({number(e->exponent()), power(e->base(), e->exponent() - 1), db});
    }
    case NodeKind::Call: {
      Ex du = partial(e->arg(), v);
      if (du->is_zero()) return du;
      const Ex& u = e->arg();
      switch (e->func()) {
        case Func::Exp:
          return mul(call(Func::Exp, u), du);
        case Func::Ln:
          return mul(power(u, mpq_class(-1)), du);
        case Func::Erf:
          // erf'(z) = (2/sqrt(pi)) exp(-z^2)
          return product({number(2L), power(pi(), mpq_class(-1, 2)),
                          call(Func::Exp, neg(mul(u, u))), du});
        case Func::Sin:
          return mul(call(Func::Cos, u), du);
        case Func::Cos:
          return neg(mul(call(Func::Sin, u), du));
      }
      return number(0L);
    }
  }
  return number(0L);
}

Ex partial(const Ex& e, Var v, const VariableSpace& space) {
  if (!space.contains(v)) throw UnknownVariableError(v);
  return partial(e, v);
}

Ex substitute(const Ex& e, const std::map<Var, Ex>& repl) {
  switch (e->kind()) {
    case NodeKind::Number:
    case NodeKind::Pi:
      return e;
    case NodeKind::Symbol: {
      auto it = repl.find(e->symbol());
      return it == repl.end() ? e : it->second;
    }
    case NodeKind::Sum: {
      std::vector<Ex> kids;
      for (const auto& k : e->children()) kids.push_back(substitute(k, repl));
      return sum(std::move(kids));
    }
    case NodeKind::Product: {
      std::vector<Ex> kids;
      for (const auto& k : e->children()) kids.push_back(substitute(k, repl));
      return product(std::move(kids));
    }
    case NodeKind::Power:
      return power(substitute(e->base(), repl), e->exponent());
    case NodeKind::Call:
      return call(e->func(), substitute(e->arg(), repl));
  }
  return e;
}

namespace {

void collect_vars(const Ex& e, std::set<Var>& out) {
  if (e->kind() == NodeKind::Symbol) {
    out.insert(e->symbol());
    return;
  }
  for (const auto& k : e->children()) collect_vars(k, out);
}

}  // namespace

std::set<Var> free_vars(const Ex& e) {
  std::set<Var> out;
  collect_vars(e, out);
  return out;
}

bool depends_on(const Ex& e, Var v) {
  if (e->kind() == NodeKind::Symbol) return e->symbol() == v;
  for (const auto& k : e->children())
    if (depends_on(k, v)) return true;
  return false;
}

bool depends_on_class(const Ex& e, VarClass cls) {
  if (e->kind() == NodeKind::Symbol) return e->symbol().cls == cls;
  for (const auto& k : e->children())
    if (depends_on_class(k, cls)) return true;
  return false;
}

namespace {

void collect_guards_into(const Ex& e, std::map<Ex, Guard::Kind, ExLess>& out) {
  switch (e->kind()) {
    case NodeKind::Power: {
      const mpq_class& ex = e->exponent();
      bool fractional = ex.get_den() != 1;
      if (fractional) {
        out[e->base()] = Guard::Kind::Positive;
      } else if (sgn(ex) < 0) {
        out.emplace(e->base(), Guard::Kind::NonZero);  // keep Positive if present
      }
      collect_guards_into(e->base(), out);
      return;
    }
    case NodeKind::Call:
      if (e->func() == Func::Ln) out[e->arg()] = Guard::Kind::Positive;
      collect_guards_into(e->arg(), out);
      return;
    default:
      for (const auto& k : e->children()) collect_guards_into(k, out);
  }
}

}  // namespace

std::vector<Guard> collect_guards(const Ex& e) {
  std::map<Ex, Guard::Kind, ExLess> m;
  collect_guards_into(e, m);
  std::vector<Guard> out;
  out.reserve(m.size());
  for (auto& [expr, kind] : m) out.push_back(Guard{kind, expr});
  return out;
}

// ---- evaluation ----

std::optional<mpq_class> try_eval_exact(const Ex& e, const EvalPoint& p) {
  switch (e->kind()) {
    case NodeKind::Number:
      return e->number();
    case NodeKind::Pi:
      return std::nullopt;
    case NodeKind::Symbol: {
      auto it = p.values.find(e->symbol());
      if (it == p.values.end()) throw UnboundVariableError(e->symbol());
      if (std::holds_alternative<mpq_class>(it->second))
        return std::get<mpq_class>(it->second);
      return std::nullopt;
    }
    case NodeKind::Sum: {
      mpq_class acc(0);
      bool exact = true;
      for (const auto& k : e->children()) {
        auto v = try_eval_exact(k, p);
        if (!v)
          exact = false;
        else if (exact)
          acc += *v;
      }
      if (!exact) return std::nullopt;
      return acc;
    }
    case NodeKind::Product: {
      mpq_class acc(1);
      bool exact = true;
      for (const auto& k : e->children()) {
        auto v = try_eval_exact(k, p);
        if (!v)
          exact = false;
        else if (exact)
          acc *= *v;
      }
      if (!exact) return std::nullopt;
      return acc;
    }
    case NodeKind::Power: {
      auto b = try_eval_exact(e->base(), p);
      if (!b) return std::nullopt;
      const mpq_class& ex = e->exponent();
      if (*b == 0) {
        if (sgn(ex) > 0) return mpq_class(0);
        throw SingularPointError("zero base with nonpositive exponent", e);
      }
      if (sgn(*b) < 0 && ex.get_den() != 1)
        throw SingularPointError("fractional power of negative value", e);
      mpq_class out;
      if (rational_pow_exact(*b, ex, out)) return out;
      return std::nullopt;
    }
    case NodeKind::Call: {
      auto u = try_eval_exact(e->arg(), p);
      if (u && e->func() == Func::Ln && sgn(*u) <= 0)
        throw SingularPointError("ln of nonpositive value", e);
      return std::nullopt;
    }
  }
  return std::nullopt;
}

double eval_double(const Ex& e, const EvalPoint& p) {
  switch (e->kind()) {
    case NodeKind::Number:
      return e->number().get_d();
    case NodeKind::Pi:
      return std::numbers::pi_v<double>;
    case NodeKind::Symbol: {
      auto it = p.values.find(e->symbol());
      if (it == p.values.end()) throw UnboundVariableError(e->symbol());
      return value_as_double(it->second);
    }
    case NodeKind::Sum: {
      double acc = 0;
      for (const auto& k : e->children()) acc += eval_double(k, p);
      return acc;
    }
    case NodeKind::Product: {
      double acc = 1;
      for (const auto& k : e->children()) acc *= eval_double(k, p);
      return acc;
    }
    case NodeKind::Power: {
      double b = eval_double(e->base(), p);
      const mpq_class& ex = e->exponent();
      double ed = ex.get_d();
      if (b == 0) {
        if (ed > 0) return 0;
        throw SingularPointError("zero base with nonpositive exponent", e);
      }
      if (b < 0) {
        if (ex.get_den() != 1)
          throw SingularPointError("fractional power of negative value", e);
        return std::pow(b, ed);
      }
      return std::pow(b, ed);
    }
    case NodeKind::Call: {
      double u = eval_double(e->arg(), p);
      switch (e->func()) {
        case Func::Exp: return std::exp(u);
        case Func::Ln:
          if (u <= 0) throw SingularPointError("ln of nonpositive value", e);
          return std::log(u);
        case Func::Erf: return std::erf(u);
        case Func::Sin: return std::sin(u);
        case Func::Cos: return std::cos(u);
      }
      return 0;
    }
  }
  return 0;
}

Value eval(const Ex& e, const EvalPoint& p) {
  if (auto q = try_eval_exact(e, p)) return *q;
  return eval_double(e, p);
}

double value_as_double(const Value& v) {
  if (std::holds_alternative<mpq_class>(v)) return std::get<mpq_class>(v).get_d();
  return std::get<double>(v);
}

mpq_class rational_value(const Value& v) {
  if (!std::holds_alternative<mpq_class>(v))
    throw std::runtime_error("value is not an exact rational");
  return std::get<mpq_class>(v);
}

namespace {

Ex det_laplace(const std::vector<Ex>& m, const std::vector<int>& rows,
               const std::vector<int>& cols, int dim) {
  if (rows.size() == 1) return m[rows[0] * dim + cols[0]];
  std::vector<Ex> terms;
  int col = cols[0];
  std::vector<int> rest_cols(cols.begin() + 1, cols.end());
  for (size_t ri = 0; ri < rows.size(); ++ri) {
    const Ex& entry = m[rows[ri] * dim + col];
    if (entry->is_zero()) continue;
    std::vector<int> rest_rows;
    rest_rows.reserve(rows.size() - 1);
    for (size_t rj = 0; rj < rows.size(); ++rj)
      if (rj != ri) rest_rows.push_back(rows[rj]);
    Ex term = mul(entry, det_laplace(m, rest_rows, rest_cols, dim));
    if (ri % 2 == 1) term = neg(term);
    terms.push_back(std::move(term));
  }
  return sum(std::move(terms));
}

}  // namespace

Ex symbolic_det(const std::vector<Ex>& rowmajor, int dim) {
  std::vector<int> idx(dim);
  for (int i = 0; i < dim; ++i) idx[i] = i;
  return det_laplace(rowmajor, idx, idx, dim);
}

// ---- printing ----

std::string to_string(const mpq_class& q) { return q.get_str(); }

namespace {

// Precedence tiers for printing: 0 sum context, 1 product context, 2 power base.
std::string print(const Ex& e, int ctx);

std::string print_product(const Ex& e, int ctx) {
  const auto& kids = e->children();
  std::string out;
  size_t start = 0;
  if (kids[0]->is_number()) {
    const mpq_class& c = kids[0]->number();
    start = 1;
    if (c == -1)
      out = "-";
    else
      out = to_string(c) + "*";
  }
  for (size_t i = start; i < kids.size(); ++i) {
    if (i > start) out += "*";
    out += print(kids[i], 2);
  }
  bool need_parens = ctx >= 2 || (ctx >= 1 && out.starts_with("-"));
  return need_parens ? "(" + out + ")" : out;
}

std::string print(const Ex& e, int ctx) {
  switch (e->kind()) {
    case NodeKind::Number: {
      std::string s = to_string(e->number());
      bool composite = s.find('/') != std::string::npos || s.starts_with("-");
      if (composite && ctx >= 1) return "(" + s + ")";
      return s;
    }
    case NodeKind::Pi:
      return "pi";
    case NodeKind::Symbol:
      return name(e->symbol());
    case NodeKind::Sum: {
      std::string out;
      const auto& kids = e->children();
      for (size_t i = 0; i < kids.size(); ++i) {
        if (i == 0) {
          out += print(kids[i], 0);
        } else if (negative_leading(kids[i])) {
          out += " - " + print(neg(kids[i]), 1);
        } else {
          out += " + " + print(kids[i], 1);
        }
      }
      if (ctx >= 1) return "(" + out + ")";
      return out;
    }
    case NodeKind::Product:
      return print_product(e, ctx);
    case NodeKind::Power: {
      std::string b = print(e->base(), 2);
      const mpq_class& ex = e->exponent();
      std::string es = to_string(ex);
      if (ex.get_den() != 1 || sgn(ex) < 0) es = "(" + es + ")";
      return b + "^" + es;
    }
    case NodeKind::Call:
      return func_name(e->func()) + "(" + print(e->arg(), 0) + ")";
  }
  return "?";
}

}  // namespace

std::string to_string(const Ex& e) { return print(e, 0); }

}  // namespace vg

#include "vg/catalog.hpp"

namespace vg {

namespace {

Ex sq(const Ex& e) { return mul(e, e); }
Ex y(int i) { return symbol({VarClass::Fiber, i}); }
Ex dy(int i) { return symbol({VarClass::FiberVel, i}); }
Ex u(int i) { return symbol({VarClass::HVel, i}); }
Ex X() { return symbol({VarClass::Indep, 0}); }

PathStructure flat_structure(int n) {
  return PathStructure{n, std::vector<Ex>(n, number(0L))};
}

PathStructure fpar_structure(int n) {
  PathStructure P{n, {}};
  std::vector<Ex> terms;
  for (int k = 1; k <= n; ++k) terms.push_back(sq(y(k)));
  P.f.push_back(sum(std::move(terms)));
  for (int i = 2; i <= n - 1; ++i) P.f.push_back(sq(y(i - 1)));
  if (n >= 2) P.f.push_back(y(n - 1));
  return P;
}

PathStructure fpa2_structure(int n) {
  PathStructure P{n, std::vector<Ex>(n, number(0L))};
  std::vector<Ex> terms;
  for (int k = 1; k <= n; ++k) terms.push_back(sq(y(k)));
  P.f[0] = sum(std::move(terms));
  return P;
}

PathStructure egorov_structure(int n) {
  PathStructure P{n, {}};
  for (int j = 1; j <= n; ++j)
    P.f.push_back(product({number(2L), y(1), dy(1), dy(2), dy(j)}));
  return P;
}

PathStructure egorov_lin_structure(int n) {
  PathStructure P{n, std::vector<Ex>(n, number(0L))};
  P.f[0] = y(2);
  return P;
}

Lagrangian egorov_lin_lagrangian(int n) {
  std::vector<Ex> terms;
  terms.push_back(mul(sub(dy(1), mul(X(), y(2))), dy(2)));
  for (int i = 3; i <= n; ++i) terms.push_back(sq(dy(i)));
  return Lagrangian{n, sum(std::move(terms))};
}

PathStructure submax_structure(int n) {
  PathStructure P{n, std::vector<Ex>(n, number(0L))};
  P.f[0] = power(dy(2), mpq_class(3));
  return P;
}

Lagrangian submax_lagrangian(int n) {
  Ex w = mul(dy(1), power(dy(2), mpq_class(-3, 2)));
  Ex gaussian = call(Func::Exp, neg(mul(sq(dy(1)), power(dy(2), mpq_class(-3)))));
  Ex core = sum({product({sqrt_of(pi()), dy(1), call(Func::Erf, w)}),
                 mul(power(dy(2), mpq_class(3, 2)), gaussian), dy(1)});
  std::vector<Ex> terms;
  terms.push_back(mul(core, call(Func::Exp, mul(number(2L), y(1)))));
  for (int i = 3; i <= n; ++i) terms.push_back(sq(dy(i)));
  return Lagrangian{n, sum(std::move(terms))};
}

PathStructure distinguished_structure() {
  PathStructure P{2, {}};
  P.f.push_back(product({number(2L), sq(dy(1)), power(sub(y(1), dy(2)), mpq_class(-1))}));
  P.f.push_back(number(0L));
  return P;
}

Lagrangian distinguished_lagrangian() {
  return Lagrangian{2, mul(dy(1), power(sub(dy(2), y(1)), mpq_class(-1)))};
}

ChristoffelTable egorov_christoffel(int n) {
  ChristoffelTable G;
  G.n = n;
  G.entries[{1, 2, 3}] = symbol({VarClass::HPos, 2});
  return G;
}

}  // namespace

int egorov_psi_pair_count() { return 10; }

HomLagrangian egorov_psi_lagrangian(int n, int index) {
  if (n < 2) throw std::invalid_argument("psi-family needs n >= 2");
  if (index < 0 || index >= egorov_psi_pair_count())
    throw std::invalid_argument("psi pair index out of range");
  Ex w = mul(u(2), power(u(0), mpq_class(-1)));
  Ex one = number(1L);
  Ex psi0, psi1;
  switch (index) {
    case 0: psi0 = add(one, sq(w)); psi1 = w; break;
    case 1: psi0 = one; psi1 = w; break;
    case 2: psi0 = add(one, sq(w)); psi1 = add(one, w); break;
    case 3: psi0 = add(number(2L), power(w, mpq_class(4))); psi1 = power(w, mpq_class(3)); break;
    case 4: psi0 = sum({one, w, sq(w)}); psi1 = sub(w, power(w, mpq_class(3))); break;
    case 5: psi0 = call(Func::Exp, w); psi1 = one; break;
    case 6: psi0 = add(one, call(Func::Exp, w)); psi1 = mul(w, call(Func::Exp, w)); break;
    case 7: psi0 = add(one, sq(w)); psi1 = call(Func::Exp, w); break;
    case 8: psi0 = call(Func::Exp, sq(w)); psi1 = w; break;
    case 9:
      psi0 = add(number(3L), power(w, mpq_class(6)));
      psi1 = add(sq(w), power(w, mpq_class(3)));
      break;
  }
  return HomLagrangian{n, add(mul(psi0, u(0)), mul(psi1, u(1)))};
}

std::vector<std::string> catalog_ids() {
  return {"flat",   "fpar",          "fpa2",       "egorov", "egorov-lin",
          "submax", "distinguished", "egorov-christoffel",   "egorov-psi-family"};
}

CatalogEntry catalog_get(const std::string& id, int n) {
  auto bad_n = [&](int min_n) {
    if (n < min_n)
      throw std::invalid_argument("catalog entry '" + id + "' needs n >= " +
                                  std::to_string(min_n));
  };

  CatalogEntry e;
  e.id = id;

  if (id == "flat") {
    e.n = n > 0 ? n : 3;
    n = e.n;
    bad_n(1);
    e.description = "straight-line path structure";
    e.structure = flat_structure(n);
    e.expected_verdict = Verdict::Kind::Inconclusive;
    e.levels = default_levels(n);
    return e;
  }
  if (id == "fpar") {
    e.n = n > 0 ? n : 3;
    n = e.n;
    bad_n(2);
    e.description = "position-quadratic family attaining full rank";
    e.structure = fpar_structure(n);
    e.expected_verdict = Verdict::Kind::NotVariationalFullRank;
    e.levels = default_levels(n);
    EvalPoint p;
    p.set(Var{VarClass::Indep, 0}, mpq_class(0));
    for (int i = 1; i <= n; ++i) {
      p.set(Var{VarClass::Fiber, i}, mpq_class(i == n ? 1 : 0));
      p.set(Var{VarClass::FiberVel, i}, mpq_class(1));
    }
    e.distinguished_point = p;
    return e;
  }
  if (id == "fpa2") {
    e.n = n > 0 ? n : 3;
    n = e.n;
    bad_n(3);
    e.description = "single-component quadratic family with forced-degenerate kernel";
    e.structure = fpa2_structure(n);
    e.expected_verdict = Verdict::Kind::NotVariationalForcedDegenerate;
    e.levels = default_levels(n);
    return e;
  }
  if (id == "egorov") {
    e.n = n > 0 ? n : 3;
    n = e.n;
    bad_n(2);
    e.description = "Egorov projective structure, inhomogeneous presentation";
    e.structure = egorov_structure(n);
    return e;
  }
  if (id == "egorov-lin") {
    e.n = n > 0 ? n : 3;
    n = e.n;
    bad_n(2);
    e.description = "linearized Egorov structure with its polynomial Lagrangian";
    e.structure = egorov_lin_structure(n);
    e.lagrangian = egorov_lin_lagrangian(n);
    return e;
  }
  if (id == "submax") {
    e.n = n > 0 ? n : 3;
    n = e.n;
    bad_n(2);
    e.description = "submaximally symmetric path structure with its erf-Lagrangian";
    e.structure = submax_structure(n);
    e.lagrangian = submax_lagrangian(n);
    e.domain.restrict(Var{VarClass::FiberVel, 2}, mpq_class(1, 10), mpq_class(2));
    e.domain.restrict(Var{VarClass::FiberVel, 1}, mpq_class(-2), mpq_class(2));
    return e;
  }
  if (id == "distinguished") {
    if (n > 0 && n != 2)
      throw std::invalid_argument("catalog entry 'distinguished' is fixed at n = 2");
    e.n = 2;
    e.description = "distinguished curves transversal to the contact structure";
    e.structure = distinguished_structure();
    e.lagrangian = distinguished_lagrangian();
    return e;
  }
  if (id == "egorov-christoffel") {
    e.n = n > 0 ? n : 3;
    n = e.n;
    bad_n(3);
    e.description = "Egorov structure, connection-coefficient presentation";
    e.christoffel = egorov_christoffel(n);
    return e;
  }
  if (id == "egorov-psi-family") {
    e.n = n > 0 ? n : 2;
    n = e.n;
    bad_n(2);
    e.description = "homogeneous Lagrangian family psi0(w) u0 + psi1(w) u1";
    return e;
  }

  std::string msg = "unknown catalog id '" + id + "'; available:";
  for (const auto& known : catalog_ids()) msg += " " + known;
  throw UnknownCatalogIdError(msg);
}

}  // namespace vg

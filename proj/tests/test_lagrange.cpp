#include "vg/lagrange.hpp"

#include <cmath>

#include "doctest.h"
#include "test_util.hpp"
#include "vg/catalog.hpp"

using namespace vg;
using vgtest::random_polynomial;

namespace {

Ex y(int i) { return symbol({VarClass::Fiber, i}); }
Ex dy(int i) { return symbol({VarClass::FiberVel, i}); }
Ex u(int i) { return symbol({VarClass::HVel, i}); }
Ex hx(int i) { return symbol({VarClass::HPos, i}); }
Ex ha(int i) { return symbol({VarClass::HAcc, i}); }

PathStructure structure_of(const std::string& id, int n = 0) {
  return *catalog_get(id, n).structure;
}
Lagrangian lagrangian_of(const std::string& id, int n = 0) {
  return *catalog_get(id, n).lagrangian;
}

Lagrangian free_quadratic(int n) {
  std::vector<Ex> terms;
  for (int i = 1; i <= n; ++i) terms.push_back(power(dy(i), 2));
  return Lagrangian{n, sum(std::move(terms))};
}

std::vector<EvalPoint> sample_points(Sampler& s, const std::vector<Var>& vars,
                                     const std::vector<Guard>& guards, int count,
                                     const SampleDomain& dom = {}) {
  std::vector<EvalPoint> out;
  for (int i = 0; i < count; ++i) out.push_back(s.point(vars, guards, dom));
  return out;
}

}  // namespace

TEST_CASE("velocity Hessian") {
  SUBCASE("linearized Egorov Lagrangian") {
    for (int n : {2, 3, 5}) {
      HessianField H = hessian_phi(lagrangian_of("egorov-lin", n));
      CHECK(identical(H.at(1, 2), number(1)));
      CHECK(H.at(1, 1)->is_zero());
      for (int i = 3; i <= n; ++i) CHECK(identical(H.at(i, i), number(2)));
      mpz_class p;
      mpz_pow_ui(p.get_mpz_t(), mpz_class(2).get_mpz_t(), n - 2);
      CHECK(identical(H.det, number(mpq_class(-p))));
    }
  }
  SUBCASE("distinguished-curves Lagrangian") {
    HessianField H = hessian_phi(lagrangian_of("distinguished"));
    Ex den = sub(dy(2), y(1));
    CHECK(H.at(1, 1)->is_zero());
    CHECK(identical(H.at(1, 2), neg(power(den, -2))));
    CHECK(identical(H.at(2, 2), product({number(2), dy(1), power(den, -3)})));
    CHECK(identical(H.det, neg(power(den, -4))));
  }
  SUBCASE("free quadratic Lagrangian") {
    HessianField H = hessian_phi(free_quadratic(3));
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j)
        CHECK(identical(H.at(i, j), i == j ? number(2) : number(0)));
  }
  SUBCASE("closedness of the Hessian is automatic") {
    Sampler s(41);
    const std::vector<Var> vars = {{VarClass::Indep, 0},
                                   {VarClass::Fiber, 1},
                                   {VarClass::Fiber, 2},
                                   {VarClass::FiberVel, 1},
                                   {VarClass::FiberVel, 2}};
    for (int t = 0; t < 10; ++t) {
      Lagrangian L{2, random_polynomial(s, vars, 6, 4)};
      HessianField H = hessian_phi(L);
      for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j)
          for (int k = 1; k <= 2; ++k) {
            Ex r = sub(partial(H.at(i, k), Var{VarClass::FiberVel, j}),
                       partial(H.at(j, k), Var{VarClass::FiberVel, i}));
            CHECK(r->is_zero());
          }
    }
  }
}

TEST_CASE("Euler-Lagrange residuals") {
  SUBCASE("linearized Egorov is variational, symbolically") {
    for (int n : {2, 4}) {
      auto res = euler_lagrange_residual(lagrangian_of("egorov-lin", n),
                                         structure_of("egorov-lin", n));
      for (const Ex& r : res) CHECK(r->is_zero());
    }
  }
  SUBCASE("distinguished curves, after rational normalization") {
    Sampler s(43);
    auto res = euler_lagrange_residual(lagrangian_of("distinguished"),
                                       structure_of("distinguished"));
    for (const Ex& r : res) CHECK(is_zero(r, s).kind == ZeroKind::SymbolicZero);
  }
  SUBCASE("erf-Lagrangian against its structure, numerically") {
    Sampler s(47);
    CatalogEntry e = catalog_get("submax", 3);
    auto res = euler_lagrange_residual(*e.lagrangian, *e.structure);
    for (const Ex& r : res) {
      auto v = is_zero(r, s, 60, 1e-9, e.domain);
      CHECK(v.is_zero());
    }
  }
  SUBCASE("free Lagrangian against Egorov fails with a witness") {
    Sampler s(53);
    auto res = euler_lagrange_residual(free_quadratic(3), structure_of("egorov-lin", 3));
    bool found_nonzero = false;
    for (const Ex& r : res)
      if (is_zero(r, s).kind == ZeroKind::Nonzero) found_nonzero = true;
    CHECK(found_nonzero);
  }
}

TEST_CASE("verify_equivalence") {
  Sampler s(59);
  SUBCASE("catalog pairs pass") {
    CatalogEntry e = catalog_get("egorov-lin", 3);
    auto rep = verify_equivalence(*e.lagrangian, *e.structure, s);
    CHECK(rep.pass);
    CHECK(rep.det_phi.kind == ZeroKind::Nonzero);
  }
  SUBCASE("wrong Lagrangian fails on residuals") {
    auto rep = verify_equivalence(free_quadratic(3), structure_of("egorov-lin", 3), s);
    CHECK(!rep.pass);
  }
  SUBCASE("constant Lagrangian fails on the Hessian") {
    Lagrangian L{2, number(5)};
    auto rep = verify_equivalence(L, structure_of("flat", 2), s);
    CHECK(!rep.pass);
    CHECK(rep.det_phi.kind != ZeroKind::Nonzero);
  }
  SUBCASE("equivalence pass implies the Hessian solves the fundamental system") {
    for (const char* id : {"egorov-lin", "distinguished"}) {
      CatalogEntry e = catalog_get(id);
      auto rep = verify_equivalence(*e.lagrangian, *e.structure, s, 60, 1e-9, e.domain);
      REQUIRE(rep.pass);
      HessianField H = hessian_phi(*e.lagrangian);
      CHECK(check_candidate_phi(*e.structure, H.phi, s).all_zero());
    }
  }
}

TEST_CASE("homogenization") {
  SUBCASE("linearized Egorov Lagrangian") {
    HomLagrangian hat = homogenize(lagrangian_of("egorov-lin", 3));
    Ex expected = add(mul(sub(mul(u(1), power(u(0), -1)), mul(hx(0), hx(2))), u(2)),
                      mul(power(u(3), 2), power(u(0), -1)));
    CHECK(identical(hat.L, expected));
  }
  SUBCASE("constants homogenize to u0") {
    CHECK(identical(homogenize(Lagrangian{2, number(1)}).L, u(0)));
  }
  SUBCASE("Euler identity holds for every homogenize output") {
    Sampler s(61);
    const std::vector<Var> vars = {{VarClass::Indep, 0},
                                   {VarClass::Fiber, 1},
                                   {VarClass::FiberVel, 1},
                                   {VarClass::FiberVel, 2}};
    for (int t = 0; t < 10; ++t) {
      HomLagrangian hat = homogenize(Lagrangian{2, random_polynomial(s, vars, 5, 3)});
      std::vector<Ex> terms;
      for (int i = 0; i <= 2; ++i) terms.push_back(mul(u(i), partial(hat.L, {VarClass::HVel, i})));
      terms.push_back(neg(hat.L));
      CHECK(is_zero(sum(std::move(terms)), s, 30).kind == ZeroKind::SymbolicZero);
    }
  }
  SUBCASE("dehomogenize undoes homogenize on random polynomial Lagrangians") {
    Sampler s(67);
    const std::vector<Var> vars = {{VarClass::Indep, 0},
                                   {VarClass::Fiber, 1},
                                   {VarClass::Fiber, 2},
                                   {VarClass::FiberVel, 1},
                                   {VarClass::FiberVel, 2}};
    for (int t = 0; t < 20; ++t) {
      Lagrangian L{2, random_polynomial(s, vars, 5, 3)};
      Lagrangian back = dehomogenize(homogenize(L), s);
      CHECK(identical(back.L, L.L));
    }
  }
  SUBCASE("flat arc length dehomogenizes to the graph form") {
    HomLagrangian hat{2, sqrt_of(sum({power(u(0), 2), power(u(1), 2), power(u(2), 2)}))};
    Sampler s(71);
    Lagrangian L = dehomogenize(hat, s);
    CHECK(identical(L.L, sqrt_of(sum({number(1), power(dy(1), 2), power(dy(2), 2)}))));
  }
  SUBCASE("non-homogeneous input is rejected with a witness") {
    HomLagrangian bad{1, power(u(0), 2)};
    Sampler s(73);
    CHECK_THROWS_AS((void)dehomogenize(bad, s), HomogeneityError);
  }
}

TEST_CASE("Hessian determinant identity") {
  Sampler s(79);
  SUBCASE("exact equality for polynomial Lagrangians") {
    CatalogEntry e = catalog_get("egorov-lin", 3);
    auto guards = collect_guards(e.lagrangian->L);
    auto pts = sample_points(s, e.structure->space().base_vars(), guards, 20);
    int exact_checked = 0;
    for (const auto& r : hessian_det_identity_check(*e.lagrangian, pts)) {
      if (r.skipped) continue;
      CHECK(r.exact);
      CHECK(r.exact_equal);
      CHECK(r.rel_err < 1e-6);
      ++exact_checked;
    }
    CHECK(exact_checked >= 15);
  }
  SUBCASE("free quadratic in n=1") {
    Lagrangian L = free_quadratic(1);
    auto pts = sample_points(s, L.space().base_vars(), {}, 10);
    for (const auto& r : hessian_det_identity_check(L, pts)) {
      if (r.skipped) continue;
      CHECK(r.exact_equal);
    }
  }
  SUBCASE("points with L = 0 are reported as skipped") {
    Lagrangian L{1, dy(1)};  // vanishes at dy1 = 0
    EvalPoint p;
    p.set(Var{VarClass::Indep, 0}, mpq_class(0));
    p.set(Var{VarClass::Fiber, 1}, mpq_class(1));
    p.set(Var{VarClass::FiberVel, 1}, mpq_class(0));
    auto rs = hessian_det_identity_check(L, {p});
    REQUIRE(rs.size() == 1);
    CHECK(rs[0].skipped);
  }
}

TEST_CASE("Euler degeneracy of 1-homogeneous Lagrangians") {
  Sampler s(83);
  SUBCASE("homogenized catalog Lagrangian") {
    HomLagrangian hat = homogenize(lagrangian_of("egorov-lin", 3));
    SampleDomain dom;
    dom.restrict(Var{VarClass::HVel, 0}, mpq_class(1, 10), mpq_class(2));
    auto pts = sample_points(s, hat.space().base_vars(), collect_guards(hat.L), 30, dom);
    auto rep = euler_degeneracy_check(hat, pts);
    CHECK(rep.pass);
  }
  SUBCASE("linear Lagrangian has an identically zero Hessian") {
    HomLagrangian hat{1, u(0)};
    auto pts = sample_points(s, hat.space().base_vars(), {}, 10);
    CHECK(euler_degeneracy_check(hat, pts).pass);
  }
  SUBCASE("a non-homogeneous control fails") {
    HomLagrangian bad{1, power(u(0), 2)};
    auto pts = sample_points(s, bad.space().base_vars(), {}, 10);
    CHECK(!euler_degeneracy_check(bad, pts).pass);
  }
}

TEST_CASE("convexity probe") {
  SUBCASE("Euclidean norm is strongly convex") {
    HomLagrangian hat{1, sqrt_of(add(power(u(0), 2), power(u(1), 2)))};
    Sampler s(89);
    SampleDomain dom;  // keep away from the cone tip
    dom.restrict(Var{VarClass::HVel, 0}, mpq_class(1, 4), mpq_class(2));
    dom.restrict(Var{VarClass::HVel, 1}, mpq_class(1, 4), mpq_class(2));
    auto rep = convexity_probe(hat, s, 40, dom);
    CHECK(rep.positive_definite_everywhere);
    CHECK(!rep.indefinite_witness.has_value());
  }
  SUBCASE("every shipped psi pair has an indefinite witness") {
    for (int k = 0; k < egorov_psi_pair_count(); ++k) {
      Sampler s(200 + k);
      auto rep = convexity_probe(egorov_psi_lagrangian(2, k), s, 200);
      CHECK(rep.indefinite_witness.has_value());
    }
  }
  SUBCASE("the homogenized catalog Lagrangian is pseudo-Finsler only") {
    HomLagrangian hat = homogenize(lagrangian_of("egorov-lin", 3));
    Sampler s(97);
    auto rep = convexity_probe(hat, s, 100);
    CHECK(rep.indefinite_witness.has_value());
  }
}

TEST_CASE("second-order reduction") {
  Sampler s(301);
  SUBCASE("antisymmetric acceleration coefficients fail closedness") {
    SecondOrderLagrangian L2{2, add(mul(ha(1), u(2)), mul(power(u(1), 2), hx(1)))};
    try {
      (void)reduce_second_order(L2, s);
      FAIL("expected ClosednessError");
    } catch (const ClosednessError& err) {
      CHECK(err.pair == std::pair<int, int>{1, 2});
    }
  }
  SUBCASE("position-free potential leaves F unchanged") {
    // lambda_s = d(u1 u2)/du^s, F = x1^2 u1.
    Ex F = mul(power(hx(1), 2), u(1));
    SecondOrderLagrangian L2{2, sum({F, mul(ha(1), u(2)), mul(ha(2), u(1))})};
    auto r = reduce_second_order(L2, s);
    CHECK(identical(r.reduced, F));
    CHECK(identical(r.potential, mul(u(1), u(2))));
    CHECK(r.certificate.kind == ZeroKind::SymbolicZero);
  }
  SUBCASE("recovers a constructed potential") {
    // potential = x1 u1 u2, lambda_s = d(potential)/du^s.
    Ex pot = product({hx(1), u(1), u(2)});
    Ex F = add(power(u(1), 2), mul(hx(2), u(2)));
    std::vector<Ex> terms{F};
    for (int sdx = 0; sdx <= 2; ++sdx)
      terms.push_back(mul(ha(sdx), partial(pot, {VarClass::HVel, sdx})));
    SecondOrderLagrangian L2{2, sum(std::move(terms))};
    auto r = reduce_second_order(L2, s);
    CHECK(identical(r.potential, pot));
    CHECK(identical(r.reduced, sub(F, mul(u(1), mul(u(1), u(2))))));
    CHECK(r.certificate.kind == ZeroKind::SymbolicZero);
  }
  SUBCASE("quadratic acceleration dependence is rejected") {
    SecondOrderLagrangian L2{1, power(ha(1), 2)};
    CHECK_THROWS_AS((void)reduce_second_order(L2, s), NonAffineError);
  }
  SUBCASE("non-polynomial velocity dependence is rejected") {
    SecondOrderLagrangian L2{1, mul(ha(1), call(Func::Exp, u(1)))};
    CHECK_THROWS_AS((void)reduce_second_order(L2, s), NonPolynomialError);
  }
}

TEST_CASE("numeric extremal check") {
  SUBCASE("symbolic zero implies numeric zero along trajectories") {
    auto r = numeric_extremal_check(lagrangian_of("egorov-lin", 3),
                                    structure_of("egorov-lin", 3), 0.0, {0, 0, 0},
                                    {1, 1, 1}, 1.0);
    CHECK(!r.singular_exit);
    CHECK(r.max_residual < 1e-9);
  }
  SUBCASE("control case stays bounded away from zero") {
    auto r = numeric_extremal_check(free_quadratic(3), structure_of("egorov-lin", 3), 0.0,
                                    {0, 0, 0}, {1, 1, 1}, 1.0);
    CHECK(r.max_residual >= 0.1);
  }
  SUBCASE("the singular locus stops the integration with an exit time") {
    // Straight lines cross the singular locus y1 = dy2 of this Lagrangian:
    // here y1(x) = x/2 meets the constant dy2 = 3/5 at x = 1.2.
    auto r = numeric_extremal_check(lagrangian_of("distinguished"), structure_of("flat", 2),
                                    0.0, {0.0, 0.0}, {0.5, 0.6}, 4.0);
    CHECK(r.singular_exit);
    CHECK(r.exit_time > 1.0);
    CHECK(r.exit_time < 1.5);
  }
}

TEST_CASE("reparameterized extremal traces coincide") {
  // Integrate the homogeneous quadratic structure with velocities v and 2v;
  // 2-homogeneity makes the second trace the first at doubled parameter.
  HomogeneousStructure H = christoffel_to_homog(*catalog_get("egorov-christoffel").christoffel);
  const int dim = H.n + 1;

  OdeRhs rhs = [&](double, const std::vector<double>& st, std::vector<double>& d) {
    EvalPoint p;
    for (int i = 0; i < dim; ++i) {
      p.set(Var{VarClass::HPos, i}, st[i]);
      p.set(Var{VarClass::HVel, i}, st[dim + i]);
    }
    for (int i = 0; i < dim; ++i) {
      d[i] = st[dim + i];
      d[dim + i] = -eval_double(H.h[i], p);
    }
  };

  std::vector<double> base{0.1, 0.2, -0.3, 0.4, 1.0, 0.5, -0.25, 0.75};
  std::vector<double> doubled = base;
  for (int i = 0; i < dim; ++i) doubled[dim + i] *= 2;

  for (double t : {0.25, 0.5, 1.0}) {
    OdeSolution a = integrate_dopri5(rhs, base, 0.0, t, 1e-10, 1e-12);
    OdeSolution b = integrate_dopri5(rhs, doubled, 0.0, t / 2, 1e-10, 1e-12);
    REQUIRE(!a.singular_exit);
    REQUIRE(!b.singular_exit);
    for (int i = 0; i < dim; ++i)
      CHECK(std::abs(a.states.back()[i] - b.states.back()[i]) < 1e-6);
  }
}

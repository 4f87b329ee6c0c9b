#include "vg/parser.hpp"

#include "doctest.h"
#include "test_util.hpp"

using namespace vg;
using vgtest::random_polynomial;

namespace {

const VariableSpace kInhom3 = VariableSpace::inhomogeneous(3);

Ex dy(int i) { return symbol({VarClass::FiberVel, i}); }
Ex y(int i) { return symbol({VarClass::Fiber, i}); }

}  // namespace

TEST_CASE("expression grammar") {
  SUBCASE("products collect repeated factors") {
    Ex e = parse_expr("2*y1*dy1*dy2*dy1", kInhom3);
    CHECK(identical(e, product({number(2), y(1), power(dy(1), 2), dy(2)})));
  }
  SUBCASE("precedence and associativity") {
    CHECK(identical(parse_expr("2+3*4", kInhom3), number(14)));
    CHECK(identical(parse_expr("2^3^2", kInhom3), number(512)));  // right-assoc
    CHECK(identical(parse_expr("-x^2", kInhom3), neg(power(symbol({VarClass::Indep, 0}), 2))));
    CHECK(identical(parse_expr("6/3/2", kInhom3), number(1)));    // left-assoc
    CHECK(identical(parse_expr("2*dy1^2", kInhom3), mul(number(2), power(dy(1), 2))));
  }
  SUBCASE("quotients carry singular guards") {
    Ex e = parse_expr("dy1/(dy2 - y1)", kInhom3);
    auto gs = collect_guards(e);
    REQUIRE(gs.size() == 1);
    CHECK(gs[0].kind == Guard::Kind::NonZero);
    // Denominator recorded through its sign-normalized representative.
    CHECK(identical(gs[0].expr, sub(y(1), dy(2))));
  }
  SUBCASE("fractional powers carry positivity guards") {
    Ex e = parse_expr("erf(dy1/dy2^(3/2))", kInhom3);
    CHECK(e->kind() == NodeKind::Call);
    auto gs = collect_guards(e);
    REQUIRE(gs.size() == 1);
    CHECK(gs[0].kind == Guard::Kind::Positive);
    CHECK(identical(gs[0].expr, dy(2)));
  }
  SUBCASE("sqrt normalizes to a half power") {
    CHECK(identical(parse_expr("sqrt(y1)", kInhom3), power(y(1), mpq_class(1, 2))));
    CHECK(identical(parse_expr("sqrt(pi)", kInhom3), power(pi(), mpq_class(1, 2))));
  }
  SUBCASE("errors carry positions") {
    CHECK_THROWS_WITH_AS((void)parse_expr("y1 + ", kInhom3),
                         "1:6: expected a term, found ''", ParseError);
    CHECK_THROWS_WITH_AS((void)parse_expr("y1 + z3", kInhom3),
                         "1:6: unknown identifier 'z3'", ParseError);
    CHECK_THROWS_AS((void)parse_expr("u1 + y1", kInhom3), ParseError);  // wrong chart
    CHECK_THROWS_AS((void)parse_expr("y1^dy1", kInhom3), ParseError);   // symbolic exponent
    CHECK_THROWS_AS((void)parse_expr("tan(y1)", kInhom3), ParseError);
    CHECK_THROWS_AS((void)parse_expr("(y1", kInhom3), ParseError);
  }
}

TEST_CASE("print-parse round trip on random expressions") {
  Sampler s(31);
  const std::vector<Var> vars = {{VarClass::Indep, 0},
                                 {VarClass::Fiber, 1},
                                 {VarClass::Fiber, 2},
                                 {VarClass::FiberVel, 1},
                                 {VarClass::FiberVel, 2}};
  for (int t = 0; t < 60; ++t) {
    Ex e = random_polynomial(s, vars, 6, 4);
    if (t % 3 == 0) e = div(e, add(power(dy(1), 2), number(1)));
    if (t % 5 == 0) e = mul(e, call(Func::Exp, y(1)));
    if (t % 7 == 0) e = add(e, power(dy(2), mpq_class(3, 2)));
    Ex back = parse_expr(to_string(e), kInhom3);
    CHECK(identical(back, e));
  }
}

TEST_CASE("structure files") {
  SUBCASE("ode") {
    auto s = parse_structure(
        "[header]\n"
        "kind = ode\n"
        "n = 3\n"
        "\n"
        "# quadratic right-hand sides\n"
        "f1 = y1^2 + y2^2 + y3^2\n"
        "f2 = y1^2\n"
        "f3 = y2\n");
    auto& P = std::get<PathStructure>(s);
    CHECK(P.n == 3);
    CHECK(identical(P.rhs(1), sum({power(y(1), 2), power(y(2), 2), power(y(3), 2)})));
    CHECK(identical(P.rhs(3), y(2)));
  }
  SUBCASE("missing component") {
    CHECK_THROWS_WITH_AS((void)parse_structure("[header]\nkind = ode\nn = 2\nf1 = y1\n"),
                         "1:1: missing component f2", ParseError);
  }
  SUBCASE("acceleration dependence is rejected") {
    CHECK_THROWS_AS((void)parse_structure("[header]\nkind = ode\nn = 1\nf1 = ddy1\n"),
                    ParseError);
  }
  SUBCASE("homogeneous with Euler identity validation") {
    auto s = parse_structure(
        "[header]\nkind = homogeneous\nn = 3\n"
        "h0 = 0\nh1 = 2*x2*u2*u3\nh2 = 0\nh3 = 0\n");
    auto& H = std::get<HomogeneousStructure>(s);
    CHECK(H.n == 3);
    CHECK_THROWS_AS((void)parse_structure("[header]\nkind = homogeneous\nn = 1\n"
                                          "h0 = 0\nh1 = u1^3\n"),
                    ParseError);  // 3-homogeneous, witness reported
  }
  SUBCASE("christoffel symmetrization") {
    auto s = parse_structure(
        "[header]\nkind = christoffel\nn = 3\n"
        "G[1][2][3] = x2\nG[1][3][2] = x2\n");
    auto& G = std::get<ChristoffelTable>(s);
    CHECK(identical(G.entry(1, 2, 3), symbol({VarClass::HPos, 2})));
    CHECK(identical(G.entry(1, 3, 2), symbol({VarClass::HPos, 2})));
    CHECK(G.entry(0, 0, 0)->is_zero());
    // velocity dependence is rejected
    CHECK_THROWS_AS(
        (void)parse_structure("[header]\nkind = christoffel\nn = 2\nG[0][1][1] = u1\n"),
        ParseError);
  }
  SUBCASE("lagrangian kinds") {
    auto s = parse_structure("[header]\nkind = lagrangian\nn = 2\nL = dy1/(dy2 - y1)\n");
    CHECK(std::get<Lagrangian>(s).n == 2);
    auto s2 = parse_structure("[header]\nkind = lagrangian2\nn = 1\nL = a1*u0 + u1^2\n");
    CHECK(std::get<SecondOrderLagrangian>(s2).n == 1);
    CHECK_THROWS_AS((void)parse_structure("[header]\nkind = lagrangian\nn = 1\nL = a1\n"),
                    ParseError);
  }
  SUBCASE("structure print-parse round trip") {
    PathStructure P{2, {mul(number(2), power(dy(1), 2)), y(1)}};
    auto printed = print_structure(P);
    auto back = std::get<PathStructure>(parse_structure(printed));
    CHECK(identical(back.rhs(1), P.rhs(1)));
    CHECK(identical(back.rhs(2), P.rhs(2)));
  }
}

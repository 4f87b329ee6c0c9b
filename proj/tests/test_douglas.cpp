#include "vg/douglas.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "doctest.h"
#include "test_util.hpp"
#include "vg/catalog.hpp"
#include "vg/lagrange.hpp"

using namespace vg;

namespace {

Ex y(int i) { return symbol({VarClass::Fiber, i}); }
Ex dy(int i) { return symbol({VarClass::FiberVel, i}); }

PathStructure structure_of(const std::string& id, int n = 0) {
  return *catalog_get(id, n).structure;
}

EvalPoint fpar_point(int n) {
  EvalPoint p;
  p.set(Var{VarClass::Indep, 0}, mpq_class(0));
  for (int i = 1; i <= n; ++i) {
    p.set(Var{VarClass::Fiber, i}, mpq_class(i == n ? 1 : 0));
    p.set(Var{VarClass::FiberVel, i}, mpq_class(1));
  }
  return p;
}

// Residual of a kernel matrix against one system row at a point, exact.
mpq_class row_residual(const PhiSystem& S, const PhiRow& row, const EvalPoint& p,
                       const SymMatQ& K) {
  mpq_class acc(0);
  for (int c = 0; c < S.map.cols(); ++c) {
    auto [i, j] = S.map.pair_of(c);
    auto v = try_eval_exact(row.coeff[c], p);
    REQUIRE(v.has_value());
    acc += *v * K[i - 1][j - 1];
  }
  return acc;
}

}  // namespace

TEST_CASE("phi index map is a bijection") {
  for (int n = 2; n <= 6; ++n) {
    PhiIndexMap m{n};
    CHECK(m.cols() == n * (n + 1) / 2);
    std::set<int> seen;
    for (int i = 1; i <= n; ++i)
      for (int j = i; j <= n; ++j) {
        int c = m.col(i, j);
        CHECK(c == m.col(j, i));
        CHECK(seen.insert(c).second);
        auto [pi_, pj_] = m.pair_of(c);
        CHECK(pi_ == i);
        CHECK(pj_ == j);
      }
    CHECK(static_cast<int>(seen.size()) == m.cols());
  }
}

TEST_CASE("build_system row counts") {
  CHECK(build_system(structure_of("fpar", 3), 1).rows.size() == 6);
  CHECK(build_system(structure_of("fpar", 2), 2).rows.size() == 3);
  CHECK(build_system(structure_of("fpar", 4), 2).rows.size() == 18);
  CHECK_THROWS_AS((void)build_system(structure_of("flat", 2), 0), std::invalid_argument);

  SUBCASE("flat structure yields identically zero rows") {
    PhiSystem S = build_system(structure_of("flat", 3), 2);
    for (const auto& row : S.rows)
      for (const auto& c : row.coeff) CHECK(c->is_zero());
  }
}

TEST_CASE("prolongation matches d/dx of A for velocity-free structures") {
  PathStructure P = structure_of("fpar", 3);
  PhiSystem S = build_system(P, 1);
  OperatorField A = tensor_A(P);
  // Level-1 row for the pair (i,j) must equal
  // (1/2) sum_k ((dA/dx)_j^k phi_ki - (dA/dx)_i^k phi_kj).
  for (const auto& row : S.rows) {
    if (row.level != 1) continue;
    std::vector<Ex> expected(S.map.cols(), number(0));
    for (int k = 1; k <= P.n; ++k) {
      int c_ki = S.map.col(k, row.gen_i);
      int c_kj = S.map.col(k, row.gen_j);
      expected[c_ki] =
          add(expected[c_ki], mul(number(1, 2), total_derivative(A.at(row.gen_j, k), P)));
      expected[c_kj] =
          sub(expected[c_kj], mul(number(1, 2), total_derivative(A.at(row.gen_i, k), P)));
    }
    for (int c = 0; c < S.map.cols(); ++c) CHECK(identical(row.coeff[c], expected[c]));
  }
}

TEST_CASE("rank at the distinguished sample point") {
  PhiSystem S = build_system(structure_of("fpar", 3), 1);
  RankReport r = rank_at(S, fpar_point(3));
  CHECK(r.rank == 6);
  CHECK(r.max_possible == 6);
  CHECK(r.kernel.empty());
}

TEST_CASE("flat structure has full kernel") {
  PhiSystem S = build_system(structure_of("flat", 3), 1);
  RankReport r = rank_at(S, fpar_point(3));
  CHECK(r.rank == 0);
  CHECK(r.kernel.size() == 6);
}

TEST_CASE("kernel vectors annihilate every row exactly") {
  Sampler s(101);
  for (const char* id : {"fpa2", "flat"}) {
    PhiSystem S = build_system(structure_of(id, 3), 1);
    GenericRankResult g = generic_rank(S, s, 5);
    for (const auto& K : g.witness.kernel)
      for (const auto& row : S.rows)
        CHECK(row_residual(S, row, g.witness.point, K) == 0);
  }
}

TEST_CASE("fpa2 kernel forces the first row of phi to vanish") {
  Sampler s(103);
  PhiSystem S = build_system(structure_of("fpa2", 3), 1);
  int checked = 0;
  for (int t = 0; t < 5; ++t) {
    GenericRankResult g = generic_rank(S, s, 3);
    if (g.max_rank < 3) continue;  // degenerate sample; kernel larger than generic
    for (const auto& K : g.witness.kernel)
      for (int i = 0; i < 3; ++i) CHECK(K[0][i] == 0);
    ++checked;
  }
  CHECK(checked >= 3);
}

TEST_CASE("fpa2 minor determinant matches the closed form") {
  for (int n : {3, 4, 5}) {
    PhiSystem S = build_system(structure_of("fpa2", n), 1);
    // Rows 1..n-1 and n(n+1)/2 - 1 (1-based), columns phi_11..phi_1n.
    std::vector<const PhiRow*> rows;
    for (int r = 0; r < n - 1; ++r) rows.push_back(&S.rows[r]);
    rows.push_back(&S.rows[n * (n + 1) / 2 - 2]);
    std::vector<Ex> minor;
    for (const PhiRow* row : rows)
      for (int c = 0; c < n; ++c) minor.push_back(row->coeff[c]);
    Ex det_m = symbolic_det(minor, n);
    Ex expected = product({power(number(-2), mpq_class(n)), power(y(1), mpq_class(n - 2)),
                           sub(mul(y(1), dy(n)), mul(y(n), dy(1)))});
    CHECK(identical(det_m, expected));
    // The remaining columns of those rows vanish identically.
    for (const PhiRow* row : rows)
      for (int c = n; c < S.map.cols(); ++c) CHECK(row->coeff[c]->is_zero());
  }
}

TEST_CASE("generic rank") {
  Sampler s(107);
  SUBCASE("fpar n=4 reaches the full 10") {
    PhiSystem S = build_system(structure_of("fpar", 4), 1);
    GenericRankResult g = generic_rank(S, s, 50);
    CHECK(g.max_rank == 10);
  }
  SUBCASE("fpar n=2 with two prolongations reaches 3") {
    PhiSystem S = build_system(structure_of("fpar", 2), 2);
    GenericRankResult g = generic_rank(S, s, 50);
    CHECK(g.max_rank == 3);
  }
  SUBCASE("fpa2 n=3 stays strictly below full rank") {
    PhiSystem S = build_system(structure_of("fpa2", 3), 1);
    for (int t = 0; t < 50; ++t) {
      GenericRankResult g = generic_rank(S, s, 1);
      CHECK(g.max_rank < 6);
    }
  }
}

TEST_CASE("rank is monotone in the prolongation level") {
  Sampler s(109);
  PathStructure P = structure_of("egorov", 3);
  EvalPoint p = s.point(P.space().base_vars(), {});
  int prev = 0;
  for (int levels = 1; levels <= 3; ++levels) {
    PhiSystem S = build_system(P, levels);
    RankReport r = rank_at(S, p);
    CHECK(r.rank >= prev);
    prev = r.rank;
  }
}

TEST_CASE("exact rank agrees with floating-point SVD rank") {
  Sampler s(113);
  for (const char* id : {"fpar", "fpa2", "egorov", "egorov-lin", "flat", "submax"}) {
    PathStructure P = structure_of(id, 3);
    PhiSystem S = build_system(P, default_levels(P.n));
    auto vars = P.space().base_vars();
    std::vector<Guard> guards;
    for (const Ex& f : P.f)
      for (auto& g : collect_guards(f)) guards.push_back(g);
    for (int t = 0; t < 5; ++t) {
      EvalPoint p = s.point(vars, guards);
      RankReport r;
      try {
        r = rank_at(S, p);
      } catch (const SingularPointError&) {
        continue;
      }
      Eigen::MatrixXd M(S.rows.size(), S.map.cols());
      for (size_t ri = 0; ri < S.rows.size(); ++ri)
        for (int c = 0; c < S.map.cols(); ++c)
          M(static_cast<int>(ri), c) = eval_double(S.rows[ri].coeff[c], p);
      double scale = M.cwiseAbs().maxCoeff();
      int float_rank = 0;
      if (scale > 0) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(M / scale);
        float_rank = (svd.singularValues().array() > 1e-8).count();
      }
      CHECK(r.rank == float_rank);
    }
  }
}

TEST_CASE("verdicts") {
  SUBCASE("fpar is not variational by full rank") {
    Sampler s(127);
    Verdict v = decide_variationality(structure_of("fpar", 3), 1, s, 50);
    CHECK(v.kind == Verdict::Kind::NotVariationalFullRank);
    CHECK(v.not_variational());
    REQUIRE(v.full_rank_witness.has_value());
    CHECK(v.full_rank_witness->rank == 6);
    CHECK(v.scope == "microlocal near witness jet");
  }
  SUBCASE("fpa2 is not variational by forced degeneracy") {
    Sampler s(131);
    Verdict v = decide_variationality(structure_of("fpa2", 3), 1, s, 60);
    CHECK(v.kind == Verdict::Kind::NotVariationalForcedDegenerate);
    CHECK(v.degenerate_points_tested >= 5);
    CHECK(v.combinations_per_point >= 30);
  }
  SUBCASE("flat is inconclusive with the full kernel") {
    Sampler s(137);
    Verdict v = decide_variationality(structure_of("flat", 3), 1, s, 30);
    CHECK(v.kind == Verdict::Kind::Inconclusive);
    CHECK(v.generic_kernel_dim == 6);
  }
}

TEST_CASE("candidate phi residuals") {
  Sampler s(139);
  PathStructure egl = structure_of("egorov-lin", 3);
  const int n = 3;

  SUBCASE("the Hessian of the companion Lagrangian solves all three families") {
    HessianField H = hessian_phi(*catalog_get("egorov-lin", 3).lagrangian);
    auto rep = check_candidate_phi(egl, H.phi, s);
    CHECK(rep.all_zero());
    for (const auto& r : rep.evolution) {
      // The evolution equation reduces to d(phi)/dx = 0 here.
      CHECK(identical(r.residual, total_derivative(H.at(r.i, r.j), egl)));
      CHECK(r.verdict.kind == ZeroKind::SymbolicZero);
    }
  }
  SUBCASE("the identity matrix violates the symmetry condition") {
    std::vector<Ex> phi(n * n, number(0));
    for (int i = 0; i < n; ++i) phi[i * n + i] = number(1);
    auto rep = check_candidate_phi(egl, phi, s);
    CHECK(!rep.all_zero());
    bool tg2_nonzero = false;
    for (const auto& r : rep.symmetry)
      if (r.verdict.kind == ZeroKind::Nonzero) tg2_nonzero = true;
    CHECK(tg2_nonzero);
  }
  SUBCASE("the zero matrix is a degenerate solution") {
    std::vector<Ex> phi(n * n, number(0));
    CHECK(check_candidate_phi(egl, phi, s).all_zero());
  }
  SUBCASE("asymmetric input is rejected") {
    std::vector<Ex> phi(n * n, number(0));
    phi[0 * n + 1] = number(1);
    CHECK_THROWS_AS((void)check_candidate_phi(egl, phi, s), std::invalid_argument);
  }
}

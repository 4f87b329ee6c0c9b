#pragma once

#include "vg/geometry.hpp"
#include "vg/ratmat.hpp"

namespace vg {

// Bijection between unordered index pairs (i <= j), 1-based, and the columns
// 0 .. n(n+1)/2 - 1 of the linear system on the Hessian unknowns phi_ij.
struct PhiIndexMap {
  int n = 0;

  int cols() const { return n * (n + 1) / 2; }
  int col(int i, int j) const {
    if (i > j) std::swap(i, j);
    return (i - 1) * n - (i - 1) * (i - 2) / 2 + (j - i);
  }
  std::pair<int, int> pair_of(int c) const {
    for (int i = 1; i <= n; ++i) {
      int width = n - i + 1;
      if (c < width) return {i, i + c};
      c -= width;
    }
    return {0, 0};
  }
};

// One linear condition sum_alpha coeff[alpha] * phi_alpha = 0 generated by the
// antisymmetry pair (gen_i, gen_j) at prolongation level `level`.
struct PhiRow {
  int level = 0;
  int gen_i = 0, gen_j = 0;
  std::vector<Ex> coeff;
};

struct PhiSystem {
  PathStructure structure;
  PhiIndexMap map;
  std::vector<PhiRow> rows;

  int n() const { return structure.n; }
  int levels() const { return rows.empty() ? -1 : rows.back().level; }
};

// Level 0: the antisymmetric part of A_i^k phi_kj, one row per pair i < j,
// normalized so that row(i,j) = (1/2)(A_j^k phi_ki - A_i^k phi_kj).
// Each further level applies the total derivative to the previous level's rows
// and eliminates d(phi_ij)/dx through the evolution equation
// d(phi_ij)/dx = -(1/2)(J^k_i phi_kj + J^k_j phi_ki).
PhiSystem build_system(const PathStructure& P, int levels);

int default_levels(int n);  // 2 for n == 2, else 1

using SymMatQ = std::vector<std::vector<mpq_class>>;  // symmetric n x n rational

struct RankReport {
  EvalPoint point;
  int rank = 0;
  int max_possible = 0;
  std::vector<SymMatQ> kernel;      // basis of the solution space at the point
  std::vector<int> levels_used;
};

RankReport rank_at(const PhiSystem& S, const EvalPoint& p);

struct GenericRankResult {
  int max_rank = 0;
  RankReport witness;  // report at a point attaining max_rank
  int samples = 0;
};
GenericRankResult generic_rank(const PhiSystem& S, Sampler& sampler, int trials);

struct Verdict {
  enum class Kind { NotVariationalFullRank, NotVariationalForcedDegenerate, Inconclusive };
  Kind kind = Kind::Inconclusive;
  bool not_variational() const { return kind != Kind::Inconclusive; }

  int levels = 0;
  // Full-rank mechanism: a point with exact rank n(n+1)/2.
  std::optional<RankReport> full_rank_witness;
  // Forced-degeneracy mechanism: det phi vanishes identically on the kernel
  // span at every tested base point.
  int degenerate_points_tested = 0;
  int combinations_per_point = 0;
  // Inconclusive: kernel statistics at the best point seen.
  int generic_kernel_dim = 0;
  std::optional<RankReport> kernel_sample;
  // Full rank at a point certifies non-variationality only near the witness
  // jet; every verdict carries this qualifier.
  std::string scope = "microlocal near witness jet";
};

std::string to_string(Verdict::Kind k);

Verdict decide_variationality(const PathStructure& P, int levels, Sampler& sampler, int trials);

// Residuals of a candidate Hessian field against the three condition families:
// closedness d(phi_ik)/d(dy^j) - d(phi_jk)/d(dy^i), the evolution equation, and
// the A-symmetry condition.
struct CandidatePhiReport {
  struct Tg0 { int i, j, k; ZeroVerdict verdict; };
  struct Tg1 { int i, j; ZeroVerdict verdict; Ex residual; };
  struct Tg2 { int i, j; ZeroVerdict verdict; };
  std::vector<Tg0> closedness;
  std::vector<Tg1> evolution;
  std::vector<Tg2> symmetry;
  bool all_zero() const;
};

CandidatePhiReport check_candidate_phi(const PathStructure& P, const std::vector<Ex>& phi_rowmajor,
                                       Sampler& sampler, int trials = 100, double tol = 1e-9);

}  // namespace vg

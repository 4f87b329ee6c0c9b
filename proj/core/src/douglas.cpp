#include "vg/douglas.hpp"

namespace vg {

int default_levels(int n) { return n == 2 ? 2 : 1; }

namespace {

std::vector<Ex> zero_row(int cols) { return std::vector<Ex>(cols, number(0L)); }

}  // namespace

PhiSystem build_system(const PathStructure& P, int levels) {
  if (levels < 1) throw std::invalid_argument("levels must be >= 1");
  const int n = P.n;
  PhiSystem S{P, PhiIndexMap{n}, {}};
  const int cols = S.map.cols();

  OperatorField A = tensor_A(P);
  OperatorField J = jacobian_J(P);

  // Level 0: row(i,j) = (1/2) sum_k (A_j^k phi_ki - A_i^k phi_kj).
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      PhiRow row{0, i, j, zero_row(cols)};
      for (int k = 1; k <= n; ++k) {
        int c_ki = S.map.col(k, i);
        int c_kj = S.map.col(k, j);
        row.coeff[c_ki] = add(row.coeff[c_ki], mul(number(1, 2), A.at(j, k)));
        row.coeff[c_kj] = sub(row.coeff[c_kj], mul(number(1, 2), A.at(i, k)));
      }
      S.rows.push_back(std::move(row));
    }
  }

  int level_size = n * (n - 1) / 2;
  for (int level = 1; level <= levels; ++level) {
    size_t begin = S.rows.size() - level_size;
    size_t end = S.rows.size();
    for (size_t r = begin; r < end; ++r) {
      const PhiRow& prev = S.rows[r];
      PhiRow row{level, prev.gen_i, prev.gen_j, zero_row(cols)};
      for (int c = 0; c < cols; ++c) {
        const Ex& coeff = prev.coeff[c];
        if (coeff->is_zero()) continue;
        // Product-rule term with the coefficient differentiated.
        row.coeff[c] = add(row.coeff[c], total_derivative(coeff, P));
        // d(phi_kl)/dx eliminated through the evolution equation.
        auto [k, l] = S.map.pair_of(c);
        for (int m = 1; m <= n; ++m) {
          int c_ml = S.map.col(m, l);
          int c_mk = S.map.col(m, k);
          row.coeff[c_ml] = sub(row.coeff[c_ml], product({number(1, 2), coeff, J.at(k, m)}));
          row.coeff[c_mk] = sub(row.coeff[c_mk], product({number(1, 2), coeff, J.at(l, m)}));
        }
      }
      S.rows.push_back(std::move(row));
    }
  }
  return S;
}

RankReport rank_at(const PhiSystem& S, const EvalPoint& p) {
  const int cols = S.map.cols();
  QMat M(static_cast<int>(S.rows.size()), cols);
  std::vector<int> levels;
  for (size_t r = 0; r < S.rows.size(); ++r) {
    levels.push_back(S.rows[r].level);
    for (int c = 0; c < cols; ++c) {
      auto v = try_eval_exact(S.rows[r].coeff[c], p);
      if (!v)
        throw SingularPointError("system coefficient is not exactly evaluable",
                                 S.rows[r].coeff[c]);
      M(static_cast<int>(r), c) = *v;
    }
  }

  RankReport out;
  out.point = p;
  out.max_possible = cols;
  out.rank = rank_bareiss(M);
  out.levels_used = std::move(levels);

  const int n = S.n();
  for (auto& v : kernel_basis(M)) {
    SymMatQ K(n, std::vector<mpq_class>(n));
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) K[i - 1][j - 1] = v[S.map.col(i, j)];
    out.kernel.push_back(std::move(K));
  }
  return out;
}

namespace {

std::vector<Var> system_vars(const PhiSystem& S) {
  std::set<Var> vars;
  for (const auto& row : S.rows)
    for (const auto& c : row.coeff)
      for (Var v : free_vars(c)) vars.insert(v);
  // Always sample the full jet chart so reports are comparable.
  auto base = S.structure.space().base_vars();
  vars.insert(base.begin(), base.end());
  return {vars.begin(), vars.end()};
}

std::vector<Guard> system_guards(const PhiSystem& S) {
  std::map<Ex, Guard::Kind, ExLess> merged;
  for (const auto& row : S.rows)
    for (const auto& c : row.coeff)
      for (auto& g : collect_guards(c)) {
        if (g.kind == Guard::Kind::Positive)
          merged[g.expr] = Guard::Kind::Positive;
        else
          merged.emplace(g.expr, Guard::Kind::NonZero);
      }
  std::vector<Guard> out;
  for (auto& [e, k] : merged) out.push_back({k, e});
  return out;
}

// det of a random kernel combination, exact.
bool kernel_det_identically_zero(const std::vector<SymMatQ>& kernel, int n, Sampler& sampler,
                                 int combinations) {
  if (kernel.empty()) return false;  // trivial kernel: phi = 0 only, not "forced degenerate"
  for (int t = 0; t < combinations; ++t) {
    QMat M(n, n);
    for (size_t b = 0; b < kernel.size(); ++b) {
      mpq_class c = sampler.rational(9, 9);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) += c * kernel[b][i][j];
    }
    if (det(M) != 0) return false;
  }
  return true;
}

}  // namespace

GenericRankResult generic_rank(const PhiSystem& S, Sampler& sampler, int trials) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  auto vars = system_vars(S);
  auto guards = system_guards(S);

  GenericRankResult out;
  bool have = false;
  for (int t = 0; t < trials; ++t) {
    EvalPoint p = sampler.point(vars, guards);
    RankReport r;
    try {
      r = rank_at(S, p);
    } catch (const SingularPointError&) {
      continue;
    }
    ++out.samples;
    if (!have || r.rank > out.max_rank) {
      out.max_rank = r.rank;
      out.witness = std::move(r);
      have = true;
    }
    if (out.max_rank == S.map.cols()) break;  // cannot improve
  }
  if (!have) throw SamplerExhaustedError("no admissible sample point for rank computation");
  return out;
}

std::string to_string(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::NotVariationalFullRank:
      return "NotVariational/FullRank";
    case Verdict::Kind::NotVariationalForcedDegenerate:
      return "NotVariational/ForcedDegenerate";
    case Verdict::Kind::Inconclusive:
      return "Inconclusive";
  }
  return "?";
}

Verdict decide_variationality(const PathStructure& P, int levels, Sampler& sampler, int trials) {
  PhiSystem S = build_system(P, levels);
  const int full = S.map.cols();

  Verdict out;
  out.levels = levels;

  auto vars = system_vars(S);
  auto guards = system_guards(S);

  std::vector<RankReport> reports;
  int best = -1;
  for (int t = 0; t < std::max(trials, 1); ++t) {
    EvalPoint p = sampler.point(vars, guards);
    RankReport r;
    try {
      r = rank_at(S, p);
    } catch (const SingularPointError&) {
      continue;
    }
    if (r.rank == full) {
      out.kind = Verdict::Kind::NotVariationalFullRank;
      out.full_rank_witness = std::move(r);
      return out;
    }
    if (r.rank > best) best = r.rank;
    reports.push_back(std::move(r));
  }
  if (reports.empty())
    throw SamplerExhaustedError("no admissible sample point for verdict");

  // Forced degeneracy: the determinant must vanish identically on the kernel
  // span at several distinct base points, each certified by random exact
  // combinations of the kernel basis.
  const int kBasePoints = 5;
  const int kCombinations = 30;
  int degenerate = 0;
  int max_rank_points = 0;
  for (const auto& r : reports) {
    if (r.rank != best) continue;  // judge on the generic stratum
    ++max_rank_points;
    if (kernel_det_identically_zero(r.kernel, P.n, sampler, kCombinations)) ++degenerate;
    if (degenerate >= kBasePoints) break;
  }
  if (degenerate >= kBasePoints) {
    out.kind = Verdict::Kind::NotVariationalForcedDegenerate;
    out.degenerate_points_tested = degenerate;
    out.combinations_per_point = kCombinations;
    out.generic_kernel_dim = full - best;
    out.kernel_sample = reports.front();
    return out;
  }

  out.kind = Verdict::Kind::Inconclusive;
  out.generic_kernel_dim = full - best;
  for (auto& r : reports)
    if (r.rank == best) {
      out.kernel_sample = std::move(r);
      break;
    }
  (void)max_rank_points;
  return out;
}

bool CandidatePhiReport::all_zero() const {
  for (const auto& r : closedness)
    if (!r.verdict.is_zero()) return false;
  for (const auto& r : evolution)
    if (!r.verdict.is_zero()) return false;
  for (const auto& r : symmetry)
    if (!r.verdict.is_zero()) return false;
  return true;
}

CandidatePhiReport check_candidate_phi(const PathStructure& P, const std::vector<Ex>& phi_rowmajor,
                                       Sampler& sampler, int trials, double tol) {
  const int n = P.n;
  if (static_cast<int>(phi_rowmajor.size()) != n * n)
    throw std::invalid_argument("phi must be an n x n matrix");
  auto phi = [&](int i, int j) -> const Ex& { return phi_rowmajor[(i - 1) * n + (j - 1)]; };
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      if (!identical(phi(i, j), phi(j, i)))
        throw std::invalid_argument("phi must be symmetric");

  CandidatePhiReport out;
  OperatorField J = jacobian_J(P);
  OperatorField A = tensor_A(P);

  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      for (int k = 1; k <= n; ++k) {
        Ex r = sub(partial(phi(i, k), Var{VarClass::FiberVel, j}),
                   partial(phi(j, k), Var{VarClass::FiberVel, i}));
        out.closedness.push_back({i, j, k, is_zero(r, sampler, trials, tol)});
      }

  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j) {
      std::vector<Ex> terms;
      terms.push_back(total_derivative(phi(i, j), P));
      for (int k = 1; k <= n; ++k) {
        terms.push_back(product({number(1, 2), J.at(i, k), phi(k, j)}));
        terms.push_back(product({number(1, 2), J.at(j, k), phi(k, i)}));
      }
      Ex r = sum(std::move(terms));
      out.evolution.push_back({i, j, is_zero(r, sampler, trials, tol), r});
    }

  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      std::vector<Ex> terms;
      for (int k = 1; k <= n; ++k) {
        terms.push_back(mul(A.at(i, k), phi(k, j)));
        terms.push_back(neg(mul(A.at(j, k), phi(k, i))));
      }
      Ex r = sum(std::move(terms));
      out.symmetry.push_back({i, j, is_zero(r, sampler, trials, tol)});
    }

  return out;
}

}  // namespace vg

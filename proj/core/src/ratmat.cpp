#include "vg/ratmat.hpp"

#include <stdexcept>

namespace vg {

int rank_bareiss(const QMat& m) {
  const int rows = m.rows(), cols = m.cols();
  if (rows == 0 || cols == 0) return 0;

  // Clear denominators row by row; row scaling preserves rank.
  std::vector<std::vector<mpz_class>> z(rows, std::vector<mpz_class>(cols));
  for (int r = 0; r < rows; ++r) {
    mpz_class l(1);
    for (int c = 0; c < cols; ++c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(r, c).get_den().get_mpz_t());
    for (int c = 0; c < cols; ++c) {
      mpq_class scaled = m(r, c) * l;
      z[r][c] = scaled.get_num();
    }
  }

  mpz_class prev(1);
  int rank = 0;
  int pr = 0;
  for (int pc = 0; pc < cols && pr < rows; ++pc) {
    int pivot = -1;
    for (int r = pr; r < rows; ++r)
      if (z[r][pc] != 0) { pivot = r; break; }
    if (pivot < 0) continue;
    std::swap(z[pivot], z[pr]);
    for (int r = pr + 1; r < rows; ++r) {
      for (int c = pc + 1; c < cols; ++c)
        z[r][c] = (z[r][c] * z[pr][pc] - z[r][pc] * z[pr][c]) / prev;
      z[r][pc] = 0;
    }
    prev = z[pr][pc];
    ++pr;
    ++rank;
  }
  return rank;
}

Rref rref(QMat m) {
  const int rows = m.rows(), cols = m.cols();
  Rref out;
  int pr = 0;
  for (int pc = 0; pc < cols && pr < rows; ++pc) {
    int pivot = -1;
    for (int r = pr; r < rows; ++r)
      if (m(r, pc) != 0) { pivot = r; break; }
    if (pivot < 0) continue;
    if (pivot != pr)
      for (int c = 0; c < cols; ++c) std::swap(m(pivot, c), m(pr, c));
    mpq_class inv = 1 / m(pr, pc);
    for (int c = pc; c < cols; ++c) m(pr, c) *= inv;
    for (int r = 0; r < rows; ++r) {
      if (r == pr || m(r, pc) == 0) continue;
      mpq_class factor = m(r, pc);
      for (int c = pc; c < cols; ++c) m(r, c) -= factor * m(pr, c);
    }
    out.pivot_cols.push_back(pc);
    ++pr;
  }
  out.rank = pr;
  out.mat = std::move(m);
  return out;
}

std::vector<std::vector<mpq_class>> kernel_basis(const QMat& m) {
  Rref r = rref(m);
  const int cols = m.cols();
  std::vector<bool> is_pivot(cols, false);
  for (int c : r.pivot_cols) is_pivot[c] = true;

  std::vector<std::vector<mpq_class>> basis;
  for (int free_c = 0; free_c < cols; ++free_c) {
    if (is_pivot[free_c]) continue;
    std::vector<mpq_class> v(cols, mpq_class(0));
    v[free_c] = 1;
    for (size_t pi = 0; pi < r.pivot_cols.size(); ++pi)
      v[r.pivot_cols[pi]] = -r.mat(static_cast<int>(pi), free_c);
    basis.push_back(std::move(v));
  }
  return basis;
}

mpq_class det(QMat m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("det of non-square matrix");
  const int n = m.rows();
  mpq_class out(1);
  for (int pc = 0; pc < n; ++pc) {
    int pivot = -1;
    for (int r = pc; r < n; ++r)
      if (m(r, pc) != 0) { pivot = r; break; }
    if (pivot < 0) return mpq_class(0);
    if (pivot != pc) {
      for (int c = 0; c < n; ++c) std::swap(m(pivot, c), m(pc, c));
      out = -out;
    }
    out *= m(pc, pc);
    mpq_class inv = 1 / m(pc, pc);
    for (int r = pc + 1; r < n; ++r) {
      if (m(r, pc) == 0) continue;
      mpq_class factor = m(r, pc) * inv;
      for (int c = pc; c < n; ++c) m(r, c) -= factor * m(pc, c);
    }
  }
  return out;
}

}  // namespace vg

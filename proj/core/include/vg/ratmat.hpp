#pragma once

#include <gmpxx.h>

#include <vector>

namespace vg {

// Dense matrix of exact rationals.
class QMat {
 public:
  QMat() = default;
  QMat(int rows, int cols) : rows_(rows), cols_(cols), a_(rows * cols, mpq_class(0)) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  mpq_class& operator()(int r, int c) { return a_[r * cols_ + c]; }
  const mpq_class& operator()(int r, int c) const { return a_[r * cols_ + c]; }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<mpq_class> a_;
};

// Exact rank via fraction-free (Bareiss) elimination on the denominator-cleared
// integer matrix.
int rank_bareiss(const QMat& m);

struct Rref {
  int rank = 0;
  std::vector<int> pivot_cols;
  QMat mat;  // reduced row-echelon form
};
Rref rref(QMat m);

// Basis of the right kernel, one vector per non-pivot column.
std::vector<std::vector<mpq_class>> kernel_basis(const QMat& m);

mpq_class det(QMat m);  // square input

}  // namespace vg

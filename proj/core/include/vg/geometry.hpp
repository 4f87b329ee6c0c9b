#pragma once

#include "vg/sampler.hpp"
#include "vg/structures.hpp"

namespace vg {

// n x n matrix of expressions addressed as a (1,1)-tensor; at(i, j) is the
// entry with lower index i (row) and upper index j, both 1-based.
struct OperatorField {
  int n = 0;
  std::vector<Ex> m;

  OperatorField() = default;
  explicit OperatorField(int dim) : n(dim), m(dim * dim, number(0L)) {}

  Ex& at(int lower, int upper) { return m[(lower - 1) * n + (upper - 1)]; }
  const Ex& at(int lower, int upper) const { return m[(lower - 1) * n + (upper - 1)]; }
};

// d/dx = d_x + dy^j d_{y^j} + f^j d_{dy^j}, defined on acceleration-free
// expressions over the inhomogeneous chart.
Ex total_derivative(const Ex& e, const PathStructure& P);

// J_j^k = df^k / d(dy^j).
OperatorField jacobian_J(const PathStructure& P);

// A_i^j = d/dx(df^j/d(dy^i)) - 2 df^j/dy^i - (1/2) (df^k/d(dy^i)) (df^j/d(dy^k)).
OperatorField tensor_A(const PathStructure& P);

HomogeneousStructure christoffel_to_homog(const ChristoffelTable& G);

// Parameterize by the first coordinate: f^i = -h^i(x, 1, dy) + dy^i h^0(x, 1, dy).
PathStructure homog_to_inhomog(const HomogeneousStructure& H);

struct HomogeneityViolation {
  int component;        // index j with a failing Euler identity
  EvalPoint witness;
  std::string message;  // includes the witness velocity scaling
};
// Euler identity sum_i u^i dh^j/du^i - 2 h^j = 0 for every component; nullopt
// when all components pass symbolically.
std::optional<HomogeneityViolation> homogeneity_violation(const HomogeneousStructure& H);

struct ReversibilityResult {
  bool reversible = false;
  bool symbolic = false;               // all minors vanished symbolically
  std::optional<EvalPoint> witness;    // irreversible only
  std::pair<int, int> witness_minor{0, 0};
};
// h(x,-u) - h(x,u) proportional to u, tested through the 2x2 minors.
ReversibilityResult reversibility_check(const HomogeneousStructure& H, Sampler& sampler,
                                        int trials);

}  // namespace vg

#pragma once

#include <map>
#include <tuple>

#include "vg/expr.hpp"

namespace vg {

// System ddy^i = f^i(x, y, dy); f is stored 0-based, f[i-1] = f^i.
struct PathStructure {
  int n = 0;
  std::vector<Ex> f;

  const Ex& rhs(int i) const { return f[i - 1]; }  // 1-based
  VariableSpace space() const { return VariableSpace::inhomogeneous(n); }
};

// System x_tt^i + h^i(x, x_t) = 0 with h positively 2-homogeneous in x_t.
// h[i] = h^i for coordinates i = 0..n.
struct HomogeneousStructure {
  int n = 0;
  std::vector<Ex> h;

  VariableSpace space() const { return VariableSpace::homogeneous(n); }
};

// Symmetric connection coefficients; entries depend on positions x0..xn only.
struct ChristoffelTable {
  int n = 0;
  std::map<std::tuple<int, int, int>, Ex> entries;  // (i, j<=k) -> expression

  Ex entry(int i, int j, int k) const {
    auto it = entries.find({i, std::min(j, k), std::max(j, k)});
    return it == entries.end() ? number(0L) : it->second;
  }
  VariableSpace space() const { return VariableSpace::homogeneous(n); }
};

struct Lagrangian {
  int n = 0;
  Ex L;

  VariableSpace space() const { return VariableSpace::inhomogeneous(n); }
};

// First-order autonomous Lagrangian on the homogeneous chart, positively
// 1-homogeneous in velocities (Euler identity checked where required).
struct HomLagrangian {
  int n = 0;
  Ex L;

  VariableSpace space() const { return VariableSpace::homogeneous(n); }
};

// Second-order autonomous Lagrangian; may depend on accelerations a0..an.
struct SecondOrderLagrangian {
  int n = 0;
  Ex L;

  VariableSpace space() const { return VariableSpace::homogeneous(n); }
};

}  // namespace vg

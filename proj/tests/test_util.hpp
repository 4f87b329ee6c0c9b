#pragma once

#include <vector>

#include "vg/expr.hpp"
#include "vg/sampler.hpp"

namespace vgtest {

using namespace vg;

// Random sparse polynomial over `vars` with small rational coefficients.
inline Ex random_polynomial(Sampler& s, const std::vector<Var>& vars, int terms = 4,
                            int max_degree = 3) {
  std::vector<Ex> sum_terms;
  for (int t = 0; t < terms; ++t) {
    std::vector<Ex> factors;
    factors.push_back(number(s.rational(9, 5)));
    int deg = static_cast<int>(s.bits() % (max_degree + 1));
    for (int d = 0; d < deg; ++d) {
      Var v = vars[s.bits() % vars.size()];
      factors.push_back(symbol(v));
    }
    sum_terms.push_back(product(std::move(factors)));
  }
  return sum(std::move(sum_terms));
}

inline EvalPoint random_point(Sampler& s, const std::vector<Var>& vars) {
  EvalPoint p;
  for (Var v : vars) p.set(v, s.rational(9, 9));
  return p;
}

}  // namespace vgtest

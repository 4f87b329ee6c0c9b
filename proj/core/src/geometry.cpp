#include "vg/geometry.hpp"

namespace vg {

Ex total_derivative(const Ex& e, const PathStructure& P) {
  if (depends_on_class(e, VarClass::FiberAcc))
    throw std::invalid_argument("total derivative of an acceleration-dependent expression");
  std::vector<Ex> terms;
  terms.push_back(partial(e, Var{VarClass::Indep, 0}));
  for (int j = 1; j <= P.n; ++j) {
    terms.push_back(mul(symbol({VarClass::FiberVel, j}), partial(e, Var{VarClass::Fiber, j})));
    terms.push_back(mul(P.rhs(j), partial(e, Var{VarClass::FiberVel, j})));
  }
  return sum(std::move(terms));
}

OperatorField jacobian_J(const PathStructure& P) {
  OperatorField J(P.n);
  for (int j = 1; j <= P.n; ++j)
    for (int k = 1; k <= P.n; ++k)
      J.at(j, k) = partial(P.rhs(k), Var{VarClass::FiberVel, j});
  return J;
}

OperatorField tensor_A(const PathStructure& P) {
  OperatorField J = jacobian_J(P);
  OperatorField A(P.n);
  for (int i = 1; i <= P.n; ++i) {
    for (int j = 1; j <= P.n; ++j) {
      std::vector<Ex> terms;
      terms.push_back(total_derivative(J.at(i, j), P));
      terms.push_back(mul(number(-2L), partial(P.rhs(j), Var{VarClass::Fiber, i})));
      for (int k = 1; k <= P.n; ++k)
        terms.push_back(product({number(-1, 2), J.at(i, k), J.at(k, j)}));
      A.at(i, j) = sum(std::move(terms));
    }
  }
  return A;
}

HomogeneousStructure christoffel_to_homog(const ChristoffelTable& G) {
  HomogeneousStructure H{G.n, std::vector<Ex>(G.n + 1, number(0L))};
  for (int i = 0; i <= G.n; ++i) {
    std::vector<Ex> terms;
    for (int j = 0; j <= G.n; ++j)
      for (int k = 0; k <= G.n; ++k) {
        Ex g = G.entry(i, j, k);
        if (g->is_zero()) continue;
        terms.push_back(product({g, symbol({VarClass::HVel, j}), symbol({VarClass::HVel, k})}));
      }
    H.h[i] = sum(std::move(terms));
  }
  return H;
}

PathStructure homog_to_inhomog(const HomogeneousStructure& H) {
  const int n = H.n;
  std::map<Var, Ex> repl;
  repl[{VarClass::HPos, 0}] = symbol({VarClass::Indep, 0});
  repl[{VarClass::HVel, 0}] = number(1L);
  for (int j = 1; j <= n; ++j) {
    repl[{VarClass::HPos, j}] = symbol({VarClass::Fiber, j});
    repl[{VarClass::HVel, j}] = symbol({VarClass::FiberVel, j});
  }
  Ex h0 = substitute(H.h[0], repl);
  PathStructure P{n, {}};
  P.f.reserve(n);
  for (int i = 1; i <= n; ++i) {
    Ex hi = substitute(H.h[i], repl);
    P.f.push_back(add(neg(hi), mul(symbol({VarClass::FiberVel, i}), h0)));
  }
  return P;
}

std::optional<HomogeneityViolation> homogeneity_violation(const HomogeneousStructure& H) {
  Sampler sampler(0x2d0f5u);  // internal validation stream
  for (int j = 0; j <= H.n; ++j) {
    std::vector<Ex> terms;
    for (int i = 0; i <= H.n; ++i)
      terms.push_back(mul(symbol({VarClass::HVel, i}), partial(H.h[j], Var{VarClass::HVel, i})));
    terms.push_back(mul(number(-2L), H.h[j]));
    Ex euler = sum(std::move(terms));
    ZeroVerdict v = is_zero(euler, sampler, 50, 1e-9);
    if (v.kind == ZeroKind::Nonzero) {
      HomogeneityViolation out;
      out.component = j;
      out.witness = *v.witness;
      // Report the velocity-scaling discrepancy at the witness.
      EvalPoint scaled = out.witness;
      for (auto& [var, val] : scaled.values)
        if (var.cls == VarClass::HVel && std::holds_alternative<mpq_class>(val))
          val = mpq_class(2) * std::get<mpq_class>(val);
      double base = eval_double(H.h[j], out.witness);
      double twice = eval_double(H.h[j], scaled);
      out.message = "h" + std::to_string(j) + " is not 2-homogeneous: h(x,2u) = " +
                    std::to_string(twice) + " but 4 h(x,u) = " + std::to_string(4 * base);
      return out;
    }
  }
  return std::nullopt;
}

ReversibilityResult reversibility_check(const HomogeneousStructure& H, Sampler& sampler,
                                        int trials) {
  const int n = H.n;
  std::map<Var, Ex> flip;
  for (int i = 0; i <= n; ++i)
    flip[{VarClass::HVel, i}] = neg(symbol({VarClass::HVel, i}));

  std::vector<Ex> delta(n + 1);
  for (int i = 0; i <= n; ++i) delta[i] = sub(substitute(H.h[i], flip), H.h[i]);

  ReversibilityResult out;
  out.reversible = true;
  out.symbolic = true;
  for (int i = 0; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      Ex minor = sub(mul(delta[i], symbol({VarClass::HVel, j})),
                     mul(delta[j], symbol({VarClass::HVel, i})));
      ZeroVerdict v = is_zero(minor, sampler, trials, 1e-9);
      if (v.kind == ZeroKind::Nonzero) {
        out.reversible = false;
        out.symbolic = false;
        out.witness = v.witness;
        out.witness_minor = {i, j};
        return out;
      }
      if (v.kind != ZeroKind::SymbolicZero) out.symbolic = false;
    }
  }
  return out;
}

}  // namespace vg

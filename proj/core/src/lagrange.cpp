#include "vg/lagrange.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace vg {

namespace {

Var vx() { return {VarClass::Indep, 0}; }
Var vy(int i) { return {VarClass::Fiber, i}; }
Var vdy(int i) { return {VarClass::FiberVel, i}; }
Var vddy(int i) { return {VarClass::FiberAcc, i}; }
Var hx(int i) { return {VarClass::HPos, i}; }
Var hu(int i) { return {VarClass::HVel, i}; }
Var ha(int i) { return {VarClass::HAcc, i}; }

}  // namespace

HessianField hessian_phi(const Lagrangian& L) {
  const int n = L.n;
  HessianField out;
  out.n = n;
  out.phi.resize(n * n);
  std::vector<Ex> first(n + 1);
  for (int i = 1; i <= n; ++i) first[i] = partial(L.L, vdy(i));
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j) {
      Ex e = partial(first[i], vdy(j));
      out.phi[(i - 1) * n + (j - 1)] = e;
      out.phi[(j - 1) * n + (i - 1)] = e;
    }
  out.det = symbolic_det(out.phi, n);
  return out;
}

std::vector<Ex> euler_lagrange_residual(const Lagrangian& L, const PathStructure& P) {
  std::vector<Ex> out;
  out.reserve(L.n);
  for (int j = 1; j <= L.n; ++j)
    out.push_back(sub(partial(L.L, vy(j)), total_derivative(partial(L.L, vdy(j)), P)));
  return out;
}

EquivalenceReport verify_equivalence(const Lagrangian& L, const PathStructure& P,
                                     Sampler& sampler, int trials, double tol,
                                     const SampleDomain& domain) {
  EquivalenceReport out;
  bool residuals_zero = true;
  for (const Ex& r : euler_lagrange_residual(L, P)) {
    ZeroVerdict v = is_zero(r, sampler, trials, tol, domain);
    residuals_zero = residuals_zero && v.is_zero();
    out.residuals.push_back(std::move(v));
  }
  HessianField H = hessian_phi(L);
  out.det_phi = is_zero(H.det, sampler, trials, 1e-6, domain);
  out.pass = residuals_zero && out.det_phi.kind == ZeroKind::Nonzero;
  return out;
}

HomLagrangian homogenize(const Lagrangian& L) {
  std::map<Var, Ex> repl;
  repl[vx()] = symbol(hx(0));
  Ex u0_inv = power(symbol(hu(0)), mpq_class(-1));
  for (int j = 1; j <= L.n; ++j) {
    repl[vy(j)] = symbol(hx(j));
    repl[vdy(j)] = mul(symbol(hu(j)), u0_inv);
  }
  return HomLagrangian{L.n, mul(substitute(L.L, repl), symbol(hu(0)))};
}

namespace {

Ex euler_identity_residual(const HomLagrangian& L) {
  std::vector<Ex> terms;
  for (int i = 0; i <= L.n; ++i) terms.push_back(mul(symbol(hu(i)), partial(L.L, hu(i))));
  terms.push_back(neg(L.L));
  return sum(std::move(terms));
}

SampleDomain with_positive_u0(SampleDomain domain) {
  if (!domain.ranges.count(hu(0))) domain.restrict(hu(0), mpq_class(1, 10), mpq_class(2));
  return domain;
}

}  // namespace

Lagrangian dehomogenize(const HomLagrangian& L, Sampler& sampler) {
  if (depends_on_class(L.L, VarClass::HAcc))
    throw std::invalid_argument("first-order homogeneous Lagrangian expected");
  ZeroVerdict euler =
      is_zero(euler_identity_residual(L), sampler, 100, 1e-9, with_positive_u0({}));
  if (euler.kind == ZeroKind::Nonzero)
    throw HomogeneityError("Euler identity fails: the Lagrangian is not 1-homogeneous "
                           "in velocities (residual " +
                               std::to_string(euler.witness_value) + ")",
                           *euler.witness);
  std::map<Var, Ex> repl;
  repl[hx(0)] = symbol(vx());
  repl[hu(0)] = number(1L);
  for (int j = 1; j <= L.n; ++j) {
    repl[hx(j)] = symbol(vy(j));
    repl[hu(j)] = symbol(vdy(j));
  }
  return Lagrangian{L.n, substitute(L.L, repl)};
}

std::vector<DetIdentityPoint> hessian_det_identity_check(const Lagrangian& L,
                                                         const std::vector<EvalPoint>& points) {
  const int n = L.n;
  HomLagrangian hat = homogenize(L);
  Ex energy = mul(hat.L, hat.L);

  // Velocity Hessians, computed symbolically once.
  std::vector<Ex> hess_hat((n + 1) * (n + 1));
  std::vector<Ex> grad(n + 1);
  for (int i = 0; i <= n; ++i) grad[i] = partial(energy, hu(i));
  for (int i = 0; i <= n; ++i)
    for (int j = i; j <= n; ++j) {
      Ex e = partial(grad[i], hu(j));
      hess_hat[i * (n + 1) + j] = e;
      hess_hat[j * (n + 1) + i] = e;
    }
  HessianField H = hessian_phi(L);

  mpq_class scale_q;
  mpz_class two_pow;
  mpz_pow_ui(two_pow.get_mpz_t(), mpz_class(2).get_mpz_t(), n + 1);
  scale_q = mpq_class(two_pow);

  std::vector<DetIdentityPoint> out;
  for (const EvalPoint& p : points) {
    DetIdentityPoint r;
    r.point = p;

    EvalPoint lifted;
    lifted.set(hx(0), mpq_class(0));
    for (auto& [var, val] : p.values) {
      if (var.cls == VarClass::Indep) lifted.values[hx(0)] = val;
      if (var.cls == VarClass::Fiber) lifted.values[hx(var.idx)] = val;
      if (var.cls == VarClass::FiberVel) lifted.values[hu(var.idx)] = val;
    }
    lifted.set(hu(0), mpq_class(1));

    bool exact = true;
    auto eval_q = [&](const Ex& e, const EvalPoint& at) -> std::optional<mpq_class> {
      auto v = try_eval_exact(e, at);
      if (!v) exact = false;
      return v;
    };

    std::optional<mpq_class> Lq = eval_q(L.L, p);
    double Ld = Lq ? Lq->get_d() : eval_double(L.L, p);
    if ((Lq && *Lq == 0) || (!Lq && Ld == 0)) {
      r.skipped = true;
      out.push_back(std::move(r));
      continue;
    }

    if (exact && Lq) {
      QMat lhs_m(n + 1, n + 1), rhs_m(n, n);
      for (int i = 0; i <= n && exact; ++i)
        for (int j = 0; j <= n && exact; ++j) {
          auto v = eval_q(hess_hat[i * (n + 1) + j], lifted);
          if (v) lhs_m(i, j) = *v;
        }
      for (int i = 1; i <= n && exact; ++i)
        for (int j = 1; j <= n && exact; ++j) {
          auto v = eval_q(H.at(i, j), p);
          if (v) rhs_m(i - 1, j - 1) = *v;
        }
      if (exact) {
        mpq_class lhs = det(lhs_m);
        mpq_class Lpow;
        rational_pow_exact(*Lq, mpq_class(n + 2), Lpow);
        mpq_class rhs = scale_q * Lpow * det(rhs_m);
        r.exact = true;
        r.exact_equal = lhs == rhs;
        r.lhs = lhs.get_d();
        r.rhs = rhs.get_d();
        double denom = std::max({std::abs(r.lhs), std::abs(r.rhs), 1e-300});
        r.rel_err = std::abs(r.lhs - r.rhs) / denom;
        out.push_back(std::move(r));
        continue;
      }
    }

    Eigen::MatrixXd lhs_m(n + 1, n + 1), rhs_m(n, n);
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) lhs_m(i, j) = eval_double(hess_hat[i * (n + 1) + j], lifted);
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) rhs_m(i - 1, j - 1) = eval_double(H.at(i, j), p);
    r.lhs = lhs_m.determinant();
    r.rhs = std::pow(2.0, n + 1) * std::pow(Ld, n + 2) * rhs_m.determinant();
    double denom = std::max({std::abs(r.lhs), std::abs(r.rhs), 1e-300});
    r.rel_err = std::abs(r.lhs - r.rhs) / denom;
    out.push_back(std::move(r));
  }
  return out;
}

EulerDegeneracyReport euler_degeneracy_check(const HomLagrangian& L,
                                             const std::vector<EvalPoint>& points, double tol) {
  const int n = L.n;
  std::vector<Ex> hess((n + 1) * (n + 1));
  std::vector<Ex> grad(n + 1);
  for (int i = 0; i <= n; ++i) grad[i] = partial(L.L, hu(i));
  for (int i = 0; i <= n; ++i)
    for (int j = i; j <= n; ++j) {
      Ex e = partial(grad[i], hu(j));
      hess[i * (n + 1) + j] = e;
      hess[j * (n + 1) + i] = e;
    }

  EulerDegeneracyReport out;
  for (const EvalPoint& p : points) {
    Eigen::MatrixXd m(n + 1, n + 1);
    Eigen::VectorXd u(n + 1);
    for (int i = 0; i <= n; ++i) {
      u(i) = value_as_double(p.values.at(hu(i)));
      for (int j = 0; j <= n; ++j) m(i, j) = eval_double(hess[i * (n + 1) + j], p);
    }
    out.max_abs_det = std::max(out.max_abs_det, std::abs(m.determinant()));
    out.max_abs_hv = std::max(out.max_abs_hv, (m * u).cwiseAbs().maxCoeff());
    ++out.points;
  }
  out.pass = out.points > 0 && out.max_abs_det < tol && out.max_abs_hv < tol;
  return out;
}

ConvexityReport convexity_probe(const HomLagrangian& L, Sampler& sampler, int trials,
                                const SampleDomain& domain, double eig_tol) {
  const int n = L.n;
  Ex energy = mul(L.L, L.L);
  std::vector<Ex> hess((n + 1) * (n + 1));
  std::vector<Ex> grad(n + 1);
  for (int i = 0; i <= n; ++i) grad[i] = partial(energy, hu(i));
  for (int i = 0; i <= n; ++i)
    for (int j = i; j <= n; ++j) {
      Ex e = partial(grad[i], hu(j));
      hess[i * (n + 1) + j] = e;
      hess[j * (n + 1) + i] = e;
    }

  auto fv = free_vars(energy);
  std::vector<Var> vars(fv.begin(), fv.end());
  for (int i = 0; i <= n; ++i)
    if (!fv.count(hu(i))) vars.push_back(hu(i));  // probe the full velocity space
  auto guards = collect_guards(energy);
  SampleDomain dom = with_positive_u0(domain);

  ConvexityReport out;
  out.positive_definite_everywhere = true;
  for (int t = 0; t < trials; ++t) {
    EvalPoint p;
    try {
      p = sampler.point(vars, guards, dom);
    } catch (const SamplerExhaustedError&) {
      break;
    }
    Eigen::MatrixXd m(n + 1, n + 1);
    bool singular = false;
    for (int i = 0; i <= n && !singular; ++i)
      for (int j = 0; j <= n && !singular; ++j) {
        try {
          m(i, j) = eval_double(hess[i * (n + 1) + j], p);
        } catch (const SingularPointError&) {
          singular = true;
        }
      }
    if (singular) continue;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    SignatureSample s;
    s.point = p;
    double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    for (int i = 0; i <= n; ++i) {
      double ev = es.eigenvalues()(i);
      s.eigenvalues.push_back(ev);
      if (ev > eig_tol * scale)
        ++s.positive;
      else if (ev < -eig_tol * scale)
        ++s.negative;
      else
        ++s.zero;
    }
    if (s.negative > 0 || s.zero > 0) out.positive_definite_everywhere = false;
    if (s.positive > 0 && s.negative > 0 && !out.indefinite_witness)
      out.indefinite_witness = s;
    out.samples.push_back(std::move(s));
  }
  return out;
}

namespace {

// Expansion of an expression as a polynomial in the homogeneous velocities,
// with velocity-free expression coefficients. Fails on velocity dependence
// inside calls, fractional powers, or negative powers.
using VMono = std::vector<int>;  // exponents for u0..un
using VPoly = std::map<VMono, Ex>;

std::optional<VPoly> velocity_poly(const Ex& e, int n) {
  if (!depends_on_class(e, VarClass::HVel)) {
    if (e->is_zero()) return VPoly{};
    return VPoly{{VMono(n + 1, 0), e}};
  }
  switch (e->kind()) {
    case NodeKind::Symbol: {
      VMono m(n + 1, 0);
      m[e->symbol().idx] = 1;
      return VPoly{{m, number(1L)}};
    }
    case NodeKind::Sum: {
      VPoly acc;
      for (const auto& k : e->children()) {
        auto kp = velocity_poly(k, n);
        if (!kp) return std::nullopt;
        for (auto& [m, c] : *kp) {
          auto it = acc.find(m);
          if (it == acc.end())
            acc.emplace(m, c);
          else
            it->second = add(it->second, c);
        }
      }
      return acc;
    }
    case NodeKind::Product: {
      VPoly acc{{VMono(n + 1, 0), number(1L)}};
      for (const auto& k : e->children()) {
        auto kp = velocity_poly(k, n);
        if (!kp) return std::nullopt;
        VPoly next;
        for (auto& [ma, ca] : acc)
          for (auto& [mb, cb] : *kp) {
            VMono m = ma;
            for (int i = 0; i <= n; ++i) m[i] += mb[i];
            Ex c = mul(ca, cb);
            auto it = next.find(m);
            if (it == next.end())
              next.emplace(m, c);
            else
              it->second = add(it->second, c);
          }
        acc = std::move(next);
      }
      return acc;
    }
    case NodeKind::Power: {
      const mpq_class& ex = e->exponent();
      if (ex.get_den() != 1 || sgn(ex) < 0 || !ex.get_num().fits_sint_p()) return std::nullopt;
      int k = static_cast<int>(ex.get_num().get_si());
      auto bp = velocity_poly(e->base(), n);
      if (!bp) return std::nullopt;
      VPoly acc{{VMono(n + 1, 0), number(1L)}};
      for (int t = 0; t < k; ++t) {
        VPoly next;
        for (auto& [ma, ca] : acc)
          for (auto& [mb, cb] : *bp) {
            VMono m = ma;
            for (int i = 0; i <= n; ++i) m[i] += mb[i];
            Ex c = mul(ca, cb);
            auto it = next.find(m);
            if (it == next.end())
              next.emplace(m, c);
            else
              it->second = add(it->second, c);
          }
        acc = std::move(next);
      }
      return acc;
    }
    default:
      return std::nullopt;  // velocity dependence inside a call
  }
}

}  // namespace

ReduceResult reduce_second_order(const SecondOrderLagrangian& L2, Sampler& sampler) {
  const int n = L2.n;

  // Affine in accelerations: all second acceleration derivatives vanish.
  std::vector<Ex> lambda(n + 1);
  for (int s = 0; s <= n; ++s) {
    lambda[s] = partial(L2.L, ha(s));
    if (depends_on_class(lambda[s], VarClass::HAcc))
      throw NonAffineError("Lagrangian is not affine in accelerations (a" +
                           std::to_string(s) + " appears nonlinearly)");
  }

  // Closedness of the lambda one-form in the velocities.
  for (int s = 0; s <= n; ++s)
    for (int i = s + 1; i <= n; ++i) {
      Ex r = sub(partial(lambda[s], hu(i)), partial(lambda[i], hu(s)));
      ZeroVerdict v = is_zero(r, sampler, 100, 1e-9);
      if (!v.is_zero())
        throw ClosednessError(s, i,
                              "closedness fails for pair (" + std::to_string(s) + "," +
                                  std::to_string(i) + "): d(lambda_" + std::to_string(s) +
                                  ")/du" + std::to_string(i) + " != d(lambda_" +
                                  std::to_string(i) + ")/du" + std::to_string(s));
    }

  // F = L2 restricted to zero acceleration.
  std::map<Var, Ex> a_zero;
  for (int s = 0; s <= n; ++s) a_zero[ha(s)] = number(0L);
  Ex F = substitute(L2.L, a_zero);

  // Potential via the Poincare-lemma line integral, monomial by monomial:
  // each velocity-monomial of sum_s lambda_s u^s is divided by its degree.
  std::vector<Ex> p_terms;
  for (int s = 0; s <= n; ++s) p_terms.push_back(mul(lambda[s], symbol(hu(s))));
  Ex contracted = sum(std::move(p_terms));
  auto vp = velocity_poly(contracted, n);
  if (!vp)
    throw NonPolynomialError(
        "acceleration coefficients are not polynomial in the velocities");

  std::vector<Ex> potential_terms;
  for (auto& [m, c] : *vp) {
    int deg = 0;
    for (int i = 0; i <= n; ++i) deg += m[i];
    if (deg == 0) {
      if (!c->is_zero())
        throw NonPolynomialError("velocity-free term in the contracted one-form");
      continue;
    }
    std::vector<Ex> factors;
    factors.push_back(mul(number(1, deg), c));
    for (int i = 0; i <= n; ++i)
      if (m[i] != 0) factors.push_back(power(symbol(hu(i)), mpq_class(m[i])));
    potential_terms.push_back(product(std::move(factors)));
  }
  Ex potential = sum(std::move(potential_terms));

  // Reduced Lagrangian and exactness certificate.
  std::vector<Ex> drift_terms;
  for (int s = 0; s <= n; ++s)
    drift_terms.push_back(mul(symbol(hu(s)), partial(potential, hx(s))));
  Ex drift = sum(std::move(drift_terms));
  Ex reduced = sub(F, drift);

  std::vector<Ex> ddt_terms;
  ddt_terms.push_back(drift);
  for (int s = 0; s <= n; ++s)
    ddt_terms.push_back(mul(symbol(ha(s)), partial(potential, hu(s))));
  Ex total_dt = sum(std::move(ddt_terms));
  Ex cert_expr = sub(sub(L2.L, reduced), total_dt);

  ReduceResult out;
  out.n = n;
  out.reduced = reduced;
  out.potential = potential;
  out.certificate = is_zero(cert_expr, sampler, 100, 1e-9);
  return out;
}

ExtremalCheckResult numeric_extremal_check(const Lagrangian& L, const PathStructure& P,
                                           double x0, const std::vector<double>& y0,
                                           const std::vector<double>& dy0, double horizon,
                                           double rtol) {
  const int n = P.n;
  if (static_cast<int>(y0.size()) != n || static_cast<int>(dy0.size()) != n)
    throw std::invalid_argument("initial jet dimension mismatch");

  // Full Euler-Lagrange expressions with explicit acceleration terms.
  std::vector<Ex> full(n);
  for (int j = 1; j <= n; ++j) {
    Ex pj = partial(L.L, vdy(j));
    std::vector<Ex> ddx_terms;
    ddx_terms.push_back(partial(pj, vx()));
    for (int k = 1; k <= n; ++k) {
      ddx_terms.push_back(mul(symbol(vdy(k)), partial(pj, vy(k))));
      ddx_terms.push_back(mul(symbol(vddy(k)), partial(pj, vdy(k))));
    }
    full[j - 1] = sub(partial(L.L, vy(j)), sum(std::move(ddx_terms)));
  }

  // Guards of the structure and the Lagrangian, monitored along the flow.
  std::map<Ex, Guard::Kind, ExLess> merged;
  auto absorb = [&](const Ex& e) {
    for (auto& g : collect_guards(e)) {
      if (g.kind == Guard::Kind::Positive)
        merged[g.expr] = Guard::Kind::Positive;
      else
        merged.emplace(g.expr, Guard::Kind::NonZero);
    }
  };
  absorb(L.L);
  for (const Ex& fi : P.f) absorb(fi);
  std::vector<Guard> guards;
  for (auto& [e, k] : merged) guards.push_back({k, e});

  auto point_at = [&](double x, const std::vector<double>& state) {
    EvalPoint p;
    p.set(vx(), x);
    for (int i = 1; i <= n; ++i) {
      p.set(vy(i), state[i - 1]);
      p.set(vdy(i), state[n + i - 1]);
    }
    return p;
  };

  OdeRhs rhs = [&](double x, const std::vector<double>& state, std::vector<double>& d) {
    EvalPoint p = point_at(x, state);
    for (int i = 0; i < n; ++i) d[i] = state[n + i];
    for (int i = 1; i <= n; ++i) d[n + i - 1] = eval_double(P.rhs(i), p);
  };

  // NonZero guards also watch for sign changes between accepted steps, so a
  // transversal crossing of the singular locus cannot slip between samples.
  std::vector<double> prev_sign(guards.size(), 0.0);
  OdeGuard ode_guard = [&, prev_sign](double x, const std::vector<double>& state) mutable {
    EvalPoint p = point_at(x, state);
    for (size_t gi = 0; gi < guards.size(); ++gi) {
      const Guard& g = guards[gi];
      double v;
      try {
        v = eval_double(g.expr, p);
      } catch (const SingularPointError&) {
        return false;
      }
      if (g.kind == Guard::Kind::NonZero) {
        if (std::abs(v) < 1e-10) return false;
        double s = v > 0 ? 1.0 : -1.0;
        if (prev_sign[gi] != 0.0 && s != prev_sign[gi]) return false;
        prev_sign[gi] = s;
      } else if (v < 1e-10) {
        return false;
      }
    }
    return true;
  };

  std::vector<double> state(2 * n);
  for (int i = 0; i < n; ++i) state[i] = y0[i];
  for (int i = 0; i < n; ++i) state[n + i] = dy0[i];

  OdeSolution sol = integrate_dopri5(rhs, state, x0, x0 + horizon, rtol, 1e-12, ode_guard);

  ExtremalCheckResult out;
  out.singular_exit = sol.singular_exit;
  out.exit_time = sol.exit_time;
  out.accepted_steps = static_cast<int>(sol.times.size()) - 1;

  for (size_t s = 0; s < sol.times.size(); ++s) {
    EvalPoint p = point_at(sol.times[s], sol.states[s]);
    for (int i = 1; i <= n; ++i) p.set(vddy(i), eval_double(P.rhs(i), p));
    for (int j = 0; j < n; ++j)
      out.max_residual = std::max(out.max_residual, std::abs(eval_double(full[j], p)));
  }
  return out;
}

}  // namespace vg

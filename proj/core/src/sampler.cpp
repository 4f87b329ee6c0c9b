#include "vg/sampler.hpp"

#include <cmath>

#include "vg/poly.hpp"

namespace vg {

mpq_class Sampler::rational(int max_abs_num, int max_den) {
  std::uniform_int_distribution<int> num_dist(-max_abs_num, max_abs_num);
  std::uniform_int_distribution<int> den_dist(1, max_den);
  mpq_class q(num_dist(rng_), den_dist(rng_));
  q.canonicalize();
  return q;
}

mpq_class Sampler::rational_in(const mpq_class& lo, const mpq_class& hi, int max_den) {
  std::uniform_int_distribution<int> den_dist(1, max_den);
  for (int attempt = 0; attempt < 64; ++attempt) {
    int d = den_dist(rng_);
    mpz_class lo_num, hi_num;
    mpz_cdiv_q(lo_num.get_mpz_t(), mpq_class(lo * d).get_num().get_mpz_t(),
               mpq_class(lo * d).get_den().get_mpz_t());
    mpz_fdiv_q(hi_num.get_mpz_t(), mpq_class(hi * d).get_num().get_mpz_t(),
               mpq_class(hi * d).get_den().get_mpz_t());
    if (lo_num > hi_num) continue;  // no lattice point at this denominator
    mpz_class span = hi_num - lo_num + 1;
    std::uniform_int_distribution<unsigned long> pick(0, span.get_ui() - 1);
    mpq_class q(mpz_class(lo_num + pick(rng_)), mpz_class(d));
    q.canonicalize();
    return q;
  }
  throw SamplerExhaustedError("no rational lattice point in requested range");
}

bool guards_satisfied(const std::vector<Guard>& guards, const EvalPoint& p) {
  for (const auto& g : guards) {
    try {
      auto v = try_eval_exact(g.expr, p);
      if (v) {
        if (g.kind == Guard::Kind::NonZero && *v == 0) return false;
        if (g.kind == Guard::Kind::Positive && sgn(*v) <= 0) return false;
      } else {
        double d = eval_double(g.expr, p);
        if (g.kind == Guard::Kind::NonZero && std::abs(d) < 1e-12) return false;
        if (g.kind == Guard::Kind::Positive && d <= 1e-12) return false;
      }
    } catch (const SingularPointError&) {
      return false;
    }
  }
  return true;
}

EvalPoint Sampler::point(const std::vector<Var>& vars, const std::vector<Guard>& guards,
                         const SampleDomain& domain, int max_attempts) {
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    EvalPoint p;
    for (Var v : vars) {
      auto it = domain.ranges.find(v);
      if (it != domain.ranges.end())
        p.set(v, rational_in(it->second.first, it->second.second));
      else
        p.set(v, rational());
    }
    if (guards_satisfied(guards, p)) return p;
  }
  throw SamplerExhaustedError("could not sample an admissible point");
}

std::string to_string(const ZeroVerdict& v) {
  switch (v.kind) {
    case ZeroKind::SymbolicZero:
      return "SymbolicZero";
    case ZeroKind::NumericZero:
      return "NumericZero(" + std::to_string(v.trials) + " trials)";
    case ZeroKind::Nonzero: {
      std::string out = "Nonzero(|value| = " + std::to_string(std::abs(v.witness_value));
      if (v.witness) {
        out += " at";
        for (const auto& [var, val] : v.witness->values) {
          out += " " + name(var) + "=";
          out += std::holds_alternative<mpq_class>(val)
                     ? to_string(std::get<mpq_class>(val))
                     : std::to_string(std::get<double>(val));
        }
      }
      return out + ")";
    }
  }
  return "?";
}

ZeroVerdict is_zero(const Ex& e, Sampler& sampler, int trials, double tol,
                    const SampleDomain& domain) {
  if (e->is_zero()) return {ZeroKind::SymbolicZero};

  const auto fv = free_vars(e);
  const std::vector<Var> vars(fv.begin(), fv.end());
  const auto guards = collect_guards(e);

  if (auto rf = rational_form(e)) {
    if (rf->num.is_zero()) return {ZeroKind::SymbolicZero};
    // Polynomially nonzero: exhibit a witness by exact sampling.
    ZeroVerdict best{ZeroKind::NumericZero, 0};
    for (int t = 0; t < std::max(trials, 1); ++t) {
      EvalPoint p;
      try {
        p = sampler.point(vars, guards, domain);
      } catch (const SamplerExhaustedError&) {
        if (best.kind == ZeroKind::Nonzero) return best;
        throw;
      }
      ++best.trials;
      mpq_class v;
      try {
        auto ev = try_eval_exact(e, p);
        if (!ev) continue;  // should not happen for rational forms
        v = *ev;
      } catch (const SingularPointError&) {
        continue;
      }
      if (v != 0) {
        double mag = std::abs(v.get_d());
        if (mag >= tol) return {ZeroKind::Nonzero, best.trials, p, v.get_d()};
        if (best.kind != ZeroKind::Nonzero || mag > std::abs(best.witness_value))
          best = {ZeroKind::Nonzero, best.trials, p, v.get_d()};
      }
    }
    return best;  // exact nonzero witness below tol, or (improbably) all zeros
  }

  int inspected = 0;
  int attempts = 0;
  const int max_attempts = 10 * std::max(trials, 1);
  while (inspected < std::max(trials, 1) && attempts < max_attempts) {
    ++attempts;
    EvalPoint p = sampler.point(vars, guards, domain);
    double v;
    try {
      v = eval_double(e, p);
    } catch (const SingularPointError&) {
      continue;  // guard granularity missed this point; resample
    }
    ++inspected;
    if (std::abs(v) >= tol) return {ZeroKind::Nonzero, inspected, p, v};
  }
  if (inspected == 0) throw SamplerExhaustedError("all sampled points were singular");
  return {ZeroKind::NumericZero, inspected};
}

}  // namespace vg

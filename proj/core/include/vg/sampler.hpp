#pragma once

#include <cstdint>
#include <random>

#include "vg/expr.hpp"

namespace vg {

struct SamplerExhaustedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Optional per-variable ranges for sampling; variables without a range use the
// default lattice of rationals with |numerator| <= 20, denominator <= 20.
struct SampleDomain {
  std::map<Var, std::pair<mpq_class, mpq_class>> ranges;

  SampleDomain& restrict(Var v, mpq_class lo, mpq_class hi) {
    ranges[v] = {std::move(lo), std::move(hi)};
    return *this;
  }
};

// Deterministic source of rational sample points. Same seed, same stream.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : seed_(seed), rng_(seed) {}

  std::uint64_t seed() const { return seed_; }

  mpq_class rational(int max_abs_num = 20, int max_den = 20);
  mpq_class rational_in(const mpq_class& lo, const mpq_class& hi, int max_den = 20);
  std::uint64_t bits() { return rng_(); }

  // Rejection-samples an assignment of `vars` admissible for `guards`.
  EvalPoint point(const std::vector<Var>& vars, const std::vector<Guard>& guards,
                  const SampleDomain& domain = {}, int max_attempts = 2000);

 private:
  std::uint64_t seed_;
  std::mt19937_64 rng_;
};

bool guards_satisfied(const std::vector<Guard>& guards, const EvalPoint& p);

enum class ZeroKind { SymbolicZero, NumericZero, Nonzero };

struct ZeroVerdict {
  ZeroKind kind;
  int trials = 0;                   // sampled points inspected (numeric paths)
  std::optional<EvalPoint> witness; // Nonzero only
  double witness_value = 0.0;

  bool is_zero() const { return kind != ZeroKind::Nonzero; }
};

std::string to_string(const ZeroVerdict& v);

// Zero test. Decides symbolically for rational-function expressions (canonical
// zero, else denominator-cleared polynomial normal form); falls back to seeded
// rational sampling with tolerance `tol` for transcendental expressions.
ZeroVerdict is_zero(const Ex& e, Sampler& sampler, int trials = 100, double tol = 1e-9,
                    const SampleDomain& domain = {});

}  // namespace vg

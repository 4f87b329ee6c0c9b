#pragma once

#include "vg/douglas.hpp"
#include "vg/ode.hpp"
#include "vg/structures.hpp"

namespace vg {

// Symmetric velocity Hessian phi_ij = d2L / d(dy^i) d(dy^j) with its symbolic
// determinant.
struct HessianField {
  int n = 0;
  std::vector<Ex> phi;  // row-major n x n
  Ex det;

  const Ex& at(int i, int j) const { return phi[(i - 1) * n + (j - 1)]; }
};

HessianField hessian_phi(const Lagrangian& L);

// dL/dy^j - d/dx dL/d(dy^j), accelerations already substituted through the
// structure (the residuals live on the (x, y, dy) chart).
std::vector<Ex> euler_lagrange_residual(const Lagrangian& L, const PathStructure& P);

struct EquivalenceReport {
  std::vector<ZeroVerdict> residuals;
  ZeroVerdict det_phi;  // must be Nonzero for a pass
  bool pass = false;
};
EquivalenceReport verify_equivalence(const Lagrangian& L, const PathStructure& P,
                                     Sampler& sampler, int trials = 100, double tol = 1e-9,
                                     const SampleDomain& domain = {});

// L-hat(x, u) = L(x0, x^j, u^j/u^0) * u^0 on the chart u^0 > 0.
HomLagrangian homogenize(const Lagrangian& L);

struct HomogeneityError : std::runtime_error {
  HomogeneityError(const std::string& msg, EvalPoint w)
      : std::runtime_error(msg), witness(std::move(w)) {}
  EvalPoint witness;
};
// Substitution u^0 = 1, u^j = dy^j; rejects inputs failing the Euler identity.
Lagrangian dehomogenize(const HomLagrangian& L, Sampler& sampler);

struct DetIdentityPoint {
  EvalPoint point;
  double lhs = 0, rhs = 0;     // det Hess(L-hat^2) vs 2^(n+1) L^(n+2) det Hess(L)
  double rel_err = 0;
  bool exact = false;          // both sides compared in rational arithmetic
  bool exact_equal = false;
  bool skipped = false;        // L == 0 at the point; identity degenerate
};
std::vector<DetIdentityPoint> hessian_det_identity_check(const Lagrangian& L,
                                                         const std::vector<EvalPoint>& points);

struct EulerDegeneracyReport {
  bool pass = false;
  double max_abs_det = 0;   // |det Hess_u(L-hat)| over the points
  double max_abs_hv = 0;    // |Hess(L-hat) . u| over the points
  int points = 0;
};
EulerDegeneracyReport euler_degeneracy_check(const HomLagrangian& L,
                                             const std::vector<EvalPoint>& points,
                                             double tol = 1e-8);

struct SignatureSample {
  EvalPoint point;
  std::vector<double> eigenvalues;  // of Hess_u(L-hat^2), ascending
  int positive = 0, negative = 0, zero = 0;
};
struct ConvexityReport {
  std::vector<SignatureSample> samples;
  std::optional<SignatureSample> indefinite_witness;
  bool positive_definite_everywhere = false;
};
ConvexityReport convexity_probe(const HomLagrangian& L, Sampler& sampler, int trials,
                                const SampleDomain& domain = {}, double eig_tol = 1e-9);

struct ClosednessError : std::runtime_error {
  ClosednessError(int s, int i, std::string msg)
      : std::runtime_error(std::move(msg)), pair{s, i} {}
  std::pair<int, int> pair;
};
struct NonAffineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonPolynomialError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ReduceResult {
  int n = 0;
  Ex reduced;          // first-order Lagrangian F - sum_s u^s dPotential/dx^s
  Ex potential;        // Potential(x, u) with d(potential)/du^s = lambda_s
  ZeroVerdict certificate;  // L2 - reduced - d(potential)/dt == 0
};
// Order reduction for Lagrangians affine in accelerations with closed,
// velocity-polynomial acceleration coefficients.
ReduceResult reduce_second_order(const SecondOrderLagrangian& L2, Sampler& sampler);

struct ExtremalCheckResult {
  double max_residual = 0;
  bool singular_exit = false;
  double exit_time = 0;
  int accepted_steps = 0;
};
// Integrates ddy = f from the initial jet and evaluates the full
// Euler-Lagrange expression (acceleration terms included, with ddy from f)
// along the trajectory.
ExtremalCheckResult numeric_extremal_check(const Lagrangian& L, const PathStructure& P,
                                           double x0, const std::vector<double>& y0,
                                           const std::vector<double>& dy0, double horizon,
                                           double rtol = 1e-10);

}  // namespace vg

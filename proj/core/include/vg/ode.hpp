#pragma once

#include <functional>
#include <vector>

namespace vg {

// Right-hand side of y' = f(t, y); writes into dy.
using OdeRhs = std::function<void(double, const std::vector<double>&, std::vector<double>&)>;
// Admissibility probe; returning false stops the integration (singular exit).
using OdeGuard = std::function<bool(double, const std::vector<double>&)>;

struct OdeSolution {
  std::vector<double> times;
  std::vector<std::vector<double>> states;  // one state per accepted step
  bool singular_exit = false;
  double exit_time = 0.0;
};

// Dormand-Prince 5(4) with PI step-size control.
OdeSolution integrate_dopri5(const OdeRhs& rhs, std::vector<double> y0, double t0, double t1,
                             double rtol = 1e-10, double atol = 1e-12,
                             const OdeGuard& guard = {});

}  // namespace vg

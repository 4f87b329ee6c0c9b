#include "vg/ode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vg {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b (5th order) minus bhat (4th order), for the embedded error estimate.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

OdeSolution integrate_dopri5(const OdeRhs& rhs, std::vector<double> y, double t0, double t1,
                             double rtol, double atol, const OdeGuard& guard) {
  const size_t dim = y.size();
  OdeSolution out;
  out.times.push_back(t0);
  out.states.push_back(y);

  if (guard && !guard(t0, y)) {
    out.singular_exit = true;
    out.exit_time = t0;
    return out;
  }

  std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim);
  std::vector<double> ytmp(dim), ynew(dim);

  double t = t0;
  double h = (t1 - t0) / 100.0;
  const double hmin = std::abs(t1 - t0) * 1e-14;
  rhs(t, y, k1);

  int rejected_in_a_row = 0;
  while (t < t1) {
    h = std::min(h, t1 - t);
    if (h < hmin) throw std::runtime_error("step size underflow in dopri5");

    for (size_t i = 0; i < dim; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    rhs(t + c2 * h, ytmp, k2);
    for (size_t i = 0; i < dim; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * h, ytmp, k3);
    for (size_t i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * h, ytmp, k4);
    for (size_t i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * h, ytmp, k5);
    for (size_t i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    rhs(t + h, ytmp, k6);
    for (size_t i = 0; i < dim; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    rhs(t + h, ynew, k7);  // FSAL

    double err = 0;
    for (size_t i = 0; i < dim; ++i) {
      double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                       e7 * k7[i]);
      double scale = atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err += (ei / scale) * (ei / scale);
    }
    err = std::sqrt(err / static_cast<double>(dim));

    if (err <= 1.0) {
      t += h;
      y = ynew;
      k1 = k7;
      if (guard && !guard(t, y)) {
        out.singular_exit = true;
        out.exit_time = t;
        return out;
      }
      out.times.push_back(t);
      out.states.push_back(y);
      rejected_in_a_row = 0;
    } else {
      ++rejected_in_a_row;
      if (rejected_in_a_row > 50) throw std::runtime_error("dopri5 cannot reach tolerance");
    }
    double factor = 0.9 * std::pow(std::max(err, 1e-16), -0.2);
    h *= std::clamp(factor, 0.2, 5.0);
  }
  return out;
}

}  // namespace vg

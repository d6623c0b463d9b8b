#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>

#include "slabqio/errors.hpp"

namespace slabqio {

// Two complex unknowns: the field and its flux variable.
using OdeState = std::array<std::complex<double>, 2>;

struct IntegratorOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  double initial_step = 0.0;  // 0 picks |x1 - x0| / 100
  std::size_t max_steps = 5'000'000;
};

struct IntegratorStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

namespace detail {

inline OdeState axpy(const OdeState& y, double h, std::initializer_list<std::pair<double, const OdeState*>> terms) {
  OdeState out = y;
  for (const auto& [coef, k] : terms) {
    if (coef == 0.0) continue;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += h * coef * (*k)[i];
  }
  return out;
}

}  // namespace detail

// Adaptive Dormand-Prince 5(4) with first-same-as-last reuse. Integrates from
// x0 to x1 in either direction. The observer, if given, sees every accepted
// point (x, y).
template <class Rhs, class Observer>
OdeState integrate_adaptive(Rhs&& rhs, double x0, double x1, OdeState y, const IntegratorOptions& opt,
                            Observer&& observe, IntegratorStats* stats = nullptr) {
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
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const double span = x1 - x0;
  if (span == 0.0) return y;
  const double dir = span > 0.0 ? 1.0 : -1.0;
  double h = opt.initial_step > 0.0 ? opt.initial_step : std::abs(span) / 100.0;
  h = std::min(h, std::abs(span)) * dir;

  double x = x0;
  OdeState k1 = rhs(x, y);
  std::size_t steps = 0;
  IntegratorStats local;
  while (dir * (x1 - x) > 0.0) {
    if (++steps > opt.max_steps) {
      throw Error(ErrorCode::StiffnessFailure,
                  "step budget exhausted at x = " + std::to_string(x));
    }
    bool last = false;
    if (dir * (x + h - x1) >= 0.0) {
      h = x1 - x;
      last = true;
    }

    const OdeState k2 = rhs(x + c2 * h, detail::axpy(y, h, {{a21, &k1}}));
    const OdeState k3 = rhs(x + c3 * h, detail::axpy(y, h, {{a31, &k1}, {a32, &k2}}));
    const OdeState k4 = rhs(x + c4 * h, detail::axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const OdeState k5 =
        rhs(x + c5 * h, detail::axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const OdeState k6 = rhs(
        x + h, detail::axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const OdeState y_new =
        detail::axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const OdeState k7 = rhs(x + h, y_new);

    double err = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const std::complex<double> e =
          h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double scale =
          opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err = std::max(err, std::abs(e) / scale);
    }
    if (!std::isfinite(err)) {
      throw Error(ErrorCode::StiffnessFailure, "non-finite error estimate at x = " + std::to_string(x));
    }

    if (err <= 1.0) {
      x = last ? x1 : x + h;
      y = y_new;
      k1 = k7;
      ++local.accepted;
      observe(x, y);
      if (last) break;
    } else {
      ++local.rejected;
    }
    const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h *= err <= 1.0 ? factor : std::min(factor, 1.0);
    if (err > 1.0 && std::abs(h) < 1e-14 * std::max(1.0, std::abs(x))) {
      throw Error(ErrorCode::StiffnessFailure,
                  "step size underflow at x = " + std::to_string(x));
    }
  }
  if (stats) {
    stats->accepted += local.accepted;
    stats->rejected += local.rejected;
  }
  return y;
}

template <class Rhs>
OdeState integrate_adaptive(Rhs&& rhs, double x0, double x1, OdeState y,
                            const IntegratorOptions& opt = {}, IntegratorStats* stats = nullptr) {
  return integrate_adaptive(std::forward<Rhs>(rhs), x0, x1, y, opt, [](double, const OdeState&) {},
                            stats);
}

}  // namespace slabqio

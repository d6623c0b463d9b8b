#pragma once

namespace slabqio::detail {

// Sign-change bisection on (lo, hi), run until the midpoint is no longer
// representable between the endpoints. Neither endpoint is evaluated, so they
// may sit on poles.
template <class F>
double bisect_sign(F&& f, double lo, double hi, bool positive_below) {
  for (int iter = 0; iter < 2000; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (!(mid > lo && mid < hi)) break;
    const bool positive = f(mid) > 0.0;
    if (positive == positive_below) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo + 0.5 * (hi - lo);
}

template <class F>
double bisect_decreasing(F&& f, double lo, double hi) {
  return bisect_sign(f, lo, hi, true);
}

template <class F>
double bisect_increasing(F&& f, double lo, double hi) {
  return bisect_sign(f, lo, hi, false);
}

}  // namespace slabqio::detail

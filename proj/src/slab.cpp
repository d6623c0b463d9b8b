#include "slabqio/slab.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "slabqio/errors.hpp"

namespace slabqio {

namespace {

constexpr complex kI(0.0, 1.0);

complex sinc(complex z) {
  if (std::abs(z) < 1e-4) {
    const complex z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

// Region-II combinations (n+1) e^{i kappa (x+L)} and (n-1) e^{i kappa (3L-x)}, in
// scaled coordinates. Both exponents have non-negative imaginary part for
// -L <= x <= L, so nothing overflows deep in an absorption band.
struct InteriorTerms {
  complex forward;
  complex backward;
};

InteriorTerms interior_terms(complex n, complex kappa_s, double xs) {
  return {(n + 1.0) * std::exp(kI * kappa_s * (xs + 1.0)),
          (n - 1.0) * std::exp(kI * kappa_s * (3.0 - xs))};
}

}  // namespace

const char* region_name(Region region) noexcept {
  switch (region) {
    case Region::I: return "I";
    case Region::II: return "II";
    case Region::III: return "III";
  }
  return "?";
}

Region region_of(const Medium& medium, double x) noexcept {
  const double L = medium.half_length();
  if (x < -L) return Region::I;
  if (x > L) return Region::III;
  return Region::II;
}

ScatterSolution scatter_coefficients(const Medium& medium, double omega) {
  const IndexValue index = refractive_index(medium, omega);
  if (index.band_kind == BandKind::PoleDivergent) {
    throw Error(ErrorCode::PoleDivergentFrequency,
                "omega " + std::to_string(omega) + " sits on a band-edge pole of n");
  }
  const complex n = index.n;
  const double ks = medium.to_scaled(omega);  // k L
  const complex kappa_s = n * ks;             // kappa L
  const complex z = 2.0 * kappa_s;
  const complex eiz = std::exp(kI * z);
  const complex w = eiz * eiz;

  // S = e^{iz} sin(z) / n, continued smoothly through n = 0.
  const complex S = std::abs(z) < 1.0 ? eiz * 2.0 * ks * sinc(z) : (w - 1.0) / (2.0 * kI * n);
  const complex Q = (1.0 + w) - kI * (n * n + 1.0) * S;
  const complex phase = std::exp(-2.0 * kI * ks);
  const complex half_phase = std::exp(-kI * ks);

  ScatterSolution sol;
  sol.omega = omega;
  sol.k = omega / medium.speed_of_light();
  sol.n0 = n;
  sol.kappa = n * sol.k;
  sol.band_kind = index.band_kind;
  sol.scaled_denominator = Q;
  sol.T = 2.0 * eiz * phase / Q;
  sol.R = -kI * (n * n - 1.0) * S * phase / Q;
  sol.B_r_left = (n + 1.0) * std::exp(kI * kappa_s) * half_phase / Q;
  sol.B_l_left = -(n - 1.0) * std::exp(3.0 * kI * kappa_s) * half_phase / Q;
  sol.B_r_right = sol.B_l_left;
  sol.B_l_right = sol.B_r_left;
  sol.D = n * Q / eiz;
  return sol;
}

ReflectionTransmission resonance_coefficients(double omega, double half_length_L, double c) {
  if (!(omega > 0.0) || !(half_length_L > 0.0) || !(c > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "resonance_coefficients needs positive omega, L, c");
  }
  const double a = omega * half_length_L / c;
  const complex phase = std::exp(-2.0 * kI * a);
  const complex denom(1.0, -a);
  return {kI * a * phase / denom, phase / denom};
}

ModeFunctionSample mode_function(const Medium& medium, double omega, Side side, double x) {
  return mode_function(medium, scatter_coefficients(medium, omega), side, x);
}

ModeFunctionSample mode_function(const Medium& medium, const ScatterSolution& sol, Side side,
                                 double x) {
  const double L = medium.half_length();
  // u_r(x) = u_l(-x): evaluate the left solution at the mirrored point.
  const double xm = side == Side::Left ? x : -x;
  const double xs = xm / L;
  const double ks = medium.to_scaled(sol.omega);
  const complex n = sol.n0;
  const complex kappa_s = n * ks;

  complex value;
  complex dvalue_s;  // d/dxs
  Region region = Region::II;
  if (xs < -1.0) {
    region = Region::I;
    const complex inc = std::exp(kI * ks * xs);
    const complex ref = sol.R * std::exp(-kI * ks * xs);
    value = inc + ref;
    dvalue_s = kI * ks * (inc - ref);
  } else if (xs > 1.0) {
    region = Region::III;
    value = sol.T * std::exp(kI * ks * xs);
    dvalue_s = kI * ks * value;
  } else {
    const auto [fwd, bwd] = interior_terms(n, kappa_s, xs);
    const complex scale = std::exp(-kI * ks) / sol.scaled_denominator;
    value = (fwd - bwd) * scale;
    dvalue_s = kI * kappa_s * (fwd + bwd) * scale;
  }

  ModeFunctionSample out;
  out.x = x;
  out.value = value;
  out.derivative = dvalue_s / L;
  if (side == Side::Left) {
    out.region = region;
  } else {
    out.derivative = -out.derivative;
    out.region = region == Region::I ? Region::III : region == Region::III ? Region::I : Region::II;
  }
  return out;
}

GreensValue greens_function(const Medium& medium, double omega, double x, double x_src) {
  return greens_function(medium, scatter_coefficients(medium, omega), x, x_src);
}

GreensValue greens_function(const Medium& medium, const ScatterSolution& sol, double x,
                            double x_src) {
  const double hi = std::max(x, x_src);
  const double lo = std::min(x, x_src);
  const complex ul = mode_function(medium, sol, Side::Left, hi).value;
  const complex ur = mode_function(medium, sol, Side::Right, lo).value;
  const complex norm = 2.0 * kI * sol.omega * medium.speed_of_light() * sol.T;
  return {x, x_src, ul * ur / norm};
}

complex greens_derivative(const Medium& medium, const ScatterSolution& sol, double x,
                          double x_src) {
  if (x == x_src) {
    throw Error(ErrorCode::InvalidArgument, "dG/dx is discontinuous at the source point");
  }
  const complex norm = 2.0 * kI * sol.omega * medium.speed_of_light() * sol.T;
  if (x > x_src) {
    return mode_function(medium, sol, Side::Left, x).derivative *
           mode_function(medium, sol, Side::Right, x_src).value / norm;
  }
  return mode_function(medium, sol, Side::Right, x).derivative *
         mode_function(medium, sol, Side::Left, x_src).value / norm;
}

double flux_coefficient(const Medium& medium, const ScatterSolution& sol, double x) {
  const double c2 = medium.speed_of_light() * medium.speed_of_light();
  if (region_of(medium, x) != Region::II) return c2;
  if (sol.band_kind == BandKind::ResonanceZero) return std::numeric_limits<double>::infinity();
  // 1/n0^2 is the (real) bracket.
  return c2 * (1.0 / (sol.n0 * sol.n0)).real();
}

}  // namespace slabqio

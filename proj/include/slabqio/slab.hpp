#pragma once

#include "slabqio/medium.hpp"

namespace slabqio {

enum class Side { Left, Right };
enum class Region { I, II, III };

const char* region_name(Region region) noexcept;

// Uniform slab on [-L, L] at one frequency, with the phase convention in which
// R and T carry the factor exp(-2ikL).
struct ScatterSolution {
  double omega = 0.0;
  double k = 0.0;  // omega / c
  complex n0;
  complex kappa;   // n0 * k
  complex R;
  complex T;
  complex B_r_left, B_l_left;    // interior amplitudes, incidence from the left
  complex B_r_right, B_l_right;  // incidence from the right
  complex D;  // 2 n0 cos(2 kappa L) - i (n0^2 + 1) sin(2 kappa L); may overflow for thick gaps
  // D * exp(2i kappa L) / n0, which stays bounded everywhere including n0 = 0.
  complex scaled_denominator;
  BandKind band_kind = BandKind::Transmission;
};

struct ModeFunctionSample {
  double x = 0.0;
  complex value;
  complex derivative;
  Region region = Region::II;
};

struct GreensValue {
  double x = 0.0;
  double x_src = 0.0;
  complex value;
};

struct ReflectionTransmission {
  complex R;
  complex T;
};

ScatterSolution scatter_coefficients(const Medium& medium, double omega);

// n0 = 0 closed forms, valid at every bare resonance.
ReflectionTransmission resonance_coefficients(double omega, double half_length_L, double c = 1.0);

ModeFunctionSample mode_function(const Medium& medium, double omega, Side side, double x);
ModeFunctionSample mode_function(const Medium& medium, const ScatterSolution& sol, Side side,
                                 double x);

// Outgoing-wave Green's function of d/dx (c^2/n^2 d/dx) + omega^2.
GreensValue greens_function(const Medium& medium, double omega, double x, double x_src);
GreensValue greens_function(const Medium& medium, const ScatterSolution& sol, double x,
                            double x_src);

// dG/dx at x != x_src.
complex greens_derivative(const Medium& medium, const ScatterSolution& sol, double x,
                          double x_src);

// c^2 / n^2(x) for the uniform slab; +inf inside at a resonance.
double flux_coefficient(const Medium& medium, const ScatterSolution& sol, double x);

Region region_of(const Medium& medium, double x) noexcept;

}  // namespace slabqio

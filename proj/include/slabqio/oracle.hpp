#pragma once

#include <functional>
#include <vector>

#include "slabqio/integrator.hpp"
#include "slabqio/medium.hpp"
#include "slabqio/slab.hpp"

namespace slabqio {

enum class RampShape { Linear, Smoothstep };

// Interior index used in place of n = 0 for resonance profiles; the flux form
// of the field equation is singular at exactly zero.
inline constexpr double kRegularizedZeroIndex = 1e-6;

// Slab whose faces are smeared over a width delta outside [-L, L]:
// n = 1 for |x| >= L + delta, n = n0 for |x| <= L. On the ramps n^2 moves
// monotonically from n0^2 to 1, so the field equation keeps real coefficients
// in both band kinds. sqrt(g(x)) uses the same ramp, normalized to 1 inside.
class SmoothedProfile {
 public:
  SmoothedProfile(complex n0, double half_length_L, double delta,
                  RampShape shape = RampShape::Linear, double c = 1.0);

  // Profile for the slab of `medium` at frequency omega.
  static SmoothedProfile for_medium(const Medium& medium, double omega, double delta,
                                    RampShape shape = RampShape::Linear);
  // n -> 0 interior, as at a bare resonance.
  static SmoothedProfile at_resonance(double half_length_L, double delta,
                                      RampShape shape = RampShape::Linear, double c = 1.0);

  complex n0() const noexcept { return n0_; }
  double half_length() const noexcept { return L_; }
  double delta() const noexcept { return delta_; }
  RampShape shape() const noexcept { return shape_; }
  double speed_of_light() const noexcept { return c_; }

  // Ramp fraction in [0, 1]: 0 on the slab, 1 in vacuum.
  double ramp(double x) const noexcept;
  complex n_squared(double x) const noexcept;
  complex n_of_x(double x) const noexcept;
  double sqrt_g_of_x(double x) const noexcept;

 private:
  complex n0_;
  complex n0_sq_;
  double L_;
  double delta_;
  RampShape shape_;
  double c_;
};

// Characteristic-matrix composition for a homogeneous layer of index n0 in
// vacuum, in the same phase convention as scatter_coefficients.
ReflectionTransmission transfer_matrix_rt(complex n0, double k, double half_length_L);

struct FieldSample {
  double x = 0.0;
  complex field;  // Lambda
  complex flux;   // Psi = (c^2/n^2) dLambda/dx
};

struct OdeScatterResult {
  complex R;
  complex T;
  IntegratorStats stats;
  std::vector<FieldSample> trajectory;  // filled on request, ordered from +x to -x
};

// Shoots the outgoing solution exp(ikx) from x = L + delta back to -L - delta
// and reads R, T off the left asymptote.
OdeScatterResult ode_scatter(const SmoothedProfile& profile, double omega,
                             const IntegratorOptions& options = {}, bool keep_trajectory = false);

struct SourceIntegralResult {
  complex integral;  // I(delta) = int u_r dF/dx dx over (-L - delta, L + delta)
  complex ur_minus_L;
  complex ur_plus_L;
  std::size_t grid_points = 0;
};

// Minimum number of grid points across the source support.
inline constexpr std::size_t kSourceGridPoints = 10000;

SourceIntegralResult source_integral_check(const SmoothedProfile& profile, double resonance_omega,
                                           const IntegratorOptions& options = {});

// Same quadrature with a caller-supplied source profile; used to check that a
// flat source gives zero.
SourceIntegralResult source_integral_check(const SmoothedProfile& profile, double resonance_omega,
                                           const std::function<double(double)>& source,
                                           const IntegratorOptions& options = {});

}  // namespace slabqio

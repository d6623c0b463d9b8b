#include "slabqio/oracle.hpp"

#include <array>
#include <cmath>
#include <string>

#include "slabqio/errors.hpp"

namespace slabqio {

namespace {

constexpr complex kI(0.0, 1.0);

using Mat2 = std::array<std::array<complex, 2>, 2>;

Mat2 mul(const Mat2& a, const Mat2& b) {
  Mat2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return r;
}

Mat2 inverse(const Mat2& m) {
  const complex det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  return {{{m[1][1] / det, -m[0][1] / det}, {-m[1][0] / det, m[0][0] / det}}};
}

complex sinc(complex z) {
  if (std::abs(z) < 1e-4) return 1.0 - z * z / 6.0;
  return std::sin(z) / z;
}

// Vacuum amplitudes (a, b) of a e^{ikx} + b e^{-ikx} -> (u, u') at scaled x.
Mat2 vacuum_dynamical(double a, double xs) {
  const complex ep = std::exp(kI * a * xs);
  const complex em = std::exp(-kI * a * xs);
  return {{{ep, em}, {kI * a * ep, -kI * a * em}}};
}

double smoothstep(double s) noexcept { return s * s * (3.0 - 2.0 * s); }

// One segment of the source grid: uniformly spaced nodes, shared endpoints.
struct Segment {
  double lo;
  double hi;
  std::size_t intervals;
};

}  // namespace

SmoothedProfile::SmoothedProfile(complex n0, double half_length_L, double delta, RampShape shape,
                                 double c)
    : n0_(n0), n0_sq_(n0 * n0), L_(half_length_L), delta_(delta), shape_(shape), c_(c) {
  if (!(half_length_L > 0.0) || !(c > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "profile needs positive L and c");
  }
  if (!(delta > 0.0) || delta > half_length_L / 10.0) {
    throw Error(ErrorCode::InvalidArgument, "ramp width must satisfy 0 < delta <= L/10");
  }
  if (std::abs(n0_sq_.imag()) > 1e-12 * std::max(1.0, std::abs(n0_sq_))) {
    throw Error(ErrorCode::InvalidArgument, "n0 must be purely real or purely imaginary");
  }
  n0_sq_ = complex(n0_sq_.real(), 0.0);
}

SmoothedProfile SmoothedProfile::for_medium(const Medium& medium, double omega, double delta,
                                            RampShape shape) {
  const IndexValue index = refractive_index(medium, omega);
  if (index.band_kind == BandKind::PoleDivergent) {
    throw Error(ErrorCode::PoleDivergentFrequency, "cannot build a profile at a band-edge pole");
  }
  complex n0 = index.n;
  if (index.band_kind == BandKind::ResonanceZero) n0 = kRegularizedZeroIndex;
  return SmoothedProfile(n0, medium.half_length(), delta, shape, medium.speed_of_light());
}

SmoothedProfile SmoothedProfile::at_resonance(double half_length_L, double delta, RampShape shape,
                                              double c) {
  return SmoothedProfile(kRegularizedZeroIndex, half_length_L, delta, shape, c);
}

double SmoothedProfile::ramp(double x) const noexcept {
  const double a = std::abs(x);
  if (a <= L_) return 0.0;
  if (a >= L_ + delta_) return 1.0;
  const double s = (a - L_) / delta_;
  return shape_ == RampShape::Linear ? s : smoothstep(s);
}

complex SmoothedProfile::n_squared(double x) const noexcept {
  return n0_sq_ + ramp(x) * (1.0 - n0_sq_);
}

complex SmoothedProfile::n_of_x(double x) const noexcept {
  const double n2 = n_squared(x).real();
  return n2 >= 0.0 ? complex(std::sqrt(n2), 0.0) : complex(0.0, std::sqrt(-n2));
}

double SmoothedProfile::sqrt_g_of_x(double x) const noexcept { return 1.0 - ramp(x); }

ReflectionTransmission transfer_matrix_rt(complex n0, double k, double half_length_L) {
  if (!(k > 0.0) || !(half_length_L > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "transfer_matrix_rt needs k > 0 and L > 0");
  }
  const double a = k * half_length_L;
  // Layer characteristic matrix for (u, (1/n^2) du/dxs) across dxs = -2.
  const complex phi = 2.0 * n0 * a;
  const complex cs = std::cos(phi);
  const complex sn = sinc(phi);
  const Mat2 layer{{{cs, -2.0 * n0 * n0 * sn}, {2.0 * a * a * sn, cs}}};
  const Mat2 total = mul(inverse(vacuum_dynamical(a, -1.0)), mul(layer, vacuum_dynamical(a, 1.0)));
  const complex A = total[0][0];
  const complex B = total[1][0];
  return {B / A, 1.0 / A};
}

OdeScatterResult ode_scatter(const SmoothedProfile& profile, double omega,
                             const IntegratorOptions& options, bool keep_trajectory) {
  if (!(omega > 0.0)) throw Error(ErrorCode::InvalidArgument, "omega must be positive");
  const double L = profile.half_length();
  const double ws = omega * L / profile.speed_of_light();
  const double ds = profile.delta() / L;

  const auto rhs = [&](double xs, const OdeState& y) -> OdeState {
    return {profile.n_squared(xs * L) * y[1], -ws * ws * y[0]};
  };

  OdeScatterResult result;
  const double flux_scale = profile.speed_of_light() * profile.speed_of_light() / L;
  const auto observe = [&](double xs, const OdeState& y) {
    if (keep_trajectory) result.trajectory.push_back({xs * L, y[0], flux_scale * y[1]});
  };

  const double start = 1.0 + ds;
  OdeState y{std::exp(kI * ws * start), kI * ws * std::exp(kI * ws * start)};
  observe(start, y);
  const std::array<double, 4> seams{start, 1.0, -1.0, -start};
  for (std::size_t i = 0; i + 1 < seams.size(); ++i) {
    y = integrate_adaptive(rhs, seams[i], seams[i + 1], y, options, observe, &result.stats);
  }

  const double xs = -start;
  const complex A = 0.5 * (y[0] + y[1] / (kI * ws)) * std::exp(-kI * ws * xs);
  const complex B = 0.5 * (y[0] - y[1] / (kI * ws)) * std::exp(kI * ws * xs);
  result.R = B / A;
  result.T = 1.0 / A;
  return result;
}

SourceIntegralResult source_integral_check(const SmoothedProfile& profile, double resonance_omega,
                                           const IntegratorOptions& options) {
  return source_integral_check(
      profile, resonance_omega, [&profile](double x) { return profile.sqrt_g_of_x(x); }, options);
}

SourceIntegralResult source_integral_check(const SmoothedProfile& profile, double resonance_omega,
                                           const std::function<double(double)>& source,
                                           const IntegratorOptions& options) {
  if (!(resonance_omega > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "resonance frequency must be positive");
  }
  if (std::abs(profile.n0()) > 1e-3) {
    throw Error(ErrorCode::InvalidArgument, "source check expects an n -> 0 interior profile");
  }
  const double L = profile.half_length();
  const double ws = resonance_omega * L / profile.speed_of_light();
  const double ds = profile.delta() / L;
  const double edge = 1.0 + ds;

  // Ramps get four times the base resolution.
  const double h = 2.0 * edge / static_cast<double>(kSourceGridPoints);
  const auto count = [](double width, double step, std::size_t floor) {
    return std::max(floor, static_cast<std::size_t>(std::ceil(width / step)));
  };
  const std::size_t ramp_intervals = count(ds, h / 4.0, 256);
  const std::array<Segment, 3> segments{{{-edge, -1.0, ramp_intervals},
                                         {-1.0, 1.0, count(2.0, h, 1024)},
                                         {1.0, edge, ramp_intervals}}};

  const auto rhs = [&](double xs, const OdeState& y) -> OdeState {
    return {profile.n_squared(xs * L) * y[1], -ws * ws * y[0]};
  };

  // Incidence from the right: pure exp(-ikx) on the far left.
  OdeState y{std::exp(-kI * ws * -edge), -kI * ws * std::exp(-kI * ws * -edge)};

  struct SegmentSamples {
    std::vector<double> xs;
    std::vector<complex> field;
    std::vector<double> source;
  };
  std::vector<SegmentSamples> samples(segments.size());
  std::size_t total_nodes = 0;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const auto& seg = segments[s];
    auto& out = samples[s];
    const double step = (seg.hi - seg.lo) / static_cast<double>(seg.intervals);
    double x_prev = seg.lo;
    for (std::size_t i = 0; i <= seg.intervals; ++i) {
      const double xs = i == seg.intervals ? seg.hi : seg.lo + step * static_cast<double>(i);
      if (i > 0) y = integrate_adaptive(rhs, x_prev, xs, y, options);
      out.xs.push_back(xs);
      out.field.push_back(y[0]);
      out.source.push_back(source(xs * L));
      x_prev = xs;
    }
    total_nodes += seg.intervals + (s == 0 ? 1 : 0);
  }

  const complex A = 0.5 * (y[0] - y[1] / (kI * ws)) * std::exp(kI * ws * edge);

  // dF/dxs by second-order differences inside each segment, then trapezoid.
  complex integral = 0.0;
  for (const auto& seg : samples) {
    const std::size_t m = seg.xs.size();
    const double step = seg.xs[1] - seg.xs[0];
    std::vector<double> dF(m);
    for (std::size_t i = 0; i < m; ++i) {
      if (i == 0) {
        dF[i] = (-3.0 * seg.source[0] + 4.0 * seg.source[1] - seg.source[2]) / (2.0 * step);
      } else if (i + 1 == m) {
        dF[i] = (3.0 * seg.source[m - 1] - 4.0 * seg.source[m - 2] + seg.source[m - 3]) /
                (2.0 * step);
      } else {
        dF[i] = (seg.source[i + 1] - seg.source[i - 1]) / (seg.xs[i + 1] - seg.xs[i - 1]);
      }
    }
    for (std::size_t i = 0; i + 1 < m; ++i) {
      const double dx = seg.xs[i + 1] - seg.xs[i];
      integral += 0.5 * dx * (seg.field[i] * dF[i] + seg.field[i + 1] * dF[i + 1]);
    }
  }

  SourceIntegralResult result;
  result.integral = integral / A;
  result.ur_minus_L = samples[1].field.front() / A;
  result.ur_plus_L = samples[1].field.back() / A;
  result.grid_points = total_nodes;
  return result;
}

}  // namespace slabqio

#include "slabqio/quantum_io.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "slabqio/errors.hpp"
#include "slabqio/parallel.hpp"

namespace slabqio {

namespace {

constexpr complex kI(0.0, 1.0);

// Gross-failure guard on freshly assembled S-matrices; the tests hold them to 1e-12.
constexpr double kUnitarityGuard = 1e-10;
constexpr double kPoleNudge = 1e-8;

struct GridCoefficients {
  std::vector<complex> R;
  std::vector<complex> T;
  std::vector<double> nudged;
};

ScatterSolution scatter_off_poles(const Medium& medium, double omega, std::vector<double>& nudged) {
  if (refractive_index(medium, omega).band_kind != BandKind::PoleDivergent) {
    return scatter_coefficients(medium, omega);
  }
  const auto edges = medium.band_edges();
  const auto nearest = std::min_element(edges.begin(), edges.end(), [omega](double a, double b) {
    return std::abs(a - omega) < std::abs(b - omega);
  });
  const double dir = (nearest != edges.end() && omega > *nearest) ? 1.0 : -1.0;
  nudged.push_back(omega);
  return scatter_coefficients(medium, omega * (1.0 + dir * kPoleNudge));
}

GridCoefficients coefficients_on_grid(const Medium& medium, const PulseSpectrum& pulse) {
  GridCoefficients out;
  const auto k = pulse.k_grid();
  out.R.resize(k.size());
  out.T.resize(k.size());
  for (std::size_t j = 0; j < k.size(); ++j) {
    const ScatterSolution sol = scatter_off_poles(medium, medium.speed_of_light() * k[j], out.nudged);
    out.R[j] = sol.R;
    out.T[j] = sol.T;
  }
  return out;
}

// Trapezoid sum of w f C e^{i k sign (x - sign c t)} for each t.
DetectionTrace run_trace(const Medium& medium, const PulseSpectrum& pulse, double detector_x,
                         std::span<const double> t_grid, PrefactorMode mode, unsigned threads,
                         bool transmitted) {
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "t_grid must be strictly ascending");
    }
  }
  const double prefactor = detection_prefactor(medium, mode);
  const GridCoefficients coef = coefficients_on_grid(medium, pulse);
  const auto& C = transmitted ? coef.T : coef.R;
  const auto k = pulse.k_grid();
  const auto f = pulse.f_values();
  const auto w = pulse.weights();
  const double c = medium.speed_of_light();

  std::vector<complex> weighted(k.size());
  for (std::size_t j = 0; j < k.size(); ++j) weighted[j] = w[j] * f[j] * C[j];

  DetectionTrace trace;
  trace.detector_x = detector_x;
  trace.t_grid.assign(t_grid.begin(), t_grid.end());
  trace.rate_values.assign(t_grid.size(), 0.0);
  trace.prefactor_mode = mode;
  trace.nudged_omegas = coef.nudged;

  const double sign = transmitted ? 1.0 : -1.0;
  parallel_for(t_grid.size(), threads, [&](std::size_t i) {
    const double t = t_grid[i];
    complex sum = 0.0;
    for (std::size_t j = 0; j < k.size(); ++j) {
      sum += weighted[j] * std::exp(kI * k[j] * (sign * detector_x - c * t));
    }
    trace.rate_values[i] = prefactor * std::norm(sum);
  });
  return trace;
}

}  // namespace

double SMatrix::unitarity_defect() const noexcept {
  double worst = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      complex entry = std::conj(matrix[0][i]) * matrix[0][j] + std::conj(matrix[1][i]) * matrix[1][j];
      if (i == j) entry -= 1.0;
      worst = std::max(worst, std::abs(entry));
    }
  }
  return worst;
}

double SMatrix::symmetry_defect() const noexcept {
  return std::abs(matrix[0][1] - matrix[1][0]);
}

SMatrix s_matrix(const ScatterSolution& sol) {
  SMatrix s;
  s.omega = sol.omega;
  s.matrix = {{{sol.T, sol.R}, {sol.R, sol.T}}};
  const double defect = s.unitarity_defect();
  if (!(defect <= kUnitarityGuard)) {
    throw Error(ErrorCode::UnitarityViolation,
                "S-matrix at omega " + std::to_string(sol.omega) + " deviates by " +
                    std::to_string(defect));
  }
  return s;
}

SMatrix s_matrix(const Medium& medium, double omega) {
  return s_matrix(scatter_coefficients(medium, omega));
}

Amplitudes transform_coherent(const SMatrix& s, const Amplitudes& a) noexcept {
  return {s.matrix[0][0] * a[0] + s.matrix[0][1] * a[1],
          s.matrix[1][0] * a[0] + s.matrix[1][1] * a[1]};
}

PulseSpectrum::PulseSpectrum(std::vector<double> k_grid, std::vector<complex> f_values)
    : k_(std::move(k_grid)), f_(std::move(f_values)) {
  if (k_.size() != f_.size()) {
    throw Error(ErrorCode::InvalidArgument, "k grid and f values differ in length");
  }
  if (k_.size() < 2) throw Error(ErrorCode::InvalidArgument, "pulse needs at least two samples");
  for (std::size_t i = 0; i < k_.size(); ++i) {
    if (!(k_[i] > 0.0) || !std::isfinite(k_[i])) {
      throw Error(ErrorCode::InvalidArgument, "pulse wavenumbers must be positive and finite");
    }
    if (i > 0 && !(k_[i] > k_[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "pulse k grid must be strictly ascending");
    }
    if (!std::isfinite(f_[i].real()) || !std::isfinite(f_[i].imag())) {
      throw Error(ErrorCode::InvalidArgument, "pulse amplitudes must be finite");
    }
  }
  w_.assign(k_.size(), 0.0);
  for (std::size_t i = 0; i + 1 < k_.size(); ++i) {
    const double half = 0.5 * (k_[i + 1] - k_[i]);
    w_[i] += half;
    w_[i + 1] += half;
  }
}

PulseSpectrum PulseSpectrum::gaussian(double k0, double sigma_k, std::size_t points,
                                      double half_width_sigmas, double amplitude, double x0) {
  if (!(sigma_k > 0.0) || !(half_width_sigmas > 0.0) || points < 2) {
    throw Error(ErrorCode::InvalidArgument, "gaussian pulse needs sigma_k > 0 and >= 2 points");
  }
  const double lo = k0 - half_width_sigmas * sigma_k;
  const double hi = k0 + half_width_sigmas * sigma_k;
  if (!(lo > 0.0)) throw Error(ErrorCode::InvalidArgument, "gaussian pulse reaches k <= 0");
  std::vector<double> k(points);
  std::vector<complex> f(points);
  for (std::size_t i = 0; i < points; ++i) {
    k[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    const double u = (k[i] - k0) / sigma_k;
    f[i] = amplitude * std::exp(-0.5 * u * u) * std::exp(-kI * k[i] * x0);
  }
  return PulseSpectrum(std::move(k), std::move(f));
}

PulseSpectrum PulseSpectrum::delayed(double tau, double c) const {
  std::vector<complex> f(f_.size());
  for (std::size_t i = 0; i < f_.size(); ++i) f[i] = f_[i] * std::exp(kI * k_[i] * c * tau);
  return PulseSpectrum(k_, std::move(f));
}

double detection_prefactor(const Medium& medium, PrefactorMode mode) {
  if (mode == PrefactorMode::Normalized) return 1.0;
  if (medium.spec().unit_mode != UnitMode::SI) {
    throw Error(ErrorCode::InvalidArgument, "physical prefactor requires SI units");
  }
  return kHbarSI * kSpeedOfLightSI * kVacuumPermittivitySI /
         (4.0 * std::numbers::pi * medium.spec().cross_section_A);
}

DetectionTrace detection_rate(const Medium& medium, const PulseSpectrum& pulse, double detector_x,
                              std::span<const double> t_grid, PrefactorMode mode,
                              unsigned threads) {
  if (!(detector_x > medium.half_length())) {
    throw Error(ErrorCode::DetectorInsideMedium, "detector must sit beyond x = +L");
  }
  return run_trace(medium, pulse, detector_x, t_grid, mode, threads, true);
}

DetectionTrace reflection_rate(const Medium& medium, const PulseSpectrum& pulse, double detector_x,
                               std::span<const double> t_grid, PrefactorMode mode,
                               unsigned threads) {
  if (!(detector_x < -medium.half_length())) {
    throw Error(ErrorCode::DetectorInsideMedium, "reflection detector must sit beyond x = -L");
  }
  return run_trace(medium, pulse, detector_x, t_grid, mode, threads, false);
}

EnergyBudget energy_budget(const Medium& medium, const PulseSpectrum& pulse) {
  const GridCoefficients coef = coefficients_on_grid(medium, pulse);
  const auto f = pulse.f_values();
  const auto w = pulse.weights();
  EnergyBudget budget;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double p = std::norm(f[j]) * w[j];
    budget.incident += p;
    budget.transmitted += p * std::norm(coef.T[j]);
    budget.reflected += p * std::norm(coef.R[j]);
  }
  return budget;
}

}  // namespace slabqio

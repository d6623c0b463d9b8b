#pragma once

#include <array>
#include <span>
#include <vector>

#include "slabqio/medium.hpp"
#include "slabqio/slab.hpp"

namespace slabqio {

inline constexpr double kHbarSI = 1.054571817e-34;          // J s
inline constexpr double kVacuumPermittivitySI = 8.8541878128e-12;  // F/m

using Amplitudes = std::array<complex, 2>;  // (a_{+k}, a_{-k})

// Per-frequency map from in to out mode amplitudes, [[T, R], [R, T]].
struct SMatrix {
  double omega = 0.0;
  std::array<std::array<complex, 2>, 2> matrix{};

  // max |(S^dagger S - I)_{ij}|
  double unitarity_defect() const noexcept;
  // max |S_{ij} - S_{ji}|
  double symmetry_defect() const noexcept;
};

SMatrix s_matrix(const Medium& medium, double omega);
SMatrix s_matrix(const ScatterSolution& sol);

Amplitudes transform_coherent(const SMatrix& s, const Amplitudes& alpha_in) noexcept;

// Pulse amplitude f(k) on a strictly ascending grid of positive wavenumbers.
class PulseSpectrum {
 public:
  PulseSpectrum(std::vector<double> k_grid, std::vector<complex> f_values);

  // f(k) = amplitude * exp(-(k - k0)^2 / (2 sigma_k^2)) * exp(-i k x0) on a
  // uniform grid over k0 +/- half_width_sigmas * sigma_k.
  static PulseSpectrum gaussian(double k0, double sigma_k, std::size_t points,
                                double half_width_sigmas = 8.0, double amplitude = 1.0,
                                double x0 = 0.0);

  std::span<const double> k_grid() const noexcept { return k_; }
  std::span<const complex> f_values() const noexcept { return f_; }
  std::span<const double> weights() const noexcept { return w_; }  // trapezoid

  // f(k) exp(i k c tau): the same pulse launched tau later.
  PulseSpectrum delayed(double tau, double c) const;

 private:
  std::vector<double> k_;
  std::vector<complex> f_;
  std::vector<double> w_;
};

enum class PrefactorMode { Normalized, Physical };

struct DetectionTrace {
  double detector_x = 0.0;
  std::vector<double> t_grid;
  std::vector<double> rate_values;
  PrefactorMode prefactor_mode = PrefactorMode::Normalized;
  std::vector<double> nudged_omegas;  // grid frequencies moved off a band-edge pole
};

// Transmitted-side photodetection rate |int dk f(k) T(ck) e^{ik(x - ct)}|^2
// times the prefactor. detector_x must lie beyond +L.
DetectionTrace detection_rate(const Medium& medium, const PulseSpectrum& pulse, double detector_x,
                              std::span<const double> t_grid,
                              PrefactorMode mode = PrefactorMode::Normalized, unsigned threads = 1);

// Reflected-side counterpart |int dk f(k) R(ck) e^{-ik(x + ct)}|^2 for a
// detector beyond -L.
DetectionTrace reflection_rate(const Medium& medium, const PulseSpectrum& pulse, double detector_x,
                               std::span<const double> t_grid,
                               PrefactorMode mode = PrefactorMode::Normalized,
                               unsigned threads = 1);

struct EnergyBudget {
  double incident = 0.0;     // sum |f|^2 w
  double transmitted = 0.0;  // sum |f T|^2 w
  double reflected = 0.0;    // sum |f R|^2 w
  double ratio() const noexcept { return (transmitted + reflected) / incident; }
};

EnergyBudget energy_budget(const Medium& medium, const PulseSpectrum& pulse);

double detection_prefactor(const Medium& medium, PrefactorMode mode);

}  // namespace slabqio

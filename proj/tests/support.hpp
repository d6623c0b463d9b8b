#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "slabqio/medium.hpp"

namespace testing {

using cplx = std::complex<double>;

inline slabqio::Medium single_species(double omega_res = 1.0, double g = 0.19) {
  slabqio::MediumSpec spec;
  spec.species = {{omega_res, g}};
  return slabqio::Medium(spec);
}

inline slabqio::Medium two_species() {
  slabqio::MediumSpec spec;
  spec.species = {{1.0, 0.19}, {2.0, 0.6}};
  return slabqio::Medium(spec);
}

inline slabqio::Medium vacuum() { return slabqio::Medium(slabqio::MediumSpec{}); }

// Random media with well separated resonances in (0.5, 4).
inline slabqio::MediumSpec random_spec(std::mt19937_64& rng, int max_species = 3) {
  std::uniform_int_distribution<int> count(1, max_species);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  slabqio::MediumSpec spec;
  const int n = count(rng);
  double omega = 0.5;
  for (int i = 0; i < n; ++i) {
    omega += 0.3 + unit(rng);
    // Keep g modest so every species opens its own gap.
    const double g = (0.05 + 0.3 * unit(rng)) * omega * omega * 0.3;
    spec.species.push_back({omega, g});
  }
  return spec;
}

inline double max_component_diff(cplx a, cplx b) {
  return std::max(std::abs(a.real() - b.real()), std::abs(a.imag() - b.imag()));
}

// Gaussian elimination with partial pivoting on a small dense complex system.
template <std::size_t N>
std::array<cplx, N> solve(std::array<std::array<cplx, N>, N> a, std::array<cplx, N> b) {
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < N; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    std::swap(a[col], a[piv]);
    std::swap(b[col], b[piv]);
    for (std::size_t r = col + 1; r < N; ++r) {
      const cplx f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < N; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::array<cplx, N> x{};
  for (std::size_t i = N; i-- > 0;) {
    cplx s = b[i];
    for (std::size_t c = i + 1; c < N; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

// Polynomial extrapolation to x = 0 through the points (x_i, y_i) (Neville).
inline cplx extrapolate_to_zero(std::vector<cplx> x, std::vector<cplx> y) {
  const std::size_t n = x.size();
  for (std::size_t m = 1; m < n; ++m) {
    for (std::size_t i = 0; i + m < n; ++i) {
      y[i] = (x[i + m] * y[i] - x[i] * y[i + 1]) / (x[i + m] - x[i]);
    }
  }
  return y[0];
}

}  // namespace testing

#pragma once

#include <complex>
#include <span>
#include <vector>

namespace slabqio {

using complex = std::complex<double>;

enum class UnitMode { Scaled, SI };

inline constexpr double kSpeedOfLightSI = 299792458.0;

// |omega - Omega_nu| < kResonanceTolerance * Omega_nu counts as "at the resonance";
// the same relative tolerance marks the lower band-edge poles.
inline constexpr double kResonanceTolerance = 1e-9;

// Relative residual allowed on omega^2 - (kc)^2 * bracket(omega) for dispersion roots.
inline constexpr double kDispersionTolerance = 1e-9;

struct OscillatorSpecies {
  double omega_res = 0.0;   // bare resonance Omega_nu
  double coupling_g = 0.0;  // q^2 rho / (m eps0), units of omega^2
};

struct MediumSpec {
  std::vector<OscillatorSpecies> species;
  double half_length_L = 1.0;
  double cross_section_A = 1.0;  // only enters the physical detection prefactor
  UnitMode unit_mode = UnitMode::Scaled;
};

enum class BandKind { Transmission, Absorption, ResonanceZero, PoleDivergent };

const char* band_kind_name(BandKind kind) noexcept;

struct IndexValue {
  complex n;
  BandKind band_kind = BandKind::Transmission;
};

struct Band {
  double lo = 0.0;
  double hi = 0.0;
  BandKind kind = BandKind::Transmission;  // Transmission or Absorption only
};

// Validated, immutable dielectric. Species are kept sorted by resonance and the
// lower band edges are located once at construction.
//
// Public quantities are in the declared unit mode. Internally frequencies are
// carried in units of c/L, which is what the scaled_* accessors expose.
class Medium {
 public:
  explicit Medium(MediumSpec spec);

  const MediumSpec& spec() const noexcept { return spec_; }
  std::size_t species_count() const noexcept { return spec_.species.size(); }
  bool is_vacuum() const noexcept { return spec_.species.empty(); }

  double speed_of_light() const noexcept { return c_; }
  double half_length() const noexcept { return spec_.half_length_L; }

  double to_scaled(double omega) const noexcept { return omega * freq_scale_; }
  double from_scaled(double scaled_omega) const noexcept { return scaled_omega / freq_scale_; }

  // Lower edge of each absorption band, one per species, ascending (user units).
  std::span<const double> band_edges() const noexcept { return edges_; }

  std::span<const double> scaled_resonances() const noexcept { return scaled_omega_; }
  std::span<const double> scaled_couplings() const noexcept { return scaled_g_; }
  std::span<const double> scaled_band_edges() const noexcept { return scaled_edges_; }

 private:
  MediumSpec spec_;
  double c_ = 1.0;
  double freq_scale_ = 1.0;  // L / c
  std::vector<double> scaled_omega_;
  std::vector<double> scaled_g_;
  std::vector<double> scaled_edges_;
  std::vector<double> edges_;
};

// 1 - sum_nu g_nu / (Omega_nu^2 - omega^2). Throws PoleAtResonance at a resonance.
double sellmeir_bracket(const Medium& medium, double omega);

// Bracket evaluated directly on scaled quantities, no resonance check.
double scaled_bracket(const Medium& medium, double scaled_omega) noexcept;

IndexValue refractive_index(const Medium& medium, double omega);

// Every positive omega with omega^2 = (kc)^2 * bracket(omega), ascending; one per
// transmission branch.
std::vector<double> dispersion_omega_of_k(const Medium& medium, double k);

std::vector<Band> band_structure(const Medium& medium, double omega_max);

}  // namespace slabqio

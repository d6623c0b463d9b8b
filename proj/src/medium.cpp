#include "slabqio/medium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "root_finding.hpp"
#include "slabqio/errors.hpp"

namespace slabqio {

namespace {

void require_positive_frequency(double omega, const char* what) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw Error(ErrorCode::InvalidArgument,
                std::string(what) + " must be a finite positive frequency, got " +
                    std::to_string(omega));
  }
}

bool near_relative(double a, double b) noexcept {
  return std::abs(a - b) < kResonanceTolerance * std::abs(b);
}

}  // namespace

const char* band_kind_name(BandKind kind) noexcept {
  switch (kind) {
    case BandKind::Transmission: return "Transmission";
    case BandKind::Absorption: return "Absorption";
    case BandKind::ResonanceZero: return "ResonanceZero";
    case BandKind::PoleDivergent: return "PoleDivergent";
  }
  return "Unknown";
}

Medium::Medium(MediumSpec spec) : spec_(std::move(spec)) {
  if (!(spec_.half_length_L > 0.0) || !std::isfinite(spec_.half_length_L)) {
    throw Error(ErrorCode::InvalidArgument, "half_length_L must be positive");
  }
  if (!(spec_.cross_section_A > 0.0) || !std::isfinite(spec_.cross_section_A)) {
    throw Error(ErrorCode::InvalidArgument, "cross_section_A must be positive");
  }
  for (std::size_t i = 0; i < spec_.species.size(); ++i) {
    const auto& s = spec_.species[i];
    const std::string tag = "oscillator " + std::to_string(i) + ": ";
    if (!(s.omega_res > 0.0) || !std::isfinite(s.omega_res)) {
      throw Error(ErrorCode::InvalidArgument, tag + "omega_res must be positive");
    }
    if (!(s.coupling_g > 0.0) || !std::isfinite(s.coupling_g)) {
      throw Error(ErrorCode::InvalidArgument, tag + "coupling_g must be positive");
    }
    if (!(s.coupling_g < s.omega_res * s.omega_res)) {
      throw Error(ErrorCode::InvalidArgument, tag + "coupling_g must be below omega_res^2");
    }
  }
  std::sort(spec_.species.begin(), spec_.species.end(),
            [](const auto& a, const auto& b) { return a.omega_res < b.omega_res; });
  for (std::size_t i = 1; i < spec_.species.size(); ++i) {
    if (near_relative(spec_.species[i - 1].omega_res, spec_.species[i].omega_res)) {
      throw Error(ErrorCode::InvalidArgument, "oscillator resonances must be distinct");
    }
  }

  c_ = spec_.unit_mode == UnitMode::SI ? kSpeedOfLightSI : 1.0;
  freq_scale_ = spec_.half_length_L / c_;
  for (const auto& s : spec_.species) {
    scaled_omega_.push_back(s.omega_res * freq_scale_);
    scaled_g_.push_back(s.coupling_g * freq_scale_ * freq_scale_);
  }

  // The bracket falls monotonically between consecutive poles, from +inf just
  // above Omega_{nu-1} (or from its omega = 0 value) to -inf just below Omega_nu.
  for (std::size_t nu = 0; nu < scaled_omega_.size(); ++nu) {
    const double lo = nu == 0 ? 0.0 : scaled_omega_[nu - 1];
    const double hi = scaled_omega_[nu];
    if (nu == 0 && !(scaled_bracket(*this, 0.0) > 0.0)) {
      throw Error(ErrorCode::EdgeNotFound,
                  "bracket is not positive at omega -> 0; sum of g/Omega^2 must stay below 1");
    }
    const double edge = detail::bisect_decreasing(
        [this](double w) { return scaled_bracket(*this, w); }, lo, hi);
    if (!(edge > lo && edge < hi)) {
      throw Error(ErrorCode::EdgeNotFound, "no bracket root below resonance " + std::to_string(nu));
    }
    scaled_edges_.push_back(edge);
    edges_.push_back(from_scaled(edge));
  }
}

double scaled_bracket(const Medium& medium, double w) noexcept {
  const auto omegas = medium.scaled_resonances();
  const auto gs = medium.scaled_couplings();
  double sum = 0.0;
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    sum += gs[i] / ((omegas[i] - w) * (omegas[i] + w));
  }
  return 1.0 - sum;
}

double sellmeir_bracket(const Medium& medium, double omega) {
  require_positive_frequency(omega, "omega");
  for (const auto& s : medium.spec().species) {
    if (near_relative(omega, s.omega_res)) {
      throw Error(ErrorCode::PoleAtResonance,
                  "omega " + std::to_string(omega) + " sits on resonance " +
                      std::to_string(s.omega_res));
    }
  }
  return scaled_bracket(medium, medium.to_scaled(omega));
}

IndexValue refractive_index(const Medium& medium, double omega) {
  require_positive_frequency(omega, "omega");
  for (const auto& s : medium.spec().species) {
    if (near_relative(omega, s.omega_res)) return {complex(0.0, 0.0), BandKind::ResonanceZero};
  }
  for (double edge : medium.band_edges()) {
    if (near_relative(omega, edge)) {
      return {complex(std::numeric_limits<double>::infinity(), 0.0), BandKind::PoleDivergent};
    }
  }
  const double b = scaled_bracket(medium, medium.to_scaled(omega));
  if (b > 0.0) return {complex(1.0 / std::sqrt(b), 0.0), BandKind::Transmission};
  if (b < 0.0) return {complex(0.0, 1.0 / std::sqrt(-b)), BandKind::Absorption};
  return {complex(std::numeric_limits<double>::infinity(), 0.0), BandKind::PoleDivergent};
}

std::vector<double> dispersion_omega_of_k(const Medium& medium, double k) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw Error(ErrorCode::InvalidArgument, "k must be a finite positive wavenumber");
  }
  const double ks = k * medium.half_length();
  const auto residual = [&](double w) { return w * w - ks * ks * scaled_bracket(medium, w); };

  const auto poles = medium.scaled_resonances();
  const auto edges = medium.scaled_band_edges();
  std::vector<double> roots;
  roots.reserve(poles.size() + 1);

  // Transmission branches: (0, e_1), (Omega_1, e_2), ..., (Omega_N, inf). The
  // residual climbs from negative at the lower end to omega^2 > 0 at the edge.
  for (std::size_t nu = 0; nu < edges.size(); ++nu) {
    const double lo = nu == 0 ? 0.0 : poles[nu - 1];
    roots.push_back(detail::bisect_increasing(residual, lo, edges[nu]));
  }
  const double lo = poles.empty() ? 0.0 : poles.back();
  double hi = std::max({2.0 * lo, 2.0 * ks, 1.0});
  int expansions = 0;
  while (!(residual(hi) > 0.0)) {
    hi *= 2.0;
    if (++expansions > 200 || !std::isfinite(hi)) {
      throw Error(ErrorCode::RootBracketingFailure, "cannot bracket the upper dispersion branch");
    }
  }
  roots.push_back(detail::bisect_increasing(residual, lo, hi));

  for (double& w : roots) {
    if (!(w > 0.0)) {
      throw Error(ErrorCode::RootBracketingFailure, "dispersion branch collapsed to omega = 0");
    }
    w = medium.from_scaled(w);
  }
  return roots;
}

std::vector<Band> band_structure(const Medium& medium, double omega_max) {
  const auto& species = medium.spec().species;
  const double top = species.empty() ? 0.0 : species.back().omega_res;
  if (!(omega_max > top) || !std::isfinite(omega_max)) {
    throw Error(ErrorCode::RangeError, "omega_max must exceed every resonance");
  }
  std::vector<Band> bands;
  double lo = 0.0;
  const auto edges = medium.band_edges();
  for (std::size_t nu = 0; nu < species.size(); ++nu) {
    if (!(edges[nu] > lo)) throw Error(ErrorCode::EdgeNotFound, "band edges out of order");
    bands.push_back({lo, edges[nu], BandKind::Transmission});
    bands.push_back({edges[nu], species[nu].omega_res, BandKind::Absorption});
    lo = species[nu].omega_res;
  }
  bands.push_back({lo, omega_max, BandKind::Transmission});
  return bands;
}

}  // namespace slabqio

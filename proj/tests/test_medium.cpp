#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "slabqio/errors.hpp"
#include "slabqio/medium.hpp"
#include "support.hpp"

using namespace slabqio;
using testing::single_species;

namespace {

// Bracket in long double, written as a single fraction per species.
long double bracket_ld(const MediumSpec& spec, long double w) {
  long double b = 1.0L;
  for (const auto& s : spec.species) {
    const long double o = s.omega_res;
    b -= static_cast<long double>(s.coupling_g) / ((o - w) * (o + w));
  }
  return b;
}

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an exception");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("bracket of an empty medium is one") {
  const Medium m = testing::vacuum();
  for (double w : {1e-3, 0.5, 1.0, 7.0, 1e4}) CHECK(sellmeir_bracket(m, w) == 1.0);
}

TEST_CASE("bracket vanishes at the analytic band edge") {
  const Medium m = single_species(1.0, 0.19);
  CHECK(std::abs(sellmeir_bracket(m, 0.9)) < 1e-14);
}

TEST_CASE("bracket above a single resonance") {
  const Medium m = single_species(1.0, 0.5);
  const double b = sellmeir_bracket(m, 2.0);
  CHECK(b == doctest::Approx(7.0 / 6.0).epsilon(1e-15));
  // (Omega^2 - omega^2 - g) / (Omega^2 - omega^2) evaluated separately.
  const long double alt = (1.0L - 4.0L - 0.5L) / (1.0L - 4.0L);
  CHECK(std::abs(b - static_cast<double>(alt)) < 1e-15);
}

TEST_CASE("bracket rejects resonance frequencies") {
  const Medium m = single_species(1.0, 0.5);
  CHECK(code_of([&] { sellmeir_bracket(m, 1.0); }) == ErrorCode::PoleAtResonance);
  CHECK(code_of([&] { sellmeir_bracket(m, 1.0 + 5e-10); }) == ErrorCode::PoleAtResonance);
  CHECK_NOTHROW(sellmeir_bracket(m, 1.0 + 1e-8));
  CHECK(code_of([&] { sellmeir_bracket(m, -1.0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { sellmeir_bracket(m, 0.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("bracket agrees with a long double evaluation on random media") {
  std::mt19937_64 rng(0x5eed01);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const MediumSpec spec = testing::random_spec(rng);
    const Medium m(spec);
    for (int j = 0; j < 50; ++j) {
      const double w = 6.0 * unit(rng) + 1e-3;
      bool near_pole = false;
      for (const auto& s : spec.species) near_pole |= std::abs(w - s.omega_res) < 1e-3;
      if (near_pole) continue;
      const long double ref = bracket_ld(spec, w);
      const double got = sellmeir_bracket(m, w);
      CHECK(std::abs(got - static_cast<double>(ref)) <= 1e-12 * std::max(1.0L, std::abs(ref)));
    }
  }
}

TEST_CASE("index in vacuum is one") {
  const Medium m = testing::vacuum();
  const IndexValue v = refractive_index(m, 3.0);
  CHECK(v.n == complex(1.0, 0.0));
  CHECK(v.band_kind == BandKind::Transmission);
}

TEST_CASE("index is zero at the resonance") {
  const Medium m = single_species(1.0, 0.5);
  const IndexValue v = refractive_index(m, 1.0);
  CHECK(v.n == complex(0.0, 0.0));
  CHECK(v.band_kind == BandKind::ResonanceZero);
}

TEST_CASE("index in a transmission band") {
  const Medium m = single_species(1.0, 0.5);
  const IndexValue v = refractive_index(m, 2.0);
  CHECK(v.band_kind == BandKind::Transmission);
  CHECK(v.n.imag() == 0.0);
  CHECK(std::abs(v.n.real() - std::sqrt(6.0 / 7.0)) < 1e-15);
  CHECK(v.n.real() == doctest::Approx(0.92582).epsilon(1e-5));
}

TEST_CASE("index in the absorption band is purely imaginary") {
  const Medium m = single_species(1.0, 0.19);
  const IndexValue v = refractive_index(m, 0.95);
  CHECK(v.band_kind == BandKind::Absorption);
  CHECK(v.n.real() == 0.0);
  CHECK(v.n.imag() > 0.0);
  // n^2 * bracket = 1 with the bracket from the long double path.
  const long double b = bracket_ld(m.spec(), 0.95L);
  CHECK(b < 0.0L);
  CHECK(std::abs(v.n * v.n * static_cast<double>(b) - 1.0) < 1e-14);
}

TEST_CASE("index flags the band-edge pole") {
  const Medium m = single_species(1.0, 0.19);
  CHECK(refractive_index(m, 0.9).band_kind == BandKind::PoleDivergent);
  CHECK(refractive_index(m, 0.9 * (1.0 + 5e-10)).band_kind == BandKind::PoleDivergent);
  CHECK(refractive_index(m, 0.9 * (1.0 + 1e-7)).band_kind == BandKind::Absorption);
  CHECK(refractive_index(m, 0.9 * (1.0 - 1e-7)).band_kind == BandKind::Transmission);
}

TEST_CASE("index classification invariants on random media") {
  std::mt19937_64 rng(0x5eed02);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Medium m(testing::random_spec(rng));
    for (int j = 0; j < 100; ++j) {
      const double w = 6.0 * unit(rng) + 1e-3;
      const IndexValue v = refractive_index(m, w);
      switch (v.band_kind) {
        case BandKind::Transmission:
          CHECK(v.n.imag() == 0.0);
          CHECK(v.n.real() > 0.0);
          CHECK(bracket_ld(m.spec(), w) > 0.0L);
          break;
        case BandKind::Absorption:
          CHECK(v.n.real() == 0.0);
          CHECK(v.n.imag() > 0.0);
          CHECK(bracket_ld(m.spec(), w) < 0.0L);
          break;
        case BandKind::ResonanceZero:
          CHECK(v.n == complex(0.0, 0.0));
          break;
        case BandKind::PoleDivergent:
          break;
      }
      if (v.band_kind == BandKind::Transmission || v.band_kind == BandKind::Absorption) {
        const long double b = bracket_ld(m.spec(), w);
        CHECK(std::abs(v.n * v.n * static_cast<double>(b) - 1.0) < 1e-10);
      }
    }
  }
}

TEST_CASE("dispersion in vacuum is the light line") {
  const Medium m = testing::vacuum();
  const auto roots = dispersion_omega_of_k(m, 2.5);
  REQUIRE(roots.size() == 1);
  CHECK(roots[0] == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("dispersion returns one root per transmission branch") {
  const Medium m = single_species(1.0, 0.19);
  for (double k : {0.1, 0.9, 1.5, 4.0, 30.0}) {
    const auto roots = dispersion_omega_of_k(m, k);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0] < 0.9);
    CHECK(roots[1] > 1.0);
    for (double w : roots) {
      const long double res = static_cast<long double>(w) * w - static_cast<long double>(k) * k * bracket_ld(m.spec(), w);
      CHECK(std::abs(static_cast<double>(res)) <= kDispersionTolerance * std::max(1.0, w * w));
      // k = n omega / c on the branch.
      CHECK(refractive_index(m, w).n.real() * w == doctest::Approx(k).epsilon(1e-9));
    }
  }
}

TEST_CASE("dispersion roots match a dense sign scan") {
  const Medium m = testing::two_species();
  const double k = 1.7;
  const auto roots = dispersion_omega_of_k(m, k);
  REQUIRE(roots.size() == 3);
  // Independent scan of omega^2 - k^2 b(omega) over transmission frequencies.
  std::vector<double> scan;
  const int n = 400000;
  double prev_w = 0.0;
  long double prev = 0.0L;
  for (int i = 1; i <= n; ++i) {
    const double w = 4.0 * i / n;
    const long double b = bracket_ld(m.spec(), w);
    const long double g = static_cast<long double>(w) * w - static_cast<long double>(k) * k * b;
    bool transmission = b > 0.0L;
    if (i > 1 && transmission && prev < 0.0L && g > 0.0L) scan.push_back(0.5 * (w + prev_w));
    prev = transmission ? g : 1.0L;
    prev_w = w;
  }
  REQUIRE(scan.size() == roots.size());
  for (std::size_t i = 0; i < roots.size(); ++i) CHECK(std::abs(roots[i] - scan[i]) < 2e-5);
}

TEST_CASE("dispersion rejects bad wavenumbers") {
  const Medium m = single_species();
  CHECK(code_of([&] { dispersion_omega_of_k(m, 0.0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { dispersion_omega_of_k(m, -1.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("band structure of vacuum is one transmission band") {
  const auto bands = band_structure(testing::vacuum(), 5.0);
  REQUIRE(bands.size() == 1);
  CHECK(bands[0].lo == 0.0);
  CHECK(bands[0].hi == 5.0);
  CHECK(bands[0].kind == BandKind::Transmission);
}

TEST_CASE("single species gap sits at (sqrt(Omega^2 - g), Omega)") {
  const Medium m = single_species(1.0, 0.19);
  const auto bands = band_structure(m, 2.0);
  REQUIRE(bands.size() == 3);
  CHECK(bands[1].kind == BandKind::Absorption);
  CHECK(std::abs(bands[1].lo - 0.9) < 1e-12);
  CHECK(bands[1].hi == 1.0);
  CHECK(bands[0].hi == bands[1].lo);
  CHECK(bands[2].lo == bands[1].hi);
  CHECK(bands[2].hi == 2.0);
}

TEST_CASE("band edges for random single species match the closed form") {
  std::mt19937_64 rng(0x5eed03);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double omega = 0.1 + 10.0 * unit(rng);
    const double g = (0.01 + 0.98 * unit(rng)) * omega * omega;
    const Medium m = single_species(omega, g);
    CHECK(std::abs(m.band_edges()[0] - std::sqrt(omega * omega - g)) <= 1e-13 * omega);
  }
}

TEST_CASE("two species open two gaps located by a sign scan") {
  const Medium m = testing::two_species();
  const auto bands = band_structure(m, 3.0);
  REQUIRE(bands.size() == 5);
  std::vector<std::pair<double, double>> gaps;
  const int n = 1000000;
  const double h = 3.0 / n;
  bool inside = false;
  double start = 0.0;
  for (int i = 1; i < n; ++i) {
    const double w = h * i;
    const bool neg = bracket_ld(m.spec(), w) < 0.0L;
    if (neg && !inside) start = w;
    if (!neg && inside) gaps.emplace_back(start, w);
    inside = neg;
  }
  REQUIRE(gaps.size() == 2);
  CHECK(bands[1].kind == BandKind::Absorption);
  CHECK(bands[3].kind == BandKind::Absorption);
  CHECK(std::abs(bands[1].lo - gaps[0].first) <= h);
  CHECK(std::abs(bands[1].hi - gaps[0].second) <= h);
  CHECK(std::abs(bands[3].lo - gaps[1].first) <= h);
  CHECK(std::abs(bands[3].hi - gaps[1].second) <= h);
  CHECK(bands[1].hi == 1.0);
  CHECK(bands[3].hi == 2.0);
}

TEST_CASE("band structure tiles (0, omega_max) on random media") {
  std::mt19937_64 rng(0x5eed04);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const MediumSpec spec = testing::random_spec(rng);
    const Medium m(spec);
    const double top = spec.species.back().omega_res * (1.1 + unit(rng));
    const auto bands = band_structure(m, top);
    REQUIRE(bands.size() == 2 * spec.species.size() + 1);
    CHECK(bands.front().lo == 0.0);
    CHECK(bands.back().hi == top);
    std::size_t gap = 0;
    for (std::size_t i = 0; i < bands.size(); ++i) {
      CHECK(bands[i].lo < bands[i].hi);
      if (i > 0) CHECK(bands[i].lo == bands[i - 1].hi);
      const double mid = 0.5 * (bands[i].lo + bands[i].hi);
      const long double b = bracket_ld(spec, mid);
      if (bands[i].kind == BandKind::Absorption) {
        CHECK(b < 0.0L);
        CHECK(bands[i].hi == spec.species[gap++].omega_res);
        // Edge is a sign change of the bracket to bisection precision.
        const double e = bands[i].lo;
        CHECK(bracket_ld(spec, e * (1.0 - 1e-12)) > 0.0L);
        CHECK(bracket_ld(spec, e * (1.0 + 1e-12)) < 0.0L);
      } else {
        CHECK(b > 0.0L);
      }
    }
  }
}

TEST_CASE("band structure needs omega_max beyond every resonance") {
  const Medium m = single_species(1.0, 0.19);
  CHECK(code_of([&] { band_structure(m, 1.0); }) == ErrorCode::RangeError);
  CHECK(code_of([&] { band_structure(m, 0.5); }) == ErrorCode::RangeError);
}

TEST_CASE("medium validation") {
  const auto build = [](MediumSpec spec) { return code_of([&] { Medium m(spec); }); };
  MediumSpec spec;
  spec.species = {{1.0, 1.0}};
  CHECK(build(spec) == ErrorCode::InvalidArgument);
  spec.species = {{1.0, -0.1}};
  CHECK(build(spec) == ErrorCode::InvalidArgument);
  spec.species = {{0.0, 0.1}};
  CHECK(build(spec) == ErrorCode::InvalidArgument);
  spec.species = {{1.0, 0.1}, {1.0, 0.2}};
  CHECK(build(spec) == ErrorCode::InvalidArgument);
  spec.species = {{1.0, 0.1}};
  spec.half_length_L = -1.0;
  CHECK(build(spec) == ErrorCode::InvalidArgument);
  // Strong couplings that overlap push b(0) negative: no edge below the first resonance.
  spec = MediumSpec{};
  spec.species = {{1.0, 0.9}, {1.05, 0.99}};
  CHECK(build(spec) == ErrorCode::EdgeNotFound);
}

TEST_CASE("species are sorted on construction") {
  MediumSpec spec;
  spec.species = {{2.0, 0.6}, {1.0, 0.19}};
  const Medium m(spec);
  CHECK(m.spec().species[0].omega_res == 1.0);
  CHECK(m.spec().species[1].omega_res == 2.0);
  CHECK(m.band_edges()[0] < 1.0);
  CHECK(m.band_edges()[1] > 1.0);
}

TEST_CASE("SI media depend only on omega L / c") {
  const double L = 2e-6;
  const double scale = kSpeedOfLightSI / L;
  MediumSpec si;
  si.unit_mode = UnitMode::SI;
  si.half_length_L = L;
  si.cross_section_A = 1e-12;
  si.species = {{1.0 * scale, 0.19 * scale * scale}};
  const Medium msi(si);
  const Medium ms = single_species(1.0, 0.19);
  CHECK(msi.speed_of_light() == kSpeedOfLightSI);
  CHECK(msi.band_edges()[0] / scale == doctest::Approx(0.9).epsilon(1e-12));
  for (double w : {0.3, 0.95, 1.4}) {
    const IndexValue a = refractive_index(msi, w * scale);
    const IndexValue b = refractive_index(ms, w);
    CHECK(a.band_kind == b.band_kind);
    CHECK(std::abs(a.n - b.n) < 1e-12);
  }
  const auto roots = dispersion_omega_of_k(msi, 1.5 / L);
  const auto scaled_roots = dispersion_omega_of_k(ms, 1.5);
  REQUIRE(roots.size() == scaled_roots.size());
  for (std::size_t i = 0; i < roots.size(); ++i) {
    CHECK(roots[i] / scale == doctest::Approx(scaled_roots[i]).epsilon(1e-12));
  }
}

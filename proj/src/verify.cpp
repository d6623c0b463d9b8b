#include "slabqio/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "slabqio/errors.hpp"
#include "slabqio/oracle.hpp"
#include "slabqio/parallel.hpp"
#include "slabqio/slab.hpp"

namespace slabqio {

namespace {

constexpr std::array<double, 4> kConvergenceDivisors{10.0, 30.0, 100.0, 300.0};
constexpr std::array<double, 3> kSourceDivisors{10.0, 30.0, 100.0};

std::string join(const std::vector<double>& values) {
  std::ostringstream ss;
  ss.precision(3);
  for (std::size_t i = 0; i < values.size(); ++i) ss << (i ? "," : "") << values[i];
  return ss.str();
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

// Uniform scaled grid over (0.1 s, 2 s), s covering every resonance.
std::vector<double> sweep_grid(const Medium& medium, std::size_t points) {
  double s = 1.0;
  for (double w : medium.scaled_resonances()) s = std::max(s, w);
  std::vector<double> grid(points);
  const double lo = 0.1 * s;
  const double hi = 2.0 * s;
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = medium.from_scaled(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
  }
  return grid;
}

CheckResult check_unitarity(const Medium& medium, unsigned threads) {
  const auto grid = sweep_grid(medium, kVerifyUnitarityPoints);
  std::vector<double> defect(grid.size(), 0.0);
  std::vector<char> skipped(grid.size(), 0);
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    if (refractive_index(medium, grid[i]).band_kind == BandKind::PoleDivergent) {
      skipped[i] = 1;
      return;
    }
    const auto sol = scatter_coefficients(medium, grid[i]);
    defect[i] = std::abs(std::norm(sol.R) + std::norm(sol.T) - 1.0);
  });
  const double worst = *std::max_element(defect.begin(), defect.end());
  const auto n_skipped = std::count(skipped.begin(), skipped.end(), 1);
  return {"unitarity_sweep", worst, kVerifyUnitarityTol, worst <= kVerifyUnitarityTol,
          std::to_string(grid.size() - n_skipped) + " frequencies, " + std::to_string(n_skipped) +
              " pole points skipped"};
}

CheckResult check_oracle(const Medium& medium, unsigned threads) {
  const auto grid = sweep_grid(medium, kVerifyOraclePoints);
  std::vector<double> dev(grid.size(), 0.0);
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    const IndexValue index = refractive_index(medium, grid[i]);
    if (index.band_kind == BandKind::PoleDivergent) return;
    const auto sol = scatter_coefficients(medium, grid[i]);
    const auto tm = transfer_matrix_rt(sol.n0, sol.k, medium.half_length());
    dev[i] = std::max({std::abs(sol.R.real() - tm.R.real()), std::abs(sol.R.imag() - tm.R.imag()),
                       std::abs(sol.T.real() - tm.T.real()), std::abs(sol.T.imag() - tm.T.imag())});
  });
  const double worst = *std::max_element(dev.begin(), dev.end());
  return {"oracle_transfer_matrix", worst, kVerifyOracleTol, worst <= kVerifyOracleTol,
          std::to_string(grid.size()) + " frequencies, component-wise"};
}

CheckResult check_fixture(const GoldenFixture& fixture, std::size_t index) {
  const std::string name = "fixture_" + std::to_string(index);
  try {
    const double dev = fixture_max_deviation(fixture);
    return {name, dev, fixture.tolerance, dev <= fixture.tolerance,
            std::to_string(fixture.entries.size()) + " entries from " + fixture.oracle};
  } catch (const Error& e) {
    return {name, NAN, fixture.tolerance, false, e.what()};
  }
}

double rt_error(const OdeScatterResult& ode, const ScatterSolution& sol) {
  const double diff = std::sqrt(std::norm(ode.R - sol.R) + std::norm(ode.T - sol.T));
  return diff / std::sqrt(std::norm(sol.R) + std::norm(sol.T));
}

CheckResult check_convergence(const Medium& medium, unsigned threads) {
  double top = 1.0;
  for (double w : medium.scaled_resonances()) top = std::max(top, 1.5 * w);
  const double omega = medium.from_scaled(top);
  const auto sol = scatter_coefficients(medium, omega);
  std::vector<double> errors(kConvergenceDivisors.size());
  parallel_for(errors.size(), threads, [&](std::size_t i) {
    const auto profile =
        SmoothedProfile::for_medium(medium, omega, medium.half_length() / kConvergenceDivisors[i]);
    errors[i] = rt_error(ode_scatter(profile, omega), sol);
  });
  bool ratio_ok = true;
  for (std::size_t i = 1; i < errors.size(); ++i) {
    ratio_ok = ratio_ok && errors[i] < kVerifyConvergenceRatio * errors[i - 1];
  }
  const double last = errors.back();
  const bool passed = strictly_decreasing(errors) && ratio_ok && last < kVerifyConvergenceTol;
  return {"delta_convergence", last, kVerifyConvergenceTol, passed,
          "scaled omega " + join({top}) + ", errors at L/10,L/30,L/100,L/300: " + join(errors)};
}

CheckResult check_absorption_flux(const Medium& medium, std::size_t nu) {
  const double lo = medium.scaled_band_edges()[nu];
  const double hi = medium.scaled_resonances()[nu];
  const double omega = medium.from_scaled(0.5 * (lo + hi));
  const auto profile = SmoothedProfile::for_medium(medium, omega, medium.half_length() / 100.0);
  const auto ode = ode_scatter(profile, omega);
  const double defect = std::abs(std::norm(ode.R) + std::norm(ode.T) - 1.0);
  return {"ode_flux_absorption_" + std::to_string(nu), defect, kVerifyOdeFluxTol,
          defect <= kVerifyOdeFluxTol, "delta = L/100, scaled omega " + join({0.5 * (lo + hi)})};
}

std::vector<CheckResult> check_source(const Medium& medium, std::size_t nu, unsigned threads) {
  const double omega = medium.spec().species[nu].omega_res;
  std::vector<SourceIntegralResult> runs(kSourceDivisors.size());
  parallel_for(runs.size(), threads, [&](std::size_t i) {
    const auto profile = SmoothedProfile::at_resonance(
        medium.half_length(), medium.half_length() / kSourceDivisors[i], RampShape::Linear,
        medium.speed_of_light());
    runs[i] = source_integral_check(profile, omega);
  });
  std::vector<double> mags;
  for (const auto& r : runs) mags.push_back(std::abs(r.integral));
  const double ratio = mags.back() / mags.front();
  const bool passed = strictly_decreasing(mags) && ratio < kVerifySourceRatioTol;

  const auto& at100 = runs.back();
  const double sym = std::abs(at100.ur_minus_L - at100.ur_plus_L) / std::abs(at100.ur_plus_L);
  const std::string tag = std::to_string(nu);
  return {{"source_integral_" + tag, ratio, kVerifySourceRatioTol, passed,
           "|I(L/100)|/|I(L/10)|; |I| at L/10,L/30,L/100: " + join(mags)},
          {"ur_symmetry_" + tag, sym, kVerifySymmetryTol, sym <= kVerifySymmetryTol,
           "|u_r(-L) - u_r(L)| / |u_r(L)| at delta = L/100"}};
}

}  // namespace

std::vector<CheckResult> run_verify(const Medium& medium, const VerifyOptions& options) {
  const unsigned threads = std::max(1u, options.threads);
  std::vector<CheckResult> results;
  results.push_back(check_unitarity(medium, threads));
  results.push_back(check_oracle(medium, threads));
  for (std::size_t i = 0; i < options.fixtures.size(); ++i) {
    results.push_back(check_fixture(options.fixtures[i], i));
  }
  if (options.level == VerifyLevel::Full) {
    results.push_back(check_convergence(medium, threads));
    for (std::size_t nu = 0; nu < medium.species_count(); ++nu) {
      results.push_back(check_absorption_flux(medium, nu));
      for (auto& r : check_source(medium, nu, threads)) results.push_back(std::move(r));
    }
  }
  return results;
}

bool all_passed(const std::vector<CheckResult>& results) noexcept {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
}

}  // namespace slabqio

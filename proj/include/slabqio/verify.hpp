#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slabqio/io.hpp"
#include "slabqio/medium.hpp"

namespace slabqio {

enum class VerifyLevel { Quick, Full };

struct CheckResult {
  std::string property;
  double measured = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  VerifyLevel level = VerifyLevel::Quick;
  std::vector<GoldenFixture> fixtures;
  unsigned threads = 1;
};

// Sweep sizes and tolerances used by the checks.
inline constexpr std::size_t kVerifyUnitarityPoints = 10000;
inline constexpr std::size_t kVerifyOraclePoints = 1000;
inline constexpr double kVerifyUnitarityTol = 1e-12;
inline constexpr double kVerifyOracleTol = 1e-10;
inline constexpr double kVerifyConvergenceTol = 1e-3;
inline constexpr double kVerifyConvergenceRatio = 0.9;
inline constexpr double kVerifyOdeFluxTol = 1e-8;
inline constexpr double kVerifySourceRatioTol = 0.05;
inline constexpr double kVerifySymmetryTol = 1e-6;

// Quick: unitarity sweep, oracle agreement and fixture replay.
// Full adds the ramp-width convergence, ODE flux conservation in each
// absorption band and the resonance source integral for each species.
std::vector<CheckResult> run_verify(const Medium& medium, const VerifyOptions& options);

bool all_passed(const std::vector<CheckResult>& results) noexcept;

}  // namespace slabqio

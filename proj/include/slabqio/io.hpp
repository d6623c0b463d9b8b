#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "slabqio/medium.hpp"
#include "slabqio/quantum_io.hpp"

namespace slabqio {

// Medium configuration document:
//   { "unit_mode": "scaled" | "SI",          (optional, default "scaled")
//     "half_length_L": number,                (required in SI, default 1 when scaled)
//     "cross_section_A": number,              (SI only, required there)
//     "oscillators": [ { "omega_res": number, "coupling_g": number }, ... ] }
// Unknown keys are rejected. Errors name the offending JSON pointer, or the
// line and column for malformed text.
MediumSpec parse_medium_config(std::string_view text);

// Stable serialization used for provenance records and the config hash.
std::string canonical_medium_json(const MediumSpec& spec);
std::uint64_t config_hash(const MediumSpec& spec);
std::string hex_hash(std::uint64_t hash);

// Rows of "k, Re f, Im f" separated by commas or whitespace; '#' comments,
// blank lines and one leading non-numeric header line are skipped.
PulseSpectrum parse_pulse_file(std::string_view text);

struct GoldenEntry {
  double omega = 0.0;
  complex R;
  complex T;
};

// Frozen oracle output for one medium.
struct GoldenFixture {
  static constexpr int kVersion = 1;
  MediumSpec medium;
  std::string oracle = "transfer_matrix_rt";
  double tolerance = 1e-10;
  std::string note;
  std::vector<GoldenEntry> entries;
};

// Evaluates the transfer-matrix oracle at each omega.
GoldenFixture make_golden_fixture(const Medium& medium, std::span<const double> omegas,
                                  std::string note = {});
std::string serialize_fixture(const GoldenFixture& fixture);
GoldenFixture parse_fixture(std::string_view text);

// Largest component-wise |closed form - stored| over the entries.
double fixture_max_deviation(const GoldenFixture& fixture);

std::string read_text_file(const std::string& path);

}  // namespace slabqio

#include "slabqio/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "slabqio/errors.hpp"
#include "slabqio/oracle.hpp"
#include "slabqio/slab.hpp"

namespace slabqio {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& pointer, const std::string& what) {
  throw Error(ErrorCode::ConfigError, pointer + ": " + what);
}

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

json parse_json(std::string_view text, ErrorCode code) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // nlohmann reports the byte just past the failure point.
    const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    throw Error(code, line_column(text, at) + ": malformed JSON");
  }
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& pointer) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) config_error(pointer + "/" + key, "unknown key");
  }
}

double positive_number(const json& obj, const std::string& key, const std::string& pointer) {
  const auto it = obj.find(key);
  if (it == obj.end()) config_error(pointer + "/" + key, "missing required number");
  if (!it->is_number()) config_error(pointer + "/" + key, "expected a number");
  const double v = it->get<double>();
  if (!(v > 0.0) || !std::isfinite(v)) config_error(pointer + "/" + key, "must be positive");
  return v;
}

json medium_to_json(const MediumSpec& spec) {
  json doc = json::object();
  doc["unit_mode"] = spec.unit_mode == UnitMode::SI ? "SI" : "scaled";
  doc["half_length_L"] = spec.half_length_L;
  if (spec.unit_mode == UnitMode::SI) doc["cross_section_A"] = spec.cross_section_A;
  json osc = json::array();
  for (const auto& s : spec.species) {
    osc.push_back({{"omega_res", s.omega_res}, {"coupling_g", s.coupling_g}});
  }
  doc["oscillators"] = osc;
  return doc;
}

MediumSpec medium_from_json(const json& doc) {
  if (!doc.is_object()) config_error("", "top level must be an object");
  reject_unknown_keys(doc, {"unit_mode", "half_length_L", "cross_section_A", "oscillators"}, "");

  MediumSpec spec;
  if (const auto it = doc.find("unit_mode"); it != doc.end()) {
    if (!it->is_string()) config_error("/unit_mode", "expected \"scaled\" or \"SI\"");
    const auto mode = it->get<std::string>();
    if (mode == "scaled") {
      spec.unit_mode = UnitMode::Scaled;
    } else if (mode == "SI") {
      spec.unit_mode = UnitMode::SI;
    } else {
      config_error("/unit_mode", "expected \"scaled\" or \"SI\", got \"" + mode + "\"");
    }
  }
  const bool si = spec.unit_mode == UnitMode::SI;
  if (si || doc.contains("half_length_L")) {
    spec.half_length_L = positive_number(doc, "half_length_L", "");
  }
  if (si) {
    spec.cross_section_A = positive_number(doc, "cross_section_A", "");
  } else if (doc.contains("cross_section_A")) {
    config_error("/cross_section_A", "only valid with unit_mode \"SI\"");
  }

  const auto osc = doc.find("oscillators");
  if (osc == doc.end()) config_error("/oscillators", "missing required array");
  if (!osc->is_array()) config_error("/oscillators", "expected an array");
  for (std::size_t i = 0; i < osc->size(); ++i) {
    const std::string pointer = "/oscillators/" + std::to_string(i);
    const json& entry = (*osc)[i];
    if (!entry.is_object()) config_error(pointer, "expected an object");
    reject_unknown_keys(entry, {"omega_res", "coupling_g"}, pointer);
    OscillatorSpecies s;
    s.omega_res = positive_number(entry, "omega_res", pointer);
    s.coupling_g = positive_number(entry, "coupling_g", pointer);
    if (!(s.coupling_g < s.omega_res * s.omega_res)) {
      config_error(pointer + "/coupling_g", "must be below omega_res^2");
    }
    spec.species.push_back(s);
  }
  return spec;
}

complex complex_from_json(const json& j, const std::string& pointer) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorCode::FixtureError, pointer + ": expected [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

bool parse_double(std::string_view token, double& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

MediumSpec parse_medium_config(std::string_view text) {
  const json doc = parse_json(text, ErrorCode::ConfigError);
  const MediumSpec spec = medium_from_json(doc);
  try {
    Medium check(spec);
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
  return spec;
}

std::string canonical_medium_json(const MediumSpec& spec) {
  MediumSpec sorted = spec;
  std::sort(sorted.species.begin(), sorted.species.end(),
            [](const auto& a, const auto& b) { return a.omega_res < b.omega_res; });
  return medium_to_json(sorted).dump();
}

std::uint64_t config_hash(const MediumSpec& spec) {
  // FNV-1a
  std::uint64_t h = 14695981039346656037ull;
  for (const unsigned char ch : canonical_medium_json(spec)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex_hash(std::uint64_t hash) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[hash & 0xF];
    hash >>= 4;
  }
  return out;
}

PulseSpectrum parse_pulse_file(std::string_view text) {
  std::vector<double> k;
  std::vector<complex> f;
  std::size_t line_no = 0;
  bool seen_data = false;
  bool header_skipped = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (std::isspace(static_cast<unsigned char>(line[i])) || line[i] == ',')) ++i;
      const std::size_t start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != ',') ++i;
      if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    if (tokens.empty()) {
      if (end == text.size()) break;
      continue;
    }

    double vals[3];
    bool numeric = tokens.size() == 3;
    for (std::size_t t = 0; numeric && t < 3; ++t) numeric = parse_double(tokens[t], vals[t]);
    if (!numeric) {
      if (!seen_data && !header_skipped) {
        header_skipped = true;
        continue;
      }
      throw Error(ErrorCode::PulseFileError,
                  "line " + std::to_string(line_no) + ": expected three numbers k, Re f, Im f");
    }
    seen_data = true;
    k.push_back(vals[0]);
    f.emplace_back(vals[1], vals[2]);
    if (end == text.size()) break;
  }
  try {
    return PulseSpectrum(std::move(k), std::move(f));
  } catch (const Error& e) {
    throw Error(ErrorCode::PulseFileError, e.what());
  }
}

GoldenFixture make_golden_fixture(const Medium& medium, std::span<const double> omegas,
                                  std::string note) {
  GoldenFixture fixture;
  fixture.medium = medium.spec();
  fixture.note = std::move(note);
  for (double omega : omegas) {
    const IndexValue index = refractive_index(medium, omega);
    if (index.band_kind == BandKind::PoleDivergent) {
      throw Error(ErrorCode::PoleDivergentFrequency, "fixture frequency on a band-edge pole");
    }
    const complex n0 = index.band_kind == BandKind::ResonanceZero ? complex(0.0) : index.n;
    const auto rt = transfer_matrix_rt(n0, omega / medium.speed_of_light(), medium.half_length());
    fixture.entries.push_back({omega, rt.R, rt.T});
  }
  return fixture;
}

std::string serialize_fixture(const GoldenFixture& fixture) {
  using ordered = nlohmann::ordered_json;
  ordered doc;
  doc["format"] = "slabqio-golden";
  doc["version"] = GoldenFixture::kVersion;
  ordered prov;
  prov["oracle"] = fixture.oracle;
  prov["tolerance"] = fixture.tolerance;
  prov["note"] = fixture.note;
  prov["medium"] = ordered::parse(medium_to_json(fixture.medium).dump());
  doc["provenance"] = std::move(prov);
  ordered entries = ordered::array();
  for (const auto& e : fixture.entries) {
    ordered row;
    row["omega"] = e.omega;
    row["R"] = {e.R.real(), e.R.imag()};
    row["T"] = {e.T.real(), e.T.imag()};
    entries.push_back(std::move(row));
  }
  doc["entries"] = std::move(entries);
  return doc.dump(2) + "\n";
}

GoldenFixture parse_fixture(std::string_view text) {
  const json doc = parse_json(text, ErrorCode::FixtureError);
  const auto fail = [](const std::string& what) { throw Error(ErrorCode::FixtureError, what); };
  if (!doc.is_object() || doc.value("format", "") != "slabqio-golden") fail("not a slabqio golden fixture");
  if (doc.value("version", 0) != GoldenFixture::kVersion) fail("unsupported fixture version");
  if (!doc.contains("provenance") || !doc["provenance"].is_object()) fail("/provenance missing");
  const json& prov = doc["provenance"];

  GoldenFixture fixture;
  try {
    fixture.medium = medium_from_json(prov.at("medium"));
  } catch (const Error& e) {
    fail(std::string("/provenance/medium: ") + e.what());
  } catch (const json::exception&) {
    fail("/provenance/medium missing");
  }
  fixture.oracle = prov.value("oracle", "");
  fixture.tolerance = prov.value("tolerance", 0.0);
  fixture.note = prov.value("note", "");
  if (!(fixture.tolerance > 0.0)) fail("/provenance/tolerance must be positive");
  if (!doc.contains("entries") || !doc["entries"].is_array()) fail("/entries missing");
  for (std::size_t i = 0; i < doc["entries"].size(); ++i) {
    const json& e = doc["entries"][i];
    const std::string pointer = "/entries/" + std::to_string(i);
    if (!e.is_object() || !e.contains("omega") || !e["omega"].is_number()) fail(pointer + "/omega missing");
    GoldenEntry entry;
    entry.omega = e["omega"].get<double>();
    entry.R = complex_from_json(e.value("R", json()), pointer + "/R");
    entry.T = complex_from_json(e.value("T", json()), pointer + "/T");
    fixture.entries.push_back(entry);
  }
  return fixture;
}

double fixture_max_deviation(const GoldenFixture& fixture) {
  const Medium medium(fixture.medium);
  double worst = 0.0;
  for (const auto& e : fixture.entries) {
    const ScatterSolution sol = scatter_coefficients(medium, e.omega);
    worst = std::max({worst, std::abs(sol.R.real() - e.R.real()), std::abs(sol.R.imag() - e.R.imag()),
                      std::abs(sol.T.real() - e.T.real()), std::abs(sol.T.imag() - e.T.imag())});
  }
  return worst;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace slabqio

// slabqio: sweeps, pulse traces and verification reports for a dielectric slab.
//
// Exit codes: 0 success, 1 verification failure or numerical error,
// 2 usage, configuration or input-file error.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "slabqio/slabqio.h"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct CliError {
  sqio_status status;
  std::string message;
};

void check(sqio_status status) {
  if (status != SQIO_OK) throw CliError{status, sqio_last_error()};
}

[[noreturn]] void usage_error(const std::string& message) {
  throw CliError{SQIO_ERR_RANGE, message};
}

int exit_code_for(sqio_status status) {
  switch (status) {
    case SQIO_ERR_CONFIG:
    case SQIO_ERR_RANGE:
    case SQIO_ERR_INVALID_ARGUMENT:
    case SQIO_ERR_PULSE_FILE:
    case SQIO_ERR_FIXTURE:
    case SQIO_ERR_DETECTOR_INSIDE_MEDIUM:
      return kExitUsage;
    default:
      return kExitFailure;
  }
}

struct MediumDeleter {
  void operator()(sqio_medium* m) const { sqio_medium_free(m); }
};
struct PulseDeleter {
  void operator()(sqio_pulse* p) const { sqio_pulse_free(p); }
};
struct TraceDeleter {
  void operator()(sqio_trace* t) const { sqio_trace_free(t); }
};
struct ReportDeleter {
  void operator()(sqio_report* r) const { sqio_report_free(r); }
};
using MediumPtr = std::unique_ptr<sqio_medium, MediumDeleter>;

struct GlobalOptions {
  std::string config;
  std::string out;
  std::string format = "csv";
  unsigned threads = 0;
  bool no_timestamp = false;
};

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string render_csv(const Table& t) {
  std::string out;
  for (const auto& [key, value] : t.metadata) out += fmt::format("# {}: {}\n", key, value);
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      if (const double* d = std::get_if<double>(&row[i])) {
        out += format_number(*d);
      } else {
        out += csv_field(std::get<std::string>(row[i]));
      }
    }
    out += '\n';
  }
  return out;
}

std::string render_json(const Table& t) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [key, value] : t.metadata) meta[key] = value;
  doc["metadata"] = meta;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (const double* d = std::get_if<double>(&row[i])) {
        if (std::isfinite(*d)) {
          obj[t.columns[i]] = *d;
        } else {
          obj[t.columns[i]] = format_number(*d);
        }
      } else {
        obj[t.columns[i]] = std::get<std::string>(row[i]);
      }
    }
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

void emit(const GlobalOptions& g, const std::string& text) {
  if (g.out.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    std::fflush(stdout);
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw CliError{SQIO_ERR_INVALID_ARGUMENT, "cannot write " + g.out};
  f << text;
}

void emit_table(const GlobalOptions& g, const Table& t) {
  emit(g, g.format == "json" ? render_json(t) : render_csv(t));
}

MediumPtr load_medium(const GlobalOptions& g) {
  if (g.config.empty()) throw CliError{SQIO_ERR_CONFIG, "--config is required"};
  sqio_medium* m = nullptr;
  check(sqio_medium_from_file(g.config.c_str(), &m));
  return MediumPtr(m);
}

unsigned threads_of(const GlobalOptions& g) {
  return g.threads == 0 ? sqio_default_threads() : g.threads;
}

std::vector<std::pair<std::string, std::string>> base_metadata(const GlobalOptions& g,
                                                               const sqio_medium* m,
                                                               const std::string& command) {
  std::vector<std::pair<std::string, std::string>> meta;
  meta.emplace_back("generator", fmt::format("slabqio {}", sqio_version()));
  meta.emplace_back("command", command);
  if (m) {
    char hash[17];
    check(sqio_medium_hash(m, hash));
    sqio_medium_info info{};
    check(sqio_medium_info_get(m, &info));
    meta.emplace_back("config_hash", hash);
    meta.emplace_back("unit_mode", info.unit_mode == SQIO_UNITS_SI ? "SI" : "scaled");
    meta.emplace_back("half_length_L", format_number(info.half_length_L));
    meta.emplace_back("species", std::to_string(info.species_count));
  }
  if (!g.no_timestamp) {
    meta.emplace_back("generated",
                      fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::time(nullptr))));
  }
  return meta;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t points, const char* what) {
  if (!(lo > 0.0) || !(lo < hi) || !std::isfinite(hi)) {
    usage_error(fmt::format("{} range needs 0 < min < max", what));
  }
  if (points < 2) usage_error("--points must be at least 2");
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = i + 1 == points ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return grid;
}

std::vector<double> span_grid(double lo, double hi, std::size_t points) {
  if (points == 1) return {lo};
  if (!(lo <= hi)) usage_error("grid needs min <= max");
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = i + 1 == points ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return grid;
}

void note_skipped(const std::vector<double>& skipped) {
  if (skipped.empty()) return;
  std::string list;
  for (std::size_t i = 0; i < skipped.size(); ++i) list += (i ? " " : "") + format_number(skipped[i]);
  std::cerr << "note: skipped " << skipped.size() << " band-edge pole frequencies: " << list << "\n";
}

struct SweepArgs {
  double omega_min = 0.0;
  double omega_max = 0.0;
  std::size_t points = 0;
  bool at_resonance = false;
};

void add_sweep_options(CLI::App* cmd, SweepArgs& a) {
  cmd->add_option("--omega-min", a.omega_min, "Lowest frequency");
  cmd->add_option("--omega-max", a.omega_max, "Highest frequency");
  cmd->add_option("--points", a.points, "Grid points (>= 2)");
}

int run_index(const GlobalOptions& g, const SweepArgs& a) {
  const MediumPtr m = load_medium(g);
  const auto grid = linear_grid(a.omega_min, a.omega_max, a.points, "frequency");
  std::vector<sqio_index> values(grid.size());
  check(sqio_index_sweep(m.get(), grid.data(), grid.size(), threads_of(g), values.data()));

  Table t;
  t.metadata = base_metadata(g, m.get(), "index");
  t.metadata.emplace_back("points", std::to_string(grid.size()));
  t.columns = {"omega", "re_n", "im_n", "band_kind"};
  std::vector<double> skipped;
  for (const auto& v : values) {
    if (v.kind == SQIO_BAND_POLE_DIVERGENT) {
      skipped.push_back(v.omega);
      continue;
    }
    t.rows.push_back({v.omega, v.n.re, v.n.im, std::string(sqio_band_kind_name(v.kind))});
  }
  if (!skipped.empty()) t.metadata.emplace_back("skipped_poles", std::to_string(skipped.size()));
  emit_table(g, t);
  note_skipped(skipped);
  return 0;
}

int run_scatter(const GlobalOptions& g, const SweepArgs& a) {
  const MediumPtr m = load_medium(g);
  Table t;
  t.metadata = base_metadata(g, m.get(), a.at_resonance ? "scatter --at-resonance" : "scatter");
  t.columns = {"omega", "re_n", "im_n", "band_kind", "re_R", "im_R", "re_T", "im_T", "unitarity"};

  if (a.at_resonance) {
    sqio_medium_info info{};
    check(sqio_medium_info_get(m.get(), &info));
    // Closed forms evaluated exactly at each bare resonance.
    for (std::size_t i = 0; i < info.species_count; ++i) {
      double omega = 0.0;
      double g_nu = 0.0;
      check(sqio_medium_species(m.get(), i, &omega, &g_nu));
      sqio_complex R{};
      sqio_complex T{};
      check(sqio_resonance_coefficients(omega, info.half_length_L, info.speed_of_light, &R, &T));
      const double u = R.re * R.re + R.im * R.im + T.re * T.re + T.im * T.im;
      t.rows.push_back({omega, 0.0, 0.0, std::string(sqio_band_kind_name(SQIO_BAND_RESONANCE_ZERO)),
                        R.re, R.im, T.re, T.im, u});
    }
    t.metadata.emplace_back("points", std::to_string(t.rows.size()));
    emit_table(g, t);
    return 0;
  }

  const auto grid = linear_grid(a.omega_min, a.omega_max, a.points, "frequency");
  std::vector<sqio_scatter> values(grid.size());
  check(sqio_scatter_sweep(m.get(), grid.data(), grid.size(), threads_of(g), values.data()));
  t.metadata.emplace_back("points", std::to_string(grid.size()));
  std::vector<double> skipped;
  for (const auto& v : values) {
    if (v.kind == SQIO_BAND_POLE_DIVERGENT) {
      skipped.push_back(v.omega);
      continue;
    }
    const double u = v.R.re * v.R.re + v.R.im * v.R.im + v.T.re * v.T.re + v.T.im * v.T.im;
    t.rows.push_back({v.omega, v.n0.re, v.n0.im, std::string(sqio_band_kind_name(v.kind)), v.R.re,
                      v.R.im, v.T.re, v.T.im, u});
  }
  if (!skipped.empty()) t.metadata.emplace_back("skipped_poles", std::to_string(skipped.size()));
  emit_table(g, t);
  note_skipped(skipped);
  return 0;
}

int run_bands(const GlobalOptions& g, double omega_max) {
  const MediumPtr m = load_medium(g);
  sqio_medium_info info{};
  check(sqio_medium_info_get(m.get(), &info));
  if (omega_max <= 0.0) {
    double top = 0.0;
    double g_nu = 0.0;
    if (info.species_count > 0) check(sqio_medium_species(m.get(), info.species_count - 1, &top, &g_nu));
    omega_max = top > 0.0 ? 2.0 * top : 1.0;
  }
  std::size_t count = 0;
  check(sqio_band_structure(m.get(), omega_max, nullptr, 0, &count));
  std::vector<sqio_band> bands(count);
  check(sqio_band_structure(m.get(), omega_max, bands.data(), bands.size(), &count));

  Table t;
  t.metadata = base_metadata(g, m.get(), "bands");
  t.metadata.emplace_back("omega_max", format_number(omega_max));
  t.columns = {"lo", "hi", "kind", "edge", "omega_res"};
  for (const auto& b : bands) {
    if (b.kind == SQIO_BAND_ABSORPTION) {
      t.rows.push_back({b.lo, b.hi, std::string(sqio_band_kind_name(b.kind)), b.lo, b.hi});
    } else {
      t.rows.push_back({b.lo, b.hi, std::string(sqio_band_kind_name(b.kind)), NAN, NAN});
    }
  }
  emit_table(g, t);
  return 0;
}

struct PulseArgs {
  std::string pulse_file;
  double detector_x = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  std::size_t points = 0;
  std::string prefactor = "normalized";
};

int run_pulse(const GlobalOptions& g, const PulseArgs& a) {
  const MediumPtr m = load_medium(g);
  sqio_pulse* raw = nullptr;
  check(sqio_pulse_from_file(a.pulse_file.c_str(), &raw));
  const std::unique_ptr<sqio_pulse, PulseDeleter> pulse(raw);
  if (a.points < 1) usage_error("--points must be at least 1");
  const auto t_grid = span_grid(a.t_min, a.t_max, a.points);
  const sqio_prefactor mode =
      a.prefactor == "physical" ? SQIO_PREFACTOR_PHYSICAL : SQIO_PREFACTOR_NORMALIZED;

  sqio_trace* traw = nullptr;
  check(sqio_detection_rate(m.get(), pulse.get(), a.detector_x, t_grid.data(), t_grid.size(), mode,
                            threads_of(g), &traw));
  const std::unique_ptr<sqio_trace, TraceDeleter> trace(traw);
  double incident = 0.0;
  double transmitted = 0.0;
  double reflected = 0.0;
  check(sqio_energy_budget(m.get(), pulse.get(), &incident, &transmitted, &reflected));

  Table t;
  t.metadata = base_metadata(g, m.get(), "pulse");
  t.metadata.emplace_back("pulse_points", std::to_string(sqio_pulse_size(pulse.get())));
  t.metadata.emplace_back("time_points", std::to_string(t_grid.size()));
  t.metadata.emplace_back("detector_x", format_number(a.detector_x));
  t.metadata.emplace_back("prefactor", a.prefactor);
  t.metadata.emplace_back("energy_incident", format_number(incident));
  t.metadata.emplace_back("energy_transmitted", format_number(transmitted));
  t.metadata.emplace_back("energy_reflected", format_number(reflected));
  t.metadata.emplace_back("energy_budget", format_number((transmitted + reflected) / incident));
  const std::size_t nudged = sqio_trace_nudged_count(trace.get());
  std::string nudged_list;
  for (std::size_t i = 0; i < nudged; ++i) {
    nudged_list += (i ? " " : "") + format_number(sqio_trace_nudged(trace.get())[i]);
  }
  t.metadata.emplace_back("nudged_frequencies", nudged == 0 ? "none" : nudged_list);
  if (nudged > 0) std::cerr << "warning: " << nudged << " pulse frequencies nudged off a band-edge pole\n";

  t.columns = {"t", "rate"};
  const double* times = sqio_trace_times(trace.get());
  const double* rates = sqio_trace_rates(trace.get());
  for (std::size_t i = 0; i < sqio_trace_size(trace.get()); ++i) t.rows.push_back({times[i], rates[i]});
  emit_table(g, t);
  return 0;
}

struct GreensArgs {
  double omega = 0.0;
  double x_min = -2.0;
  double x_max = 2.0;
  std::size_t nx = 41;
  double xs_min = -2.0;
  double xs_max = 2.0;
  std::size_t nxs = 41;
};

int run_greens(const GlobalOptions& g, const GreensArgs& a) {
  const MediumPtr m = load_medium(g);
  if (!(a.omega > 0.0)) usage_error("--omega must be positive");
  if (a.nx < 1 || a.nxs < 1) usage_error("grid sizes must be at least 1");
  const auto x = span_grid(a.x_min, a.x_max, a.nx);
  const auto xs = span_grid(a.xs_min, a.xs_max, a.nxs);
  std::vector<sqio_complex> values(x.size() * xs.size());
  check(sqio_greens_grid(m.get(), a.omega, x.data(), x.size(), xs.data(), xs.size(), threads_of(g),
                         values.data()));
  Table t;
  t.metadata = base_metadata(g, m.get(), "greens");
  t.metadata.emplace_back("omega", format_number(a.omega));
  t.metadata.emplace_back("grid", fmt::format("{}x{}", x.size(), xs.size()));
  t.columns = {"x", "x_src", "re_G", "im_G"};
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < xs.size(); ++j) {
      const auto& v = values[i * xs.size() + j];
      t.rows.push_back({x[i], xs[j], v.re, v.im});
    }
  }
  emit_table(g, t);
  return 0;
}

int run_verify(const GlobalOptions& g, const std::string& level,
               const std::vector<std::string>& fixtures) {
  const MediumPtr m = load_medium(g);
  std::vector<const char*> paths;
  for (const auto& f : fixtures) paths.push_back(f.c_str());
  sqio_report* raw = nullptr;
  check(sqio_verify(m.get(), level == "full" ? SQIO_VERIFY_FULL : SQIO_VERIFY_QUICK, paths.data(),
                    paths.size(), threads_of(g), &raw));
  const std::unique_ptr<sqio_report, ReportDeleter> report(raw);

  Table t;
  t.metadata = base_metadata(g, m.get(), "verify --level " + level);
  t.columns = {"property", "measured", "tolerance", "status", "detail"};
  for (std::size_t i = 0; i < sqio_report_size(report.get()); ++i) {
    sqio_check c{};
    check(sqio_report_item(report.get(), i, &c));
    t.rows.push_back({std::string(c.property), c.measured, c.tolerance,
                      std::string(c.passed ? "PASS" : "FAIL"), std::string(c.detail)});
  }
  const bool passed = sqio_report_passed(report.get()) != 0;
  t.metadata.emplace_back("result", passed ? "PASS" : "FAIL");
  emit_table(g, t);
  if (!passed) std::cerr << "verification failed\n";
  return passed ? 0 : kExitFailure;
}

int run_fixture(const GlobalOptions& g, const SweepArgs& a, const std::vector<double>& omegas,
                const std::string& note) {
  const MediumPtr m = load_medium(g);
  std::vector<double> grid;
  if (a.points > 0) grid = linear_grid(a.omega_min, a.omega_max, a.points, "frequency");
  grid.insert(grid.end(), omegas.begin(), omegas.end());
  std::sort(grid.begin(), grid.end());
  char* json = nullptr;
  check(sqio_fixture_make(m.get(), grid.data(), grid.size(), note.c_str(), &json));
  const std::unique_ptr<char, void (*)(char*)> owned(json, sqio_string_free);
  emit(g, json);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dielectric slab scattering: sweeps, pulse traces and verification"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config, "Medium configuration (JSON)");
  app.add_option("--out", g.out, "Write output here instead of stdout");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", g.threads, "Worker threads (default: all cores)");
  app.add_flag("--no-timestamp", g.no_timestamp, "Omit the generation time from the metadata");

  SweepArgs index_args;
  auto* index = app.add_subcommand("index", "Refractive index over a frequency grid");
  add_sweep_options(index, index_args);
  for (auto* o : index->get_options()) {
    if (o->get_name() != "--help") o->required();
  }

  SweepArgs scatter_args;
  auto* scatter = app.add_subcommand("scatter", "Reflection and transmission over a frequency grid");
  add_sweep_options(scatter, scatter_args);
  scatter->add_flag("--at-resonance", scatter_args.at_resonance,
                    "Evaluate exactly at each bare resonance instead of a grid");

  double bands_max = 0.0;
  auto* bands = app.add_subcommand("bands", "Transmission and absorption bands");
  bands->add_option("--omega-max", bands_max, "Upper end of the report (default 2 max Omega)");

  PulseArgs pulse_args;
  auto* pulse = app.add_subcommand("pulse", "Photodetection rate for a coherent pulse");
  pulse->add_option("--pulse", pulse_args.pulse_file, "Pulse spectrum file (k, Re f, Im f)")->required();
  pulse->add_option("--detector-x", pulse_args.detector_x, "Detector position (> L)")->required();
  pulse->add_option("--t-min", pulse_args.t_min, "First time")->required();
  pulse->add_option("--t-max", pulse_args.t_max, "Last time")->required();
  pulse->add_option("--points", pulse_args.points, "Time points")->required();
  pulse->add_option("--prefactor", pulse_args.prefactor, "Rate prefactor")
      ->check(CLI::IsMember({"normalized", "physical"}));

  GreensArgs greens_args;
  auto* greens = app.add_subcommand("greens", "Green's function on an (x, x_src) grid");
  greens->add_option("--omega", greens_args.omega, "Frequency")->required();
  greens->add_option("--x-min", greens_args.x_min, "Field point range start");
  greens->add_option("--x-max", greens_args.x_max, "Field point range end");
  greens->add_option("--nx", greens_args.nx, "Field points");
  greens->add_option("--xs-min", greens_args.xs_min, "Source point range start");
  greens->add_option("--xs-max", greens_args.xs_max, "Source point range end");
  greens->add_option("--nxs", greens_args.nxs, "Source points");

  std::string level = "quick";
  std::vector<std::string> fixtures;
  auto* verify = app.add_subcommand("verify", "Run the verification checks");
  verify->add_option("--level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  verify->add_option("--fixture", fixtures, "Golden fixture to replay (repeatable)");

  SweepArgs fixture_args;
  std::vector<double> fixture_omegas;
  std::string fixture_note;
  auto* fixture = app.add_subcommand("fixture", "Write a golden fixture from the transfer-matrix oracle");
  add_sweep_options(fixture, fixture_args);
  fixture->add_option("--omega", fixture_omegas, "Explicit frequency (repeatable)");
  fixture->add_option("--note", fixture_note, "Free-text note stored with the fixture");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*index) return run_index(g, index_args);
    if (*scatter) {
      if (!scatter_args.at_resonance && scatter_args.points == 0) {
        usage_error("scatter needs --omega-min, --omega-max and --points, or --at-resonance");
      }
      return run_scatter(g, scatter_args);
    }
    if (*bands) return run_bands(g, bands_max);
    if (*pulse) return run_pulse(g, pulse_args);
    if (*greens) return run_greens(g, greens_args);
    if (*verify) return run_verify(g, level, fixtures);
    if (*fixture) {
      if (fixture_omegas.empty() && fixture_args.points == 0) {
        usage_error("fixture needs --omega values or a --omega-min/--omega-max/--points grid");
      }
      return run_fixture(g, fixture_args, fixture_omegas, fixture_note);
    }
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return exit_code_for(e.status);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

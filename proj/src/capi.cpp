#include "slabqio/slabqio.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "slabqio/errors.hpp"
#include "slabqio/io.hpp"
#include "slabqio/medium.hpp"
#include "slabqio/oracle.hpp"
#include "slabqio/parallel.hpp"
#include "slabqio/quantum_io.hpp"
#include "slabqio/slab.hpp"
#include "slabqio/verify.hpp"

struct sqio_medium {
  slabqio::Medium medium;
};

struct sqio_pulse {
  slabqio::PulseSpectrum pulse;
};

struct sqio_trace {
  slabqio::DetectionTrace trace;
};

struct sqio_report {
  std::vector<slabqio::CheckResult> results;
};

namespace {

using namespace slabqio;

thread_local std::string g_last_error;

sqio_status fail(sqio_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <class F>
sqio_status guarded(F&& f) noexcept {
  try {
    f();
    return SQIO_OK;
  } catch (const Error& e) {
    return fail(static_cast<sqio_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(SQIO_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SQIO_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SQIO_ERR_INTERNAL, "unknown failure");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

sqio_complex to_c(complex z) { return {z.real(), z.imag()}; }
complex from_c(sqio_complex z) { return {z.re, z.im}; }

sqio_band_kind to_c(BandKind k) {
  switch (k) {
    case BandKind::Transmission: return SQIO_BAND_TRANSMISSION;
    case BandKind::Absorption: return SQIO_BAND_ABSORPTION;
    case BandKind::ResonanceZero: return SQIO_BAND_RESONANCE_ZERO;
    case BandKind::PoleDivergent: return SQIO_BAND_POLE_DIVERGENT;
  }
  return SQIO_BAND_TRANSMISSION;
}

RampShape from_c(sqio_ramp_shape s) {
  return s == SQIO_RAMP_SMOOTHSTEP ? RampShape::Smoothstep : RampShape::Linear;
}

PrefactorMode from_c(sqio_prefactor p) {
  return p == SQIO_PREFACTOR_PHYSICAL ? PrefactorMode::Physical : PrefactorMode::Normalized;
}

sqio_scatter to_c(const ScatterSolution& s) {
  return {s.omega,          s.k,           to_c(s.n0),         to_c(s.kappa),
          to_c(s.R),        to_c(s.T),     to_c(s.B_r_left),   to_c(s.B_l_left),
          to_c(s.B_r_right), to_c(s.B_l_right), to_c(s.D),    to_c(s.band_kind)};
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <class T>
void copy_out(const std::vector<T>& values, T* out, std::size_t capacity, std::size_t* count) {
  require(count != nullptr, "count pointer is null");
  require(out != nullptr || capacity == 0, "output buffer is null");
  *count = values.size();
  for (std::size_t i = 0; i < values.size() && i < capacity; ++i) out[i] = values[i];
}

}  // namespace

extern "C" {

const char* sqio_last_error(void) { return g_last_error.c_str(); }

const char* sqio_version(void) { return "1.0.0"; }

const char* sqio_status_name(sqio_status status) {
  switch (status) {
    case SQIO_OK: return "OK";
    case SQIO_ERR_INTERNAL: return "Internal";
    default: break;
  }
  const int code = static_cast<int>(status);
  if (code >= 1 && code <= static_cast<int>(ErrorCode::UnitarityViolation)) {
    return error_code_name(static_cast<ErrorCode>(code));
  }
  return "Unknown";
}

const char* sqio_band_kind_name(sqio_band_kind kind) {
  switch (kind) {
    case SQIO_BAND_TRANSMISSION: return band_kind_name(BandKind::Transmission);
    case SQIO_BAND_ABSORPTION: return band_kind_name(BandKind::Absorption);
    case SQIO_BAND_RESONANCE_ZERO: return band_kind_name(BandKind::ResonanceZero);
    case SQIO_BAND_POLE_DIVERGENT: return band_kind_name(BandKind::PoleDivergent);
  }
  return "Unknown";
}

void sqio_string_free(char* s) { std::free(s); }

sqio_status sqio_medium_from_json(const char* text, sqio_medium** out) {
  return guarded([&] {
    require(text && out, "null argument");
    *out = new sqio_medium{Medium(parse_medium_config(text))};
  });
}

sqio_status sqio_medium_from_file(const char* path, sqio_medium** out) {
  return guarded([&] {
    require(path && out, "null argument");
    std::string text;
    try {
      text = read_text_file(path);
    } catch (const Error& e) {
      throw Error(ErrorCode::ConfigError, std::string("cannot read config ") + path);
    }
    *out = new sqio_medium{Medium(parse_medium_config(text))};
  });
}

void sqio_medium_free(sqio_medium* medium) { delete medium; }

sqio_status sqio_medium_info_get(const sqio_medium* medium, sqio_medium_info* out) {
  return guarded([&] {
    require(medium && out, "null argument");
    const auto& spec = medium->medium.spec();
    out->unit_mode = spec.unit_mode == UnitMode::SI ? SQIO_UNITS_SI : SQIO_UNITS_SCALED;
    out->half_length_L = spec.half_length_L;
    out->cross_section_A = spec.cross_section_A;
    out->speed_of_light = medium->medium.speed_of_light();
    out->species_count = spec.species.size();
  });
}

sqio_status sqio_medium_species(const sqio_medium* medium, size_t index, double* omega_res,
                                double* coupling_g) {
  return guarded([&] {
    require(medium && omega_res && coupling_g, "null argument");
    const auto& species = medium->medium.spec().species;
    if (index >= species.size()) throw Error(ErrorCode::RangeError, "species index out of range");
    *omega_res = species[index].omega_res;
    *coupling_g = species[index].coupling_g;
  });
}

sqio_status sqio_medium_canonical_json(const sqio_medium* medium, char** out) {
  return guarded([&] {
    require(medium && out, "null argument");
    *out = duplicate(canonical_medium_json(medium->medium.spec()));
  });
}

sqio_status sqio_medium_hash(const sqio_medium* medium, char out[17]) {
  return guarded([&] {
    require(medium && out, "null argument");
    const std::string hex = hex_hash(config_hash(medium->medium.spec()));
    std::memcpy(out, hex.c_str(), 17);
  });
}

sqio_status sqio_sellmeir_bracket(const sqio_medium* medium, double omega, double* out) {
  return guarded([&] {
    require(medium && out, "null argument");
    *out = sellmeir_bracket(medium->medium, omega);
  });
}

sqio_status sqio_refractive_index(const sqio_medium* medium, double omega, sqio_index* out) {
  return guarded([&] {
    require(medium && out, "null argument");
    const IndexValue v = refractive_index(medium->medium, omega);
    *out = {omega, to_c(v.n), to_c(v.band_kind)};
  });
}

sqio_status sqio_dispersion_omega_of_k(const sqio_medium* medium, double k, double* out,
                                       size_t capacity, size_t* count) {
  return guarded([&] {
    require(medium != nullptr, "null medium");
    copy_out(dispersion_omega_of_k(medium->medium, k), out, capacity, count);
  });
}

sqio_status sqio_band_edges(const sqio_medium* medium, double* out, size_t capacity,
                            size_t* count) {
  return guarded([&] {
    require(medium != nullptr, "null medium");
    const auto edges = medium->medium.band_edges();
    copy_out(std::vector<double>(edges.begin(), edges.end()), out, capacity, count);
  });
}

sqio_status sqio_band_structure(const sqio_medium* medium, double omega_max, sqio_band* out,
                                size_t capacity, size_t* count) {
  return guarded([&] {
    require(medium != nullptr, "null medium");
    std::vector<sqio_band> bands;
    for (const Band& b : band_structure(medium->medium, omega_max)) {
      bands.push_back({b.lo, b.hi, to_c(b.kind)});
    }
    copy_out(bands, out, capacity, count);
  });
}

sqio_status sqio_scatter_coefficients(const sqio_medium* medium, double omega, sqio_scatter* out) {
  return guarded([&] {
    require(medium && out, "null argument");
    *out = to_c(scatter_coefficients(medium->medium, omega));
  });
}

sqio_status sqio_resonance_coefficients(double omega, double half_length_L, double c,
                                        sqio_complex* R, sqio_complex* T) {
  return guarded([&] {
    require(R && T, "null argument");
    const auto rt = resonance_coefficients(omega, half_length_L, c);
    *R = to_c(rt.R);
    *T = to_c(rt.T);
  });
}

sqio_status sqio_mode_function(const sqio_medium* medium, double omega, sqio_side side, double x,
                               sqio_complex* value, sqio_complex* derivative,
                               sqio_region* region) {
  return guarded([&] {
    require(medium && value, "null argument");
    const auto s = mode_function(medium->medium, omega,
                                 side == SQIO_SIDE_RIGHT ? Side::Right : Side::Left, x);
    *value = to_c(s.value);
    if (derivative) *derivative = to_c(s.derivative);
    if (region) *region = static_cast<sqio_region>(static_cast<int>(s.region));
  });
}

sqio_status sqio_greens_function(const sqio_medium* medium, double omega, double x, double x_src,
                                 sqio_complex* out) {
  return guarded([&] {
    require(medium && out, "null argument");
    *out = to_c(greens_function(medium->medium, omega, x, x_src).value);
  });
}

sqio_status sqio_index_sweep(const sqio_medium* medium, const double* omegas, size_t count,
                             unsigned threads, sqio_index* out) {
  return guarded([&] {
    require(medium && (count == 0 || (omegas && out)), "null argument");
    parallel_for(count, threads, [&](std::size_t i) {
      const IndexValue v = refractive_index(medium->medium, omegas[i]);
      out[i] = {omegas[i], to_c(v.n), to_c(v.band_kind)};
    });
  });
}

sqio_status sqio_scatter_sweep(const sqio_medium* medium, const double* omegas, size_t count,
                               unsigned threads, sqio_scatter* out) {
  return guarded([&] {
    require(medium && (count == 0 || (omegas && out)), "null argument");
    parallel_for(count, threads, [&](std::size_t i) {
      const IndexValue v = refractive_index(medium->medium, omegas[i]);
      if (v.band_kind == BandKind::PoleDivergent) {
        out[i] = sqio_scatter{};
        out[i].omega = omegas[i];
        out[i].kind = SQIO_BAND_POLE_DIVERGENT;
        return;
      }
      out[i] = to_c(scatter_coefficients(medium->medium, omegas[i]));
    });
  });
}

sqio_status sqio_greens_grid(const sqio_medium* medium, double omega, const double* x, size_t nx,
                             const double* x_src, size_t nsrc, unsigned threads,
                             sqio_complex* out) {
  return guarded([&] {
    require(medium && (nx == 0 || x) && (nsrc == 0 || x_src) && (nx * nsrc == 0 || out),
            "null argument");
    const ScatterSolution sol = scatter_coefficients(medium->medium, omega);
    parallel_for(nx, threads, [&](std::size_t i) {
      for (std::size_t j = 0; j < nsrc; ++j) {
        out[i * nsrc + j] = to_c(greens_function(medium->medium, sol, x[i], x_src[j]).value);
      }
    });
  });
}

sqio_status sqio_s_matrix(const sqio_medium* medium, double omega, sqio_complex s[4]) {
  return guarded([&] {
    require(medium && s, "null argument");
    const SMatrix m = s_matrix(medium->medium, omega);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) s[2 * i + j] = to_c(m.matrix[i][j]);
  });
}

sqio_status sqio_transform_coherent(const sqio_complex s[4], const sqio_complex in[2],
                                    sqio_complex out[2]) {
  return guarded([&] {
    require(s && in && out, "null argument");
    SMatrix m;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m.matrix[i][j] = from_c(s[2 * i + j]);
    const Amplitudes r = transform_coherent(m, {from_c(in[0]), from_c(in[1])});
    out[0] = to_c(r[0]);
    out[1] = to_c(r[1]);
  });
}

sqio_status sqio_pulse_from_arrays(const double* k, const double* f_re, const double* f_im,
                                   size_t count, sqio_pulse** out) {
  return guarded([&] {
    require(k && f_re && out, "null argument");
    std::vector<double> kk(k, k + count);
    std::vector<complex> f(count);
    for (std::size_t i = 0; i < count; ++i) f[i] = {f_re[i], f_im ? f_im[i] : 0.0};
    *out = new sqio_pulse{PulseSpectrum(std::move(kk), std::move(f))};
  });
}

sqio_status sqio_pulse_from_text(const char* text, sqio_pulse** out) {
  return guarded([&] {
    require(text && out, "null argument");
    *out = new sqio_pulse{parse_pulse_file(text)};
  });
}

sqio_status sqio_pulse_from_file(const char* path, sqio_pulse** out) {
  return guarded([&] {
    require(path && out, "null argument");
    std::string text;
    try {
      text = read_text_file(path);
    } catch (const Error&) {
      throw Error(ErrorCode::PulseFileError, std::string("cannot read pulse file ") + path);
    }
    *out = new sqio_pulse{parse_pulse_file(text)};
  });
}

sqio_status sqio_pulse_gaussian(double k0, double sigma_k, size_t points,
                                double half_width_sigmas, sqio_pulse** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = new sqio_pulse{PulseSpectrum::gaussian(k0, sigma_k, points, half_width_sigmas)};
  });
}

void sqio_pulse_free(sqio_pulse* pulse) { delete pulse; }

size_t sqio_pulse_size(const sqio_pulse* pulse) { return pulse ? pulse->pulse.k_grid().size() : 0; }

sqio_status sqio_detection_rate(const sqio_medium* medium, const sqio_pulse* pulse,
                                double detector_x, const double* t, size_t nt, sqio_prefactor mode,
                                unsigned threads, sqio_trace** out) {
  return guarded([&] {
    require(medium && pulse && out && (nt == 0 || t), "null argument");
    *out = new sqio_trace{detection_rate(medium->medium, pulse->pulse, detector_x,
                                         std::span<const double>(t, nt), from_c(mode), threads)};
  });
}

void sqio_trace_free(sqio_trace* trace) { delete trace; }
size_t sqio_trace_size(const sqio_trace* trace) { return trace ? trace->trace.t_grid.size() : 0; }
const double* sqio_trace_times(const sqio_trace* trace) {
  return trace ? trace->trace.t_grid.data() : nullptr;
}
const double* sqio_trace_rates(const sqio_trace* trace) {
  return trace ? trace->trace.rate_values.data() : nullptr;
}
size_t sqio_trace_nudged_count(const sqio_trace* trace) {
  return trace ? trace->trace.nudged_omegas.size() : 0;
}
const double* sqio_trace_nudged(const sqio_trace* trace) {
  return trace ? trace->trace.nudged_omegas.data() : nullptr;
}

sqio_status sqio_energy_budget(const sqio_medium* medium, const sqio_pulse* pulse,
                               double* incident, double* transmitted, double* reflected) {
  return guarded([&] {
    require(medium && pulse && incident && transmitted && reflected, "null argument");
    const EnergyBudget b = energy_budget(medium->medium, pulse->pulse);
    *incident = b.incident;
    *transmitted = b.transmitted;
    *reflected = b.reflected;
  });
}

sqio_status sqio_detection_prefactor(const sqio_medium* medium, sqio_prefactor mode, double* out) {
  return guarded([&] {
    require(medium && out, "null argument");
    *out = detection_prefactor(medium->medium, from_c(mode));
  });
}

sqio_status sqio_transfer_matrix_rt(sqio_complex n0, double k, double half_length_L,
                                    sqio_complex* R, sqio_complex* T) {
  return guarded([&] {
    require(R && T, "null argument");
    const auto rt = transfer_matrix_rt(from_c(n0), k, half_length_L);
    *R = to_c(rt.R);
    *T = to_c(rt.T);
  });
}

sqio_status sqio_ode_scatter(sqio_complex n0, double half_length_L, double delta,
                             sqio_ramp_shape shape, double c, double omega, sqio_complex* R,
                             sqio_complex* T) {
  return guarded([&] {
    require(R && T, "null argument");
    const SmoothedProfile profile(from_c(n0), half_length_L, delta, from_c(shape), c);
    const auto r = ode_scatter(profile, omega);
    *R = to_c(r.R);
    *T = to_c(r.T);
  });
}

sqio_status sqio_source_integral(double half_length_L, double delta, sqio_ramp_shape shape,
                                 double c, double resonance_omega, sqio_complex* integral,
                                 sqio_complex* ur_minus_L, sqio_complex* ur_plus_L) {
  return guarded([&] {
    require(integral != nullptr, "null argument");
    const auto profile = SmoothedProfile::at_resonance(half_length_L, delta, from_c(shape), c);
    const auto r = source_integral_check(profile, resonance_omega);
    *integral = to_c(r.integral);
    if (ur_minus_L) *ur_minus_L = to_c(r.ur_minus_L);
    if (ur_plus_L) *ur_plus_L = to_c(r.ur_plus_L);
  });
}

sqio_status sqio_fixture_make(const sqio_medium* medium, const double* omegas, size_t count,
                              const char* note, char** json_out) {
  return guarded([&] {
    require(medium && json_out && (count == 0 || omegas), "null argument");
    const auto fixture = make_golden_fixture(
        medium->medium, std::span<const double>(omegas, count), note ? note : "");
    *json_out = duplicate(serialize_fixture(fixture));
  });
}

sqio_status sqio_fixture_deviation(const char* json_text, double* max_deviation,
                                   double* tolerance) {
  return guarded([&] {
    require(json_text && max_deviation, "null argument");
    const auto fixture = parse_fixture(json_text);
    *max_deviation = fixture_max_deviation(fixture);
    if (tolerance) *tolerance = fixture.tolerance;
  });
}

sqio_status sqio_verify(const sqio_medium* medium, sqio_verify_level level,
                        const char* const* fixture_paths, size_t fixture_count, unsigned threads,
                        sqio_report** out) {
  return guarded([&] {
    require(medium && out && (fixture_count == 0 || fixture_paths), "null argument");
    VerifyOptions options;
    options.level = level == SQIO_VERIFY_FULL ? VerifyLevel::Full : VerifyLevel::Quick;
    options.threads = threads;
    // An unreadable or malformed fixture is a failed check, not a usage error.
    std::vector<CheckResult> broken;
    for (std::size_t i = 0; i < fixture_count; ++i) {
      try {
        options.fixtures.push_back(parse_fixture(read_text_file(fixture_paths[i])));
      } catch (const Error& e) {
        broken.push_back({std::string("fixture_file_") + std::to_string(i), NAN, 0.0, false,
                          std::string(fixture_paths[i]) + ": " + e.what()});
      }
    }
    auto results = run_verify(medium->medium, options);
    results.insert(results.end(), broken.begin(), broken.end());
    *out = new sqio_report{std::move(results)};
  });
}

void sqio_report_free(sqio_report* report) { delete report; }

size_t sqio_report_size(const sqio_report* report) { return report ? report->results.size() : 0; }

sqio_status sqio_report_item(const sqio_report* report, size_t index, sqio_check* out) {
  return guarded([&] {
    require(report && out, "null argument");
    if (index >= report->results.size()) throw Error(ErrorCode::RangeError, "report index out of range");
    const auto& r = report->results[index];
    *out = {r.property.c_str(), r.measured, r.tolerance, r.passed ? 1 : 0, r.detail.c_str()};
  });
}

int sqio_report_passed(const sqio_report* report) {
  return report && all_passed(report->results) ? 1 : 0;
}

unsigned sqio_default_threads(void) { return default_thread_count(); }

}  // extern "C"

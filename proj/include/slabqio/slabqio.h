/* C interface to the slab scattering library.
 *
 * All functions return an sqio_status. On failure a message is available from
 * sqio_last_error() on the calling thread until the next failing call there.
 * Handles are opaque; a const handle may be shared between threads. */
#ifndef SLABQIO_H
#define SLABQIO_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(SLABQIO_BUILDING)
#define SQIO_API __declspec(dllexport)
#else
#define SQIO_API __declspec(dllimport)
#endif
#else
#define SQIO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sqio_status {
  SQIO_OK = 0,
  SQIO_ERR_INVALID_ARGUMENT = 1,
  SQIO_ERR_POLE_AT_RESONANCE = 2,
  SQIO_ERR_ROOT_BRACKETING = 3,
  SQIO_ERR_EDGE_NOT_FOUND = 4,
  SQIO_ERR_POLE_DIVERGENT = 5,
  SQIO_ERR_DETECTOR_INSIDE_MEDIUM = 6,
  SQIO_ERR_STIFFNESS = 7,
  SQIO_ERR_CONFIG = 8,
  SQIO_ERR_RANGE = 9,
  SQIO_ERR_PULSE_FILE = 10,
  SQIO_ERR_FIXTURE = 11,
  SQIO_ERR_UNITARITY = 12,
  SQIO_ERR_INTERNAL = 99
} sqio_status;

typedef enum sqio_band_kind {
  SQIO_BAND_TRANSMISSION = 0,
  SQIO_BAND_ABSORPTION = 1,
  SQIO_BAND_RESONANCE_ZERO = 2,
  SQIO_BAND_POLE_DIVERGENT = 3
} sqio_band_kind;

typedef enum sqio_unit_mode { SQIO_UNITS_SCALED = 0, SQIO_UNITS_SI = 1 } sqio_unit_mode;
typedef enum sqio_side { SQIO_SIDE_LEFT = 0, SQIO_SIDE_RIGHT = 1 } sqio_side;
typedef enum sqio_region { SQIO_REGION_I = 0, SQIO_REGION_II = 1, SQIO_REGION_III = 2 } sqio_region;
typedef enum sqio_ramp_shape { SQIO_RAMP_LINEAR = 0, SQIO_RAMP_SMOOTHSTEP = 1 } sqio_ramp_shape;
typedef enum sqio_prefactor { SQIO_PREFACTOR_NORMALIZED = 0, SQIO_PREFACTOR_PHYSICAL = 1 } sqio_prefactor;
typedef enum sqio_verify_level { SQIO_VERIFY_QUICK = 0, SQIO_VERIFY_FULL = 1 } sqio_verify_level;

typedef struct sqio_complex {
  double re;
  double im;
} sqio_complex;

typedef struct sqio_medium sqio_medium;
typedef struct sqio_pulse sqio_pulse;
typedef struct sqio_trace sqio_trace;
typedef struct sqio_report sqio_report;

typedef struct sqio_medium_info {
  sqio_unit_mode unit_mode;
  double half_length_L;
  double cross_section_A;
  double speed_of_light;
  size_t species_count;
} sqio_medium_info;

typedef struct sqio_band {
  double lo;
  double hi;
  sqio_band_kind kind;
} sqio_band;

typedef struct sqio_index {
  double omega;
  sqio_complex n;
  sqio_band_kind kind;
} sqio_index;

typedef struct sqio_scatter {
  double omega;
  double k;
  sqio_complex n0;
  sqio_complex kappa;
  sqio_complex R;
  sqio_complex T;
  sqio_complex B_r_left;
  sqio_complex B_l_left;
  sqio_complex B_r_right;
  sqio_complex B_l_right;
  sqio_complex D;
  sqio_band_kind kind;
} sqio_scatter;

typedef struct sqio_check {
  const char* property;
  double measured;
  double tolerance;
  int passed;
  const char* detail;
} sqio_check;

SQIO_API const char* sqio_last_error(void);
SQIO_API const char* sqio_version(void);
SQIO_API const char* sqio_status_name(sqio_status status);
SQIO_API const char* sqio_band_kind_name(sqio_band_kind kind);

/* Caller releases strings returned through char** with sqio_string_free. */
SQIO_API void sqio_string_free(char* s);

/* medium */
SQIO_API sqio_status sqio_medium_from_json(const char* text, sqio_medium** out);
SQIO_API sqio_status sqio_medium_from_file(const char* path, sqio_medium** out);
SQIO_API void sqio_medium_free(sqio_medium* medium);
SQIO_API sqio_status sqio_medium_info_get(const sqio_medium* medium, sqio_medium_info* out);
SQIO_API sqio_status sqio_medium_species(const sqio_medium* medium, size_t index,
                                         double* omega_res, double* coupling_g);
SQIO_API sqio_status sqio_medium_canonical_json(const sqio_medium* medium, char** out);
/* 16 hex digits plus terminator. */
SQIO_API sqio_status sqio_medium_hash(const sqio_medium* medium, char out[17]);

SQIO_API sqio_status sqio_sellmeir_bracket(const sqio_medium* medium, double omega, double* out);
SQIO_API sqio_status sqio_refractive_index(const sqio_medium* medium, double omega,
                                           sqio_index* out);
/* Fills up to capacity values and always reports the full count. */
SQIO_API sqio_status sqio_dispersion_omega_of_k(const sqio_medium* medium, double k, double* out,
                                                size_t capacity, size_t* count);
SQIO_API sqio_status sqio_band_edges(const sqio_medium* medium, double* out, size_t capacity,
                                     size_t* count);
SQIO_API sqio_status sqio_band_structure(const sqio_medium* medium, double omega_max,
                                         sqio_band* out, size_t capacity, size_t* count);

/* slab */
SQIO_API sqio_status sqio_scatter_coefficients(const sqio_medium* medium, double omega,
                                               sqio_scatter* out);
SQIO_API sqio_status sqio_resonance_coefficients(double omega, double half_length_L, double c,
                                                 sqio_complex* R, sqio_complex* T);
SQIO_API sqio_status sqio_mode_function(const sqio_medium* medium, double omega, sqio_side side,
                                        double x, sqio_complex* value, sqio_complex* derivative,
                                        sqio_region* region);
SQIO_API sqio_status sqio_greens_function(const sqio_medium* medium, double omega, double x,
                                          double x_src, sqio_complex* out);

/* Batched evaluation over a worker pool; results keep input order. Pole
 * frequencies are not errors here: they come back with kind
 * SQIO_BAND_POLE_DIVERGENT and zeroed coefficients. */
SQIO_API sqio_status sqio_index_sweep(const sqio_medium* medium, const double* omegas, size_t count,
                                      unsigned threads, sqio_index* out);
SQIO_API sqio_status sqio_scatter_sweep(const sqio_medium* medium, const double* omegas,
                                        size_t count, unsigned threads, sqio_scatter* out);
/* out[i * nsrc + j] = G(x[i], x_src[j]) */
SQIO_API sqio_status sqio_greens_grid(const sqio_medium* medium, double omega, const double* x,
                                      size_t nx, const double* x_src, size_t nsrc,
                                      unsigned threads, sqio_complex* out);

/* quantum input-output; s is row-major [[T, R], [R, T]] */
SQIO_API sqio_status sqio_s_matrix(const sqio_medium* medium, double omega, sqio_complex s[4]);
SQIO_API sqio_status sqio_transform_coherent(const sqio_complex s[4], const sqio_complex in[2],
                                             sqio_complex out[2]);

/* f_im may be null for a real spectrum. */
SQIO_API sqio_status sqio_pulse_from_arrays(const double* k, const double* f_re,
                                            const double* f_im, size_t count, sqio_pulse** out);
SQIO_API sqio_status sqio_pulse_from_text(const char* text, sqio_pulse** out);
SQIO_API sqio_status sqio_pulse_from_file(const char* path, sqio_pulse** out);
SQIO_API sqio_status sqio_pulse_gaussian(double k0, double sigma_k, size_t points,
                                         double half_width_sigmas, sqio_pulse** out);
SQIO_API void sqio_pulse_free(sqio_pulse* pulse);
SQIO_API size_t sqio_pulse_size(const sqio_pulse* pulse);

SQIO_API sqio_status sqio_detection_rate(const sqio_medium* medium, const sqio_pulse* pulse,
                                         double detector_x, const double* t, size_t nt,
                                         sqio_prefactor mode, unsigned threads, sqio_trace** out);
SQIO_API void sqio_trace_free(sqio_trace* trace);
SQIO_API size_t sqio_trace_size(const sqio_trace* trace);
SQIO_API const double* sqio_trace_times(const sqio_trace* trace);
SQIO_API const double* sqio_trace_rates(const sqio_trace* trace);
SQIO_API size_t sqio_trace_nudged_count(const sqio_trace* trace);
SQIO_API const double* sqio_trace_nudged(const sqio_trace* trace);

SQIO_API sqio_status sqio_energy_budget(const sqio_medium* medium, const sqio_pulse* pulse,
                                        double* incident, double* transmitted, double* reflected);
SQIO_API sqio_status sqio_detection_prefactor(const sqio_medium* medium, sqio_prefactor mode,
                                              double* out);

/* oracles */
SQIO_API sqio_status sqio_transfer_matrix_rt(sqio_complex n0, double k, double half_length_L,
                                             sqio_complex* R, sqio_complex* T);
SQIO_API sqio_status sqio_ode_scatter(sqio_complex n0, double half_length_L, double delta,
                                      sqio_ramp_shape shape, double c, double omega,
                                      sqio_complex* R, sqio_complex* T);
SQIO_API sqio_status sqio_source_integral(double half_length_L, double delta,
                                          sqio_ramp_shape shape, double c, double resonance_omega,
                                          sqio_complex* integral, sqio_complex* ur_minus_L,
                                          sqio_complex* ur_plus_L);

/* golden fixtures */
SQIO_API sqio_status sqio_fixture_make(const sqio_medium* medium, const double* omegas,
                                       size_t count, const char* note, char** json_out);
SQIO_API sqio_status sqio_fixture_deviation(const char* json_text, double* max_deviation,
                                            double* tolerance);

/* verification report */
SQIO_API sqio_status sqio_verify(const sqio_medium* medium, sqio_verify_level level,
                                 const char* const* fixture_paths, size_t fixture_count,
                                 unsigned threads, sqio_report** out);
SQIO_API void sqio_report_free(sqio_report* report);
SQIO_API size_t sqio_report_size(const sqio_report* report);
/* Strings stay valid until the report is freed. */
SQIO_API sqio_status sqio_report_item(const sqio_report* report, size_t index, sqio_check* out);
SQIO_API int sqio_report_passed(const sqio_report* report);

SQIO_API unsigned sqio_default_threads(void);

#ifdef __cplusplus
}
#endif

#endif

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "slabqio/slabqio.h"

namespace {

const char* kReference = R"({"oscillators": [{"omega_res": 1, "coupling_g": 0.19}]})";

struct MediumHandle {
  sqio_medium* m = nullptr;
  explicit MediumHandle(const char* json) { REQUIRE(sqio_medium_from_json(json, &m) == SQIO_OK); }
  ~MediumHandle() { sqio_medium_free(m); }
  MediumHandle(const MediumHandle&) = delete;
  MediumHandle& operator=(const MediumHandle&) = delete;
};

double norm2(sqio_complex z) { return z.re * z.re + z.im * z.im; }

std::string fixture_path(const char* name) { return std::string(SLABQIO_FIXTURE_DIR) + "/" + name; }

}  // namespace

TEST_CASE("version and names") {
  CHECK(std::strlen(sqio_version()) > 0);
  CHECK(std::string(sqio_status_name(SQIO_ERR_CONFIG)) == "ConfigError");
  CHECK(std::string(sqio_band_kind_name(SQIO_BAND_ABSORPTION)) == "Absorption");
  CHECK(sqio_default_threads() >= 1);
}

TEST_CASE("medium construction and info") {
  MediumHandle h(kReference);
  sqio_medium_info info{};
  REQUIRE(sqio_medium_info_get(h.m, &info) == SQIO_OK);
  CHECK(info.unit_mode == SQIO_UNITS_SCALED);
  CHECK(info.half_length_L == 1.0);
  CHECK(info.speed_of_light == 1.0);
  CHECK(info.species_count == 1);
  double w = 0.0;
  double g = 0.0;
  REQUIRE(sqio_medium_species(h.m, 0, &w, &g) == SQIO_OK);
  CHECK(w == 1.0);
  CHECK(g == 0.19);
  CHECK(sqio_medium_species(h.m, 1, &w, &g) == SQIO_ERR_RANGE);

  char hash[17];
  REQUIRE(sqio_medium_hash(h.m, hash) == SQIO_OK);
  CHECK(std::strlen(hash) == 16);
  char* canon = nullptr;
  REQUIRE(sqio_medium_canonical_json(h.m, &canon) == SQIO_OK);
  MediumHandle again(canon);
  char hash2[17];
  REQUIRE(sqio_medium_hash(again.m, hash2) == SQIO_OK);
  CHECK(std::string(hash) == std::string(hash2));
  sqio_string_free(canon);
}

TEST_CASE("config errors set the status and the message") {
  sqio_medium* m = nullptr;
  CHECK(sqio_medium_from_json(R"({"oscillators": [{"omega_res": 1, "couplng_g": 0.19}]})", &m) ==
        SQIO_ERR_CONFIG);
  CHECK(m == nullptr);
  CHECK(std::string(sqio_last_error()).find("/oscillators/0/couplng_g") != std::string::npos);
  CHECK(sqio_medium_from_file("/nonexistent/dir/medium.json", &m) == SQIO_ERR_CONFIG);
  CHECK(sqio_medium_from_json(nullptr, &m) == SQIO_ERR_INVALID_ARGUMENT);
  CHECK(sqio_medium_from_json(kReference, nullptr) == SQIO_ERR_INVALID_ARGUMENT);
}

TEST_CASE("index and bracket") {
  MediumHandle h(kReference);
  double b = 0.0;
  REQUIRE(sqio_sellmeir_bracket(h.m, 0.5, &b) == SQIO_OK);
  CHECK(b == doctest::Approx(1.0 - 0.19 / 0.75));
  sqio_index v{};
  REQUIRE(sqio_refractive_index(h.m, 0.95, &v) == SQIO_OK);
  CHECK(v.kind == SQIO_BAND_ABSORPTION);
  CHECK(v.n.re == 0.0);
  CHECK(v.n.im > 0.0);
  REQUIRE(sqio_refractive_index(h.m, 1.0, &v) == SQIO_OK);
  CHECK(v.kind == SQIO_BAND_RESONANCE_ZERO);
  REQUIRE(sqio_refractive_index(h.m, 0.9, &v) == SQIO_OK);
  CHECK(v.kind == SQIO_BAND_POLE_DIVERGENT);
  CHECK(std::isinf(v.n.re));
  CHECK(sqio_refractive_index(h.m, -1.0, &v) == SQIO_ERR_INVALID_ARGUMENT);
}

TEST_CASE("count-reporting buffers") {
  MediumHandle h(kReference);
  size_t count = 0;
  CHECK(sqio_band_edges(h.m, nullptr, 0, &count) == SQIO_OK);
  CHECK(count == 1);
  double edge = 0.0;
  REQUIRE(sqio_band_edges(h.m, &edge, 1, &count) == SQIO_OK);
  CHECK(std::abs(edge - 0.9) < 1e-12);

  sqio_band bands[2];
  bands[1].kind = SQIO_BAND_RESONANCE_ZERO;
  REQUIRE(sqio_band_structure(h.m, 2.0, bands, 2, &count) == SQIO_OK);
  CHECK(count == 3);
  CHECK(bands[1].kind == SQIO_BAND_ABSORPTION);
  sqio_band all[3];
  REQUIRE(sqio_band_structure(h.m, 2.0, all, 3, &count) == SQIO_OK);
  CHECK(all[1].kind == SQIO_BAND_ABSORPTION);
  CHECK(std::abs(all[1].lo - 0.9) < 1e-12);
  CHECK(all[1].hi == 1.0);

  double roots[4];
  REQUIRE(sqio_dispersion_omega_of_k(h.m, 1.3, roots, 4, &count) == SQIO_OK);
  CHECK(count == 2);
}

TEST_CASE("scattering through the C interface") {
  MediumHandle h(kReference);
  sqio_scatter s{};
  REQUIRE(sqio_scatter_coefficients(h.m, 0.95, &s) == SQIO_OK);
  CHECK(std::abs(norm2(s.R) + norm2(s.T) - 1.0) < 1e-12);
  sqio_complex R{};
  sqio_complex T{};
  REQUIRE(sqio_transfer_matrix_rt(s.n0, s.k, 1.0, &R, &T) == SQIO_OK);
  CHECK(std::abs(R.re - s.R.re) < 1e-10);
  CHECK(std::abs(T.im - s.T.im) < 1e-10);

  REQUIRE(sqio_resonance_coefficients(1.0, 1.0, 1.0, &R, &T) == SQIO_OK);
  CHECK(norm2(T) == doctest::Approx(0.5));
  CHECK(sqio_scatter_coefficients(h.m, 0.9, &s) == SQIO_ERR_POLE_DIVERGENT);

  sqio_complex u{};
  sqio_complex du{};
  sqio_region region{};
  REQUIRE(sqio_mode_function(h.m, 1.5, SQIO_SIDE_LEFT, 0.2, &u, &du, &region) == SQIO_OK);
  CHECK(region == SQIO_REGION_II);
  sqio_complex g1{};
  sqio_complex g2{};
  REQUIRE(sqio_greens_function(h.m, 1.5, 0.3, -2.0, &g1) == SQIO_OK);
  REQUIRE(sqio_greens_function(h.m, 1.5, -2.0, 0.3, &g2) == SQIO_OK);
  CHECK(std::abs(g1.re - g2.re) < 1e-12);
  CHECK(std::abs(g1.im - g2.im) < 1e-12);
}

TEST_CASE("sweeps keep order and mark poles") {
  MediumHandle h(kReference);
  std::vector<double> w{0.5, 0.9, 0.95, 1.0, 1.5};
  std::vector<sqio_scatter> out(w.size());
  REQUIRE(sqio_scatter_sweep(h.m, w.data(), w.size(), 3, out.data()) == SQIO_OK);
  CHECK(out[1].kind == SQIO_BAND_POLE_DIVERGENT);
  CHECK(out[2].kind == SQIO_BAND_ABSORPTION);
  CHECK(out[3].kind == SQIO_BAND_RESONANCE_ZERO);
  for (std::size_t i = 0; i < w.size(); ++i) {
    CHECK(out[i].omega == w[i]);
    if (i == 1) continue;
    sqio_scatter one{};
    REQUIRE(sqio_scatter_coefficients(h.m, w[i], &one) == SQIO_OK);
    CHECK(one.T.re == out[i].T.re);
    CHECK(one.R.im == out[i].R.im);
  }
  std::vector<sqio_index> idx(w.size());
  REQUIRE(sqio_index_sweep(h.m, w.data(), w.size(), 2, idx.data()) == SQIO_OK);
  CHECK(idx[1].kind == SQIO_BAND_POLE_DIVERGENT);

  const double xs[3] = {-2.0, 0.0, 2.0};
  const double src[2] = {-0.5, 3.0};
  sqio_complex grid[6];
  REQUIRE(sqio_greens_grid(h.m, 1.5, xs, 3, src, 2, 2, grid) == SQIO_OK);
  sqio_complex g{};
  REQUIRE(sqio_greens_function(h.m, 1.5, xs[2], src[1], &g) == SQIO_OK);
  CHECK(grid[2 * 2 + 1].re == g.re);
  CHECK(grid[2 * 2 + 1].im == g.im);
}

TEST_CASE("S-matrix and coherent transform") {
  MediumHandle h(kReference);
  sqio_complex s[4];
  REQUIRE(sqio_s_matrix(h.m, 0.95, s) == SQIO_OK);
  const sqio_complex in[2] = {{0.6, 0.0}, {0.0, 0.8}};
  sqio_complex out[2];
  REQUIRE(sqio_transform_coherent(s, in, out) == SQIO_OK);
  CHECK(std::abs(norm2(out[0]) + norm2(out[1]) - 1.0) < 1e-12);
}

TEST_CASE("pulses, traces and energy budget") {
  MediumHandle h(kReference);
  sqio_pulse* p = nullptr;
  REQUIRE(sqio_pulse_gaussian(0.95, 0.02, 401, 6.0, &p) == SQIO_OK);
  CHECK(sqio_pulse_size(p) == 401);
  double inc = 0.0;
  double tr = 0.0;
  double rf = 0.0;
  REQUIRE(sqio_energy_budget(h.m, p, &inc, &tr, &rf) == SQIO_OK);
  CHECK(std::abs((tr + rf) / inc - 1.0) < 1e-12);

  std::vector<double> t(50);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i);
  sqio_trace* trace = nullptr;
  REQUIRE(sqio_detection_rate(h.m, p, 3.0, t.data(), t.size(), SQIO_PREFACTOR_NORMALIZED, 2, &trace) == SQIO_OK);
  CHECK(sqio_trace_size(trace) == t.size());
  CHECK(sqio_trace_times(trace)[7] == 7.0);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(sqio_trace_rates(trace)[i] >= 0.0);
  CHECK(sqio_trace_nudged_count(trace) == 0);
  sqio_trace_free(trace);

  trace = nullptr;
  CHECK(sqio_detection_rate(h.m, p, 0.5, t.data(), t.size(), SQIO_PREFACTOR_NORMALIZED, 1, &trace) ==
        SQIO_ERR_DETECTOR_INSIDE_MEDIUM);
  CHECK(trace == nullptr);
  double pref = 0.0;
  CHECK(sqio_detection_prefactor(h.m, SQIO_PREFACTOR_PHYSICAL, &pref) != SQIO_OK);
  sqio_pulse_free(p);

  sqio_pulse* q = nullptr;
  CHECK(sqio_pulse_from_text("0.9,1,0\n0.95,1\n", &q) == SQIO_ERR_PULSE_FILE);
  CHECK(std::string(sqio_last_error()).find("line 2") != std::string::npos);
  const double k[2] = {1.0, 1.1};
  const double re[2] = {1.0, 0.5};
  REQUIRE(sqio_pulse_from_arrays(k, re, nullptr, 2, &q) == SQIO_OK);
  CHECK(sqio_pulse_size(q) == 2);
  sqio_pulse_free(q);
}

TEST_CASE("oracles through the C interface") {
  sqio_complex R{};
  sqio_complex T{};
  REQUIRE(sqio_ode_scatter({1.0, 0.0}, 1.0, 0.1, SQIO_RAMP_LINEAR, 1.0, 1.3, &R, &T) == SQIO_OK);
  CHECK(std::sqrt(norm2(R)) < 1e-9);
  sqio_complex integral{};
  sqio_complex um{};
  sqio_complex up{};
  REQUIRE(sqio_source_integral(1.0, 0.01, SQIO_RAMP_LINEAR, 1.0, 1.0, &integral, &um, &up) == SQIO_OK);
  CHECK(std::sqrt(norm2({um.re - up.re, um.im - up.im})) < 1e-6 * std::sqrt(norm2(up)));
  CHECK(sqio_ode_scatter({1.0, 0.0}, 1.0, 0.5, SQIO_RAMP_LINEAR, 1.0, 1.3, &R, &T) == SQIO_ERR_INVALID_ARGUMENT);
}

TEST_CASE("fixtures and verify reports") {
  MediumHandle h(kReference);
  const double w[3] = {0.5, 0.95, 1.5};
  char* text = nullptr;
  REQUIRE(sqio_fixture_make(h.m, w, 3, "capi", &text) == SQIO_OK);
  double dev = 1.0;
  double tol = 0.0;
  REQUIRE(sqio_fixture_deviation(text, &dev, &tol) == SQIO_OK);
  CHECK(dev <= tol);
  sqio_string_free(text);
  CHECK(sqio_fixture_deviation("{}", &dev, &tol) == SQIO_ERR_FIXTURE);

  const std::string good = fixture_path("reference.json");
  const char* paths[2] = {good.c_str(), "/nonexistent/fixture.json"};
  sqio_report* rep = nullptr;
  REQUIRE(sqio_verify(h.m, SQIO_VERIFY_QUICK, paths, 1, 1, &rep) == SQIO_OK);
  CHECK(sqio_report_passed(rep) == 1);
  CHECK(sqio_report_size(rep) == 3);
  sqio_check item{};
  REQUIRE(sqio_report_item(rep, 0, &item) == SQIO_OK);
  CHECK(std::string(item.property) == "unitarity_sweep");
  CHECK(item.passed == 1);
  CHECK(sqio_report_item(rep, 3, &item) == SQIO_ERR_RANGE);
  sqio_report_free(rep);

  rep = nullptr;
  REQUIRE(sqio_verify(h.m, SQIO_VERIFY_QUICK, paths, 2, 1, &rep) == SQIO_OK);
  CHECK(sqio_report_passed(rep) == 0);
  sqio_report_free(rep);
}

TEST_CASE("null handles are rejected") {
  sqio_medium_info info{};
  CHECK(sqio_medium_info_get(nullptr, &info) == SQIO_ERR_INVALID_ARGUMENT);
  sqio_scatter s{};
  CHECK(sqio_scatter_coefficients(nullptr, 1.0, &s) == SQIO_ERR_INVALID_ARGUMENT);
  sqio_medium_free(nullptr);
  sqio_pulse_free(nullptr);
  sqio_trace_free(nullptr);
  sqio_report_free(nullptr);
  sqio_string_free(nullptr);
}

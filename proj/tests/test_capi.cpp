#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "corner/corner.h"
#include "doctest.h"

namespace {

std::vector<double> level_values(const corner_process* p, size_t s, bool weights) {
  size_t len = 0;
  const auto fetch = weights ? corner_process_weights : corner_process_eigenvalues;
  REQUIRE(fetch(p, s, nullptr, 0, &len) == CORNER_OK);
  std::vector<double> out(len);
  size_t again = 0;
  REQUIRE(fetch(p, s, out.data(), out.size(), &again) == CORNER_OK);
  CHECK(again == len);
  return out;
}

}  // namespace

TEST_CASE("capi: version and empty error state") {
  CHECK(std::string(corner_version()).size() > 0);
  double v = 0.0;
  REQUIRE(corner_gamma_cdf(1.0, 2, &v) == CORNER_OK);
  CHECK(std::string(corner_last_error()).empty());
  CHECK(std::string(corner_last_error_field()).empty());
}

TEST_CASE("capi: config errors carry the field name") {
  corner_config* cfg = nullptr;
  REQUIRE(corner_config_create(&cfg) == CORNER_OK);
  CHECK(corner_config_set(cfg, "trials", "abc") == CORNER_USAGE_ERROR);
  CHECK(std::string(corner_last_error_field()) == "trials");
  CHECK(corner_config_set(cfg, "no_such_key", "1") == CORNER_USAGE_ERROR);
  CHECK(corner_config_set(cfg, "dist", "student_t:3") == CORNER_USAGE_ERROR);
  CHECK(std::string(corner_last_error_field()) == "dist");

  REQUIRE(corner_config_set(cfg, "command", "bulk") == CORNER_OK);
  REQUIRE(corner_config_set(cfg, "energy", "2.5") == CORNER_OK);
  CHECK(corner_config_validate(cfg) == CORNER_USAGE_ERROR);
  CHECK(std::string(corner_last_error_field()) == "energy");
  REQUIRE(corner_config_set(cfg, "energy", "0.5") == CORNER_OK);
  CHECK(corner_config_validate(cfg) == CORNER_OK);

  CHECK(corner_config_load_file(cfg, "/nonexistent/corner.cfg") == CORNER_USAGE_ERROR);
  CHECK(std::string(corner_last_error_field()) == "config");
  corner_config_destroy(cfg);
}

TEST_CASE("capi: null handles are usage errors") {
  CHECK(corner_config_create(nullptr) == CORNER_USAGE_ERROR);
  CHECK(corner_config_validate(nullptr) == CORNER_USAGE_ERROR);
  CHECK(corner_process_build(nullptr, 1, CORNER_METHOD_DIRECT, nullptr) == CORNER_USAGE_ERROR);
  double v = 0.0;
  CHECK(corner_gamma_cdf(1.0, 2, nullptr) == CORNER_USAGE_ERROR);
  CHECK(corner_bulk_level_constant(2.0, &v) == CORNER_USAGE_ERROR);
  corner_config_destroy(nullptr);
  corner_matrix_destroy(nullptr);
  corner_process_destroy(nullptr);
}

TEST_CASE("capi: matrix sampling is deterministic and Hermitian") {
  corner_matrix* a = nullptr;
  corner_matrix* b = nullptr;
  REQUIRE(corner_matrix_sample(6, 2, "gaussian", 5, 3, &a) == CORNER_OK);
  REQUIRE(corner_matrix_sample(6, 2, "gaussian", 5, 3, &b) == CORNER_OK);
  CHECK(corner_matrix_dim(a) == 6);
  for (size_t i = 0; i < 6; ++i)
    for (size_t j = 0; j < 6; ++j) {
      double re1, im1, re2, im2, re3, im3;
      REQUIRE(corner_matrix_entry(a, i, j, &re1, &im1) == CORNER_OK);
      REQUIRE(corner_matrix_entry(b, i, j, &re2, &im2) == CORNER_OK);
      REQUIRE(corner_matrix_entry(a, j, i, &re3, &im3) == CORNER_OK);
      CHECK(re1 == re2);
      CHECK(im1 == im2);
      CHECK(re1 == re3);
      CHECK(im1 == -im3);
    }
  double re, im;
  CHECK(corner_matrix_entry(a, 6, 0, &re, &im) == CORNER_USAGE_ERROR);
  corner_matrix* bad = nullptr;
  CHECK(corner_matrix_sample(6, 3, "gaussian", 5, 3, &bad) == CORNER_USAGE_ERROR);
  CHECK(corner_matrix_sample(6, 2, "cauchy", 5, 3, &bad) == CORNER_USAGE_ERROR);
  corner_matrix_destroy(a);
  corner_matrix_destroy(b);
}

TEST_CASE("capi: direct and secular processes agree") {
  for (int beta : {1, 2}) {
    corner_matrix* m = nullptr;
    REQUIRE(corner_matrix_sample(30, beta, "gaussian", 9, 0, &m) == CORNER_OK);
    corner_process* d = nullptr;
    corner_process* s = nullptr;
    REQUIRE(corner_process_build(m, 3, CORNER_METHOD_DIRECT, &d) == CORNER_OK);
    REQUIRE(corner_process_build(m, 3, CORNER_METHOD_SECULAR, &s) == CORNER_OK);
    REQUIRE(corner_process_levels(d) == 4);
    REQUIRE(corner_process_levels(s) == 4);
    for (size_t lv = 0; lv < 4; ++lv) {
      const auto ed = level_values(d, lv, false);
      const auto es = level_values(s, lv, false);
      REQUIRE(ed.size() == 27 + lv);
      REQUIRE(es.size() == ed.size());
      for (size_t i = 0; i < ed.size(); ++i) CHECK(std::abs(ed[i] - es[i]) < 1e-10 * 12.0);
    }
    const auto w = level_values(d, 0, true);
    CHECK(w.size() == 27);
    double viol = 1.0, diam = 0.0;
    REQUIRE(corner_process_interlacing(d, &viol, &diam) == CORNER_OK);
    CHECK(viol <= 1e-9 * diam);
    size_t len = 0;
    CHECK(corner_process_eigenvalues(d, 4, nullptr, 0, &len) == CORNER_USAGE_ERROR);
    CHECK(corner_process_weights(d, 3, nullptr, 0, &len) == CORNER_USAGE_ERROR);
    corner_process_destroy(d);
    corner_process_destroy(s);
    corner_matrix_destroy(m);
  }
}

TEST_CASE("capi: spectral process and json export") {
  std::vector<double> level0(40);
  REQUIRE(corner_gbe_spectrum(level0.size(), 2.0, 4, 1, level0.data()) == CORNER_OK);
  for (size_t i = 1; i < level0.size(); ++i) CHECK(level0[i - 1] <= level0[i]);
  corner_process* p = nullptr;
  REQUIRE(corner_process_spectral(level0.data(), level0.size(), 2, 2, 4, 1, &p) == CORNER_OK);
  CHECK(corner_process_levels(p) == 3);
  const auto top = level_values(p, 2, false);
  CHECK(top.size() == 42);
  double viol = 1.0, diam = 0.0;
  REQUIRE(corner_process_interlacing(p, &viol, &diam) == CORNER_OK);
  CHECK(viol <= 1e-9 * diam);
  char* json = nullptr;
  REQUIRE(corner_process_to_json(p, &json) == CORNER_OK);
  REQUIRE(json != nullptr);
  CHECK(std::strstr(json, "levels") != nullptr);
  corner_string_free(json);
  corner_process_destroy(p);

  std::vector<double> unsorted{1.0, -1.0};
  REQUIRE(corner_process_spectral(unsorted.data(), 2, 1, 2, 4, 1, &p) == CORNER_OK);
  CHECK(level_values(p, 0, false) == std::vector<double>{-1.0, 1.0});
  corner_process_destroy(p);
  CHECK(corner_process_spectral(unsorted.data(), 2, 1, 3, 4, 1, &p) == CORNER_USAGE_ERROR);
}

TEST_CASE("capi: helpers match closed forms") {
  double v = 0.0;
  REQUIRE(corner_semicircle_mass(-2.0, 2.0, &v) == CORNER_OK);
  CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
  REQUIRE(corner_semicircle_mass(0.0, 2.0, &v) == CORNER_OK);
  CHECK(v == doctest::Approx(0.5).epsilon(1e-14));
  REQUIRE(corner_gamma_cdf(1.0, 2, &v) == CORNER_OK);
  CHECK(v == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
  REQUIRE(corner_gamma_cdf(1.0, 1, &v) == CORNER_OK);
  CHECK(v == doctest::Approx(std::erf(std::sqrt(0.5))).epsilon(1e-14));
  REQUIRE(corner_bulk_level_constant(1.0, &v) == CORNER_OK);
  CHECK(v == doctest::Approx(-1.0 / (2.0 * std::sqrt(3.0))).epsilon(1e-14));
  CHECK(corner_gamma_cdf(1.0, 4, &v) == CORNER_USAGE_ERROR);
}

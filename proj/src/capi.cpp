#include "corner/corner.h"

#include <cstdlib>
#include <cstring>
#include <iostream>
#include <new>
#include <string>

#include <nlohmann/json.hpp>

#include "corner/bulk_bead.hpp"
#include "corner/corner_spectra.hpp"
#include "corner/edge_stats.hpp"
#include "corner/error.hpp"
#include "corner/experiment.hpp"
#include "corner/parallel.hpp"

struct corner_config {
  corner::ExperimentConfig cfg;
};

struct corner_matrix {
  corner::WignerMatrix h;
};

struct corner_process {
  corner::CornerProcess cp;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_field;

corner_status fail(corner_status st, std::string msg, std::string field = {}) {
  g_error = std::move(msg);
  g_field = std::move(field);
  return st;
}

template <class F>
corner_status guarded(F&& f) {
  g_error.clear();
  g_field.clear();
  try {
    return f();
  } catch (const corner::ConfigError& e) {
    return fail(CORNER_USAGE_ERROR, e.what(), e.field());
  } catch (const corner::ArgumentError& e) {
    return fail(CORNER_USAGE_ERROR, e.what());
  } catch (const corner::NumericalError& e) {
    return fail(CORNER_NUMERICAL_ERROR, e.what());
  } catch (const corner::ExtractionError& e) {
    return fail(CORNER_NUMERICAL_ERROR, e.what());
  } catch (const corner::IoError& e) {
    return fail(CORNER_IO_ERROR, e.what());
  } catch (const std::bad_alloc&) {
    return fail(CORNER_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(CORNER_INTERNAL_ERROR, e.what());
  } catch (...) {
    return fail(CORNER_INTERNAL_ERROR, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

corner_status null_arg(const char* name) {
  return fail(CORNER_USAGE_ERROR, std::string(name) + " is null");
}

corner_status copy_out(const std::vector<double>& v, double* out, size_t cap, size_t* len) {
  if (len) *len = v.size();
  if (out) std::memcpy(out, v.data(), std::min(cap, v.size()) * sizeof(double));
  return CORNER_OK;
}

}  // namespace

extern "C" {

const char* corner_last_error(void) { return g_error.c_str(); }
const char* corner_last_error_field(void) { return g_field.c_str(); }
const char* corner_version(void) { return "0.1.0"; }

void corner_string_free(char* s) { std::free(s); }

corner_status corner_config_create(corner_config** out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new corner_config{};
    return CORNER_OK;
  });
}

void corner_config_destroy(corner_config* cfg) { delete cfg; }

corner_status corner_config_set(corner_config* cfg, const char* key, const char* value) {
  if (!cfg) return null_arg("cfg");
  if (!key || !value) return null_arg("key/value");
  return guarded([&] {
    corner::set_config_value(cfg->cfg, key, value);
    return CORNER_OK;
  });
}

corner_status corner_config_load_file(corner_config* cfg, const char* path) {
  if (!cfg) return null_arg("cfg");
  if (!path) return null_arg("path");
  return guarded([&] {
    corner::load_config_file(cfg->cfg, path);
    return CORNER_OK;
  });
}

corner_status corner_config_validate(const corner_config* cfg) {
  if (!cfg) return null_arg("cfg");
  return guarded([&] {
    corner::validate(cfg->cfg);
    return CORNER_OK;
  });
}

corner_status corner_execute(const corner_config* cfg, unsigned workers) {
  if (!cfg) return null_arg("cfg");
  return guarded([&] {
    const unsigned w = workers == 0 ? corner::workers_from_env() : workers;
    const corner::ExecutionResult r = corner::execute(cfg->cfg, w, std::cout);
    if (r.status != 0) {
      std::string failed;
      for (const auto& rep : r.reports)
        if (!rep.pass) failed += (failed.empty() ? "" : ", ") + rep.test;
      return fail(CORNER_VERIFY_FAILED, "failed checks: " + failed);
    }
    return CORNER_OK;
  });
}

corner_status corner_matrix_sample(size_t n, int beta, const char* law, uint64_t seed,
                                   uint64_t trial, corner_matrix** out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    const corner::EntryLaw l = corner::EntryLaw::parse(law ? law : "gaussian", beta);
    if (n == 0) throw corner::ArgumentError("matrix dimension must be positive");
    *out = new corner_matrix{corner::sample_wigner(n, l, seed, trial)};
    return CORNER_OK;
  });
}

void corner_matrix_destroy(corner_matrix* m) { delete m; }

size_t corner_matrix_dim(const corner_matrix* m) { return m ? m->h.dim() : 0; }

corner_status corner_matrix_entry(const corner_matrix* m, size_t i, size_t j, double* re,
                                  double* im) {
  if (!m) return null_arg("m");
  return guarded([&] {
    if (i >= m->h.dim() || j >= m->h.dim()) throw corner::ArgumentError("index out of range");
    const auto z = m->h.entry(i, j);
    if (re) *re = z.real();
    if (im) *im = z.imag();
    return CORNER_OK;
  });
}

corner_status corner_process_build(const corner_matrix* m, size_t k, corner_method method,
                                   corner_process** out) {
  if (!m) return null_arg("m");
  if (!out) return null_arg("out");
  return guarded([&] {
    const auto minors = corner::bordered_minor_sequence(m->h, k);
    corner::CornerProcess cp;
    if (method == CORNER_METHOD_DIRECT)
      cp = corner::corner_eigenvalues_direct(minors, true);
    else if (method == CORNER_METHOD_SECULAR)
      cp = corner::corner_eigenvalues_secular(minors);
    else
      throw corner::ArgumentError("unknown method");
    *out = new corner_process{std::move(cp)};
    return CORNER_OK;
  });
}

corner_status corner_process_spectral(const double* level0, size_t n, size_t k, int beta,
                                      uint64_t seed, uint64_t trial, corner_process** out) {
  if (!level0) return null_arg("level0");
  if (!out) return null_arg("out");
  return guarded([&] {
    std::vector<double> l0(level0, level0 + n);
    *out = new corner_process{corner::spectral_corner_process(std::move(l0), k, beta, seed, trial)};
    return CORNER_OK;
  });
}

void corner_process_destroy(corner_process* p) { delete p; }

size_t corner_process_levels(const corner_process* p) { return p ? p->cp.levels.size() : 0; }

corner_status corner_process_eigenvalues(const corner_process* p, size_t s, double* out,
                                         size_t cap, size_t* len) {
  if (!p) return null_arg("p");
  return guarded([&] {
    if (s >= p->cp.levels.size()) throw corner::ArgumentError("level out of range");
    return copy_out(p->cp.levels[s].eigenvalues, out, cap, len);
  });
}

corner_status corner_process_weights(const corner_process* p, size_t s, double* out, size_t cap,
                                     size_t* len) {
  if (!p) return null_arg("p");
  return guarded([&] {
    if (s >= p->cp.borders.size()) throw corner::ArgumentError("border out of range");
    return copy_out(p->cp.borders[s].weights, out, cap, len);
  });
}

corner_status corner_process_interlacing(const corner_process* p, double* max_violation,
                                         double* diameter) {
  if (!p) return null_arg("p");
  return guarded([&] {
    const auto rep = corner::interlacing_check(p->cp);
    if (max_violation) *max_violation = rep.max_violation;
    if (diameter) *diameter = rep.diameter;
    return CORNER_OK;
  });
}

corner_status corner_process_to_json(const corner_process* p, char** out) {
  if (!p) return null_arg("p");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = dup_string(corner::to_json(p->cp).dump());
    return CORNER_OK;
  });
}

corner_status corner_semicircle_mass(double a, double b, double* out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = corner::semicircle_mass(a, b);
    return CORNER_OK;
  });
}

corner_status corner_gamma_cdf(double x, int beta, double* out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = corner::gamma_cdf(x, beta);
    return CORNER_OK;
  });
}

corner_status corner_bulk_level_constant(double energy, double* out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = corner::bulk_level_constant(energy);
    return CORNER_OK;
  });
}

corner_status corner_gbe_spectrum(size_t n, double beta, uint64_t seed, uint64_t trial,
                                  double* out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    const auto v = corner::sample_gbe_spectrum(n, beta, seed, trial);
    std::memcpy(out, v.data(), v.size() * sizeof(double));
    return CORNER_OK;
  });
}

}  // extern "C"

/* C interface to the corner-process library. */
#ifndef CORNER_CORNER_H
#define CORNER_CORNER_H

#include <stddef.h>
#include <stdint.h>

#if defined(CORNER_BUILDING_LIBRARY)
#define CORNER_API __attribute__((visibility("default")))
#else
#define CORNER_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum corner_status {
  CORNER_OK = 0,
  CORNER_VERIFY_FAILED = 1,
  CORNER_USAGE_ERROR = 2,
  CORNER_NUMERICAL_ERROR = 3,
  CORNER_IO_ERROR = 4,
  CORNER_INTERNAL_ERROR = 5
} corner_status;

typedef enum corner_method {
  CORNER_METHOD_DIRECT = 0,
  CORNER_METHOD_SECULAR = 1
} corner_method;

typedef struct corner_config corner_config;
typedef struct corner_matrix corner_matrix;
typedef struct corner_process corner_process;

/* Message and config field (may be empty) of the last failure on this thread. */
CORNER_API const char* corner_last_error(void);
CORNER_API const char* corner_last_error_field(void);
CORNER_API const char* corner_version(void);

/* Strings returned through char** are owned by the caller. */
CORNER_API void corner_string_free(char* s);

/* Experiment configuration: key = value pairs, see the README for keys. */
CORNER_API corner_status corner_config_create(corner_config** out);
CORNER_API void corner_config_destroy(corner_config* cfg);
CORNER_API corner_status corner_config_set(corner_config* cfg, const char* key, const char* value);
CORNER_API corner_status corner_config_load_file(corner_config* cfg, const char* path);
CORNER_API corner_status corner_config_validate(const corner_config* cfg);
/* workers == 0 reads CORNER_WORKERS. Returns CORNER_VERIFY_FAILED when a
   verify run finds a failing check. */
CORNER_API corner_status corner_execute(const corner_config* cfg, unsigned workers);

CORNER_API corner_status corner_matrix_sample(size_t n, int beta, const char* law, uint64_t seed,
                                              uint64_t trial, corner_matrix** out);
CORNER_API void corner_matrix_destroy(corner_matrix* m);
CORNER_API size_t corner_matrix_dim(const corner_matrix* m);
CORNER_API corner_status corner_matrix_entry(const corner_matrix* m, size_t i, size_t j,
                                             double* re, double* im);

/* Levels 0..k of the leading minors of m, level 0 of size dim(m) - k. */
CORNER_API corner_status corner_process_build(const corner_matrix* m, size_t k,
                                              corner_method method, corner_process** out);
/* Weights-only Gaussian corner process started from the given level-0 spectrum. */
CORNER_API corner_status corner_process_spectral(const double* level0, size_t n, size_t k,
                                                 int beta, uint64_t seed, uint64_t trial,
                                                 corner_process** out);
CORNER_API void corner_process_destroy(corner_process* p);
CORNER_API size_t corner_process_levels(const corner_process* p);
/* Copies up to cap values; *len receives the full count. */
CORNER_API corner_status corner_process_eigenvalues(const corner_process* p, size_t s,
                                                    double* out, size_t cap, size_t* len);
CORNER_API corner_status corner_process_weights(const corner_process* p, size_t s, double* out,
                                                size_t cap, size_t* len);
CORNER_API corner_status corner_process_interlacing(const corner_process* p,
                                                    double* max_violation, double* diameter);
CORNER_API corner_status corner_process_to_json(const corner_process* p, char** out);

CORNER_API corner_status corner_semicircle_mass(double a, double b, double* out);
CORNER_API corner_status corner_gamma_cdf(double x, int beta, double* out);
CORNER_API corner_status corner_bulk_level_constant(double energy, double* out);
/* Writes n ascending eigenvalues. */
CORNER_API corner_status corner_gbe_spectrum(size_t n, double beta, uint64_t seed, uint64_t trial,
                                             double* out);

#ifdef __cplusplus
}
#endif

#endif

/* Copyright 2026 The ksapprox Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to ksapprox.
 *
 * Every function returns a ksa_status. On failure the message of the most
 * recent error on the calling thread is available from ksa_last_error().
 *
 * Handles are opaque and owned by the caller; release them with the matching
 * *_free function (NULL is accepted).
 *
 * String results use a caller buffer: *needed receives the size including the
 * terminating NUL. If buf is NULL or cap < *needed nothing is written and
 * KSA_ERR_BUFFER_TOO_SMALL is returned.
 *
 * Matrices are 3x3, row major, as interleaved (re, im) pairs: 18 doubles.
 */

#ifndef KSA_KSA_H_
#define KSA_KSA_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(KSA_BUILDING_LIBRARY)
#define KSA_API __declspec(dllexport)
#else
#define KSA_API __declspec(dllimport)
#endif
#else
#define KSA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ksa_status {
  KSA_OK = 0,
  KSA_ERR_INVALID_ARGUMENT = 1,
  KSA_ERR_NOT_HERMITIAN = 2,
  KSA_ERR_SINGULAR = 3,
  KSA_ERR_NOT_PROJECTOR = 4,
  KSA_ERR_NOT_NORMALIZED = 5,
  KSA_ERR_INDEX_OUT_OF_RANGE = 6,
  KSA_ERR_DIMENSION_MISMATCH = 7,
  KSA_ERR_DEGENERATE_SPECTRUM = 8,
  KSA_ERR_NON_UNIT_VECTOR = 9,
  KSA_ERR_LEFT_HANDED = 10,
  KSA_ERR_INCOMPLETE_COLORING = 11,
  KSA_ERR_PARSE = 12,
  KSA_ERR_IO = 13,
  KSA_ERR_NOT_FOUND = 14,
  KSA_ERR_BUFFER_TOO_SMALL = 15,
  KSA_ERR_NULL_POINTER = 16,
  KSA_ERR_INTERNAL = 99
} ksa_status;

typedef enum ksa_model { KSA_MODEL_SEQUENTIAL = 0, KSA_MODEL_CONTEMPORANEOUS = 1 } ksa_model;

typedef enum ksa_alignment_mode { KSA_MODE_INDEPENDENT = 0, KSA_MODE_CORRELATED = 1 } ksa_alignment_mode;

KSA_API const char* ksa_version(void);
KSA_API const char* ksa_status_string(ksa_status status);
/* Message of the last failure on this thread; "" if none. */
KSA_API const char* ksa_last_error(void);

/* POVM of the triad measurement ------------------------------------------------------ */

typedef struct ksa_povm ksa_povm;

KSA_API ksa_status ksa_povm_create(double psi, double theta, double phi, ksa_model model, ksa_povm** out);
KSA_API void ksa_povm_free(ksa_povm* p);

/* Number of outcomes (8). */
KSA_API ksa_status ksa_povm_size(const ksa_povm* p, size_t* out);
/* Bit-string label of outcome i, pointer 1 first. */
KSA_API ksa_status ksa_povm_label(const ksa_povm* p, size_t i, char* buf, size_t cap, size_t* needed);
KSA_API ksa_status ksa_povm_element(const ksa_povm* p, size_t i, double* out18);
KSA_API ksa_status ksa_povm_kraus(const ksa_povm* p, size_t i, double* out18);
/* Lowest-order expansion of element i in (psi, theta). */
KSA_API ksa_status ksa_povm_second_order(const ksa_povm* p, size_t i, double* out18);
/* Operator norm of element i minus its lowest-order expansion. */
KSA_API ksa_status ksa_povm_deviation(const ksa_povm* p, size_t i, double* out);
/* Operator norm of the summed illegal elements. */
KSA_API ksa_status ksa_povm_illegal_bound(const ksa_povm* p, double* out);
/* <s|E_i|s> for a 3-component state given as 6 doubles (re, im). */
KSA_API ksa_status ksa_povm_probability(const ksa_povm* p, size_t i, const double* state6, double* out);
/* JSON document with elements, Kraus operators and, if with_expansion is
   nonzero, the lowest-order expansion and deviations. */
KSA_API ksa_status ksa_povm_json(const ksa_povm* p, int with_expansion, char* buf, size_t cap, size_t* needed);

/* Error metrics ---------------------------------------------------------------------- */

/* Retrodictive and predictive errors of P_r, r = 1..3, from the POVM formulas. */
KSA_API ksa_status ksa_triad_errors(double psi, double theta, double phi, ksa_model model, int r,
                                    double* delta_ei, double* delta_ef);
/* The same from the Heisenberg-picture definitions. */
KSA_API ksa_status ksa_triad_errors_heisenberg(double psi, double theta, double phi, ksa_model model, int r,
                                               double* delta_ei, double* delta_ef);
KSA_API ksa_status ksa_closed_form_errors(double psi, double theta, double phi, int r, double* delta_ei,
                                          double* delta_ef);
/* CSV over psi = theta = angles[a], phi = phis[b], r = 1..3. */
KSA_API ksa_status ksa_errors_grid_csv(const double* angles, size_t n_angles, const double* phis, size_t n_phis,
                                       ksa_model model, char* buf, size_t cap, size_t* needed);

/* Ray sets and colourability --------------------------------------------------------- */

typedef struct ksa_rayset ksa_rayset;
typedef struct ksa_ks_result ksa_ks_result;

KSA_API ksa_status ksa_rayset_peres(ksa_rayset** out);
/* One ray per line, three numbers, '#' comments. Parse errors name the line. */
KSA_API ksa_status ksa_rayset_load(const char* path, ksa_rayset** out);
KSA_API ksa_status ksa_rayset_parse(const char* text, ksa_rayset** out);
KSA_API void ksa_rayset_free(ksa_rayset* rs);
KSA_API ksa_status ksa_rayset_size(const ksa_rayset* rs, size_t* out);
KSA_API ksa_status ksa_rayset_ray(const ksa_rayset* rs, size_t i, double* out3);
KSA_API ksa_status ksa_rayset_label(const ksa_rayset* rs, size_t i, char* buf, size_t cap, size_t* needed);

KSA_API ksa_status ksa_ks_solve(const ksa_rayset* rs, double tol, ksa_ks_result** out);
KSA_API void ksa_ks_result_free(ksa_ks_result* res);
KSA_API ksa_status ksa_ks_result_satisfiable(const ksa_ks_result* res, int* out);
KSA_API ksa_status ksa_ks_result_stats(const ksa_ks_result* res, uint64_t* nodes, uint64_t* contradictions);
KSA_API ksa_status ksa_ks_result_structure(const ksa_ks_result* res, size_t* n_pairs, size_t* n_triads);
/* Colour of ray i; KSA_ERR_NOT_FOUND if unsatisfiable. */
KSA_API ksa_status ksa_ks_result_value(const ksa_ks_result* res, size_t i, int* out);
/* Number of violations of the returned colouring (0 for a sound solver). */
KSA_API ksa_status ksa_ks_result_violations(const ksa_ks_result* res, size_t* out);

/* Contextuality experiment ----------------------------------------------------------- */

typedef struct ksa_experiment_config {
  double sigma;
  uint64_t trials;
  uint64_t samples;
  uint64_t seed;
  ksa_alignment_mode mode;
  ksa_model model;
  /* Peres ray left out of the default nearest-ray valuation. */
  uint64_t removed_ray;
  /* Quantum state, 3 components as (re, im). */
  double state[6];
} ksa_experiment_config;

typedef struct ksa_experiment ksa_experiment;

KSA_API void ksa_experiment_config_init(ksa_experiment_config* cfg);
/* Finds an illegal triad of the Peres set under the default valuation and
   runs the experiment on it. KSA_ERR_NOT_FOUND if no triad is illegal. */
KSA_API ksa_status ksa_experiment_run(const ksa_experiment_config* cfg, ksa_experiment** out);
KSA_API void ksa_experiment_free(ksa_experiment* e);

typedef struct ksa_experiment_summary {
  double p[3];
  double match[3];
  int induced[3];
  double hidden_illegal_exact;
  double hidden_illegal_empirical;
  double hidden_std_error;
  double quantum_illegal_mean;
  double quantum_illegal_max;
  double quantum_illegal_bound;
  double gap;
  uint64_t trials;
} ksa_experiment_summary;

KSA_API ksa_status ksa_experiment_get_summary(const ksa_experiment* e, ksa_experiment_summary* out);
KSA_API ksa_status ksa_experiment_summary_json(const ksa_experiment* e, char* buf, size_t cap, size_t* needed);
KSA_API ksa_status ksa_experiment_trials_csv(const ksa_experiment* e, char* buf, size_t cap, size_t* needed);

#ifdef __cplusplus
}
#endif

#endif /* KSA_KSA_H_ */

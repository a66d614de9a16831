/*
 * Copyright 2026 The psym Authors
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

/*
 * C interface of libpsym. Every object is an opaque handle released with its
 * *_free function. Functions returning psym_status leave a message for the
 * calling thread in psym_last_error() when they fail. Strings returned
 * through char** are owned by the caller and released with psym_string_free.
 */

#ifndef PSYM_PSYM_H
#define PSYM_PSYM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PSYM_API __declspec(dllexport)
#else
#define PSYM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum psym_status {
    PSYM_OK = 0,
    PSYM_E_INVALID_ARGUMENT = 1, /* bad option, unreadable file, shape mismatch */
    PSYM_E_PARSE = 2,
    PSYM_E_VALIDATION = 3,
    PSYM_E_ELIMINATION_FAILED = 4, /* supply the input-output equations instead */
    PSYM_E_LEADING_NOT_LINEAR = 5,
    PSYM_E_UNKNOWN_VARIABLE = 6,
    PSYM_E_NONLINEAR_IN_CHI = 7,
    PSYM_E_SYMBOLIC_RANK_MISMATCH = 8,
    PSYM_E_BLOWUP = 9,
    PSYM_E_POLE_ON_TRAJECTORY = 10,
    PSYM_E_UNKNOWN_COORDINATE = 11,
    PSYM_E_ALGEBRA = 12, /* division by zero, pole at a point, overflow */
    PSYM_E_OUT_OF_MEMORY = 13,
    PSYM_E_INTERNAL = 14
} psym_status;

typedef enum psym_outcome { PSYM_PASS = 0, PSYM_FAIL = 1, PSYM_INCONCLUSIVE = 2 } psym_outcome;

typedef struct psym_model psym_model;
typedef struct psym_analysis psym_analysis;
typedef struct psym_flows psym_flows;
typedef struct psym_certificate psym_certificate;

PSYM_API const char *psym_version(void);
PSYM_API const char *psym_status_name(psym_status s);
PSYM_API const char *psym_last_error(void);
PSYM_API void psym_string_free(char *s);

/* Models */
PSYM_API psym_status psym_model_load_file(const char *path, psym_model **out);
PSYM_API psym_status psym_model_load_string(const char *source, psym_model **out);
PSYM_API const char *psym_model_name(const psym_model *m);
PSYM_API size_t psym_model_parameter_count(const psym_model *m);
PSYM_API void psym_model_free(psym_model *m);

/* Analysis: reduction, symmetry conditions, null space, invariants, cross-check */
typedef struct psym_analyze_options {
    unsigned max_num_degree;
    unsigned max_den_factors;
    uint64_t seed;
    const char *io_path; /* input-output equations file, or NULL to eliminate */
} psym_analyze_options;

PSYM_API void psym_analyze_options_init(psym_analyze_options *o);
PSYM_API psym_status psym_analyze(const psym_model *m, const psym_analyze_options *o, psym_analysis **out);
PSYM_API size_t psym_analysis_parameter_count(const psym_analysis *a);
PSYM_API const char *psym_analysis_parameter_name(const psym_analysis *a, size_t i); /* NULL if out of range */
PSYM_API size_t psym_analysis_basis_dimension(const psym_analysis *a);
PSYM_API size_t psym_analysis_invariant_count(const psym_analysis *a);
PSYM_API int psym_analysis_incomplete(const psym_analysis *a);
PSYM_API int psym_analysis_cross_check(const psym_analysis *a);
PSYM_API psym_status psym_analysis_invariant(const psym_analysis *a, size_t i, char **out);
PSYM_API psym_status psym_analysis_generator(const psym_analysis *a, size_t k, char **out);
PSYM_API psym_status psym_analysis_json(const psym_analysis *a, int include_timing, char **out);
PSYM_API psym_status psym_analysis_text(const psym_analysis *a, char **out);
PSYM_API psym_status psym_analysis_matrix_json(const psym_analysis *a, char **out);
PSYM_API void psym_analysis_free(psym_analysis *a);

/* Flows of a weighted generator; lists are comma-separated numbers, exact
 * rationals allowed ("1/2", "0.25"). */
typedef struct psym_flow_options {
    const char *alpha;  /* one weight per basis vector; NULL means all ones */
    const char *theta0; /* one starting point; NULL means seeded starts */
    size_t starts;      /* number of seeded starts */
    double eps_lo, eps_hi;
    size_t points; /* grid samples on [eps_lo, eps_hi]; 0 is always added */
    uint64_t seed;
    int require_positive;
} psym_flow_options;

PSYM_API void psym_flow_options_init(psym_flow_options *o);
PSYM_API psym_status psym_flows_compute(const psym_analysis *a, const psym_flow_options *o, psym_flows **out);
PSYM_API size_t psym_flows_count(const psym_flows *f);
/* CSV `eps,<coords>,traj_id` for comma-separated coordinate expressions. */
PSYM_API psym_status psym_flows_csv(const psym_flows *f, const char *coords, char **out);
PSYM_API void psym_flows_free(psym_flows *f);

/* Output-invariance residual of theta_hat on the jets of a theta trajectory. */
typedef struct psym_verify_options {
    const char *theta;          /* required */
    const char *theta_hat;      /* explicit transform; NULL means flow theta by eps along alpha */
    const char *alpha;          /* NULL means all ones */
    double eps;
    const char *initial_states; /* NULL means 0.5, 0.7, 0.9, ... */
    const char *inputs;         /* "u=sine(1,1);w=zero"; unbound inputs get sine(1,1) */
    double t_end;
    size_t times; /* grid samples on [0, t_end] */
    double step;  /* RK4 step bound */
} psym_verify_options;

PSYM_API void psym_verify_options_init(psym_verify_options *o);
PSYM_API psym_status psym_verify(const psym_analysis *a, const psym_verify_options *o, psym_certificate **out);
PSYM_API psym_outcome psym_certificate_outcome(const psym_certificate *c);
PSYM_API double psym_certificate_residual(const psym_certificate *c);
PSYM_API psym_status psym_certificate_json(const psym_certificate *c, char **out);
PSYM_API psym_status psym_certificate_trajectory_csv(const psym_certificate *c, char **out);
PSYM_API void psym_certificate_free(psym_certificate *c);

#ifdef __cplusplus
}
#endif

#endif

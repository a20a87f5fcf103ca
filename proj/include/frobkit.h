/*
 * Copyright 2026 The frobkit Authors.
 * This file is licensed to you under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License. You may obtain a copy
 * of the License at http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software distributed under
 * the License is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR REPRESENTATIONS
 * OF ANY KIND, either express or implied. See the License for the specific language
 * governing permissions and limitations under the License.
 */
#ifndef FROBKIT_H
#define FROBKIT_H

#include <stddef.h>

#if defined(_WIN32)
#define FROBKIT_API __declspec(dllexport)
#else
#define FROBKIT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Mirrors the library's error codes; 0 is success. */
typedef enum frobkit_status {
    FROBKIT_OK = 0,
    FROBKIT_ERR_PARSE = 1,
    FROBKIT_ERR_DOMAIN = 2,
    FROBKIT_ERR_OUT_OF_BOUNDS = 3,
    FROBKIT_ERR_STEP_UNDERFLOW = 4,
    FROBKIT_ERR_NOT_DIFFERENTIABLE = 5,
    FROBKIT_ERR_TRANSVERSALITY = 6,
    FROBKIT_ERR_DOMAIN_EXIT = 7,
    FROBKIT_ERR_SCHEMA = 8,
    FROBKIT_ERR_IO = 9,
    FROBKIT_ERR_INVALID_ARGUMENT = 10,
    FROBKIT_ERR_MODULUS_VIOLATION = 11,
    FROBKIT_ERR_NUMERICAL = 12,
    FROBKIT_ERR_NULL_ARGUMENT = 13,
    FROBKIT_ERR_INTERNAL = 99
} frobkit_status;

typedef enum frobkit_verdict {
    FROBKIT_SATISFIED = 0,
    FROBKIT_VIOLATED = 1,
    FROBKIT_INCONCLUSIVE = 2
} frobkit_verdict;

typedef struct frobkit_expr frobkit_expr;
typedef struct frobkit_problem frobkit_problem;
typedef struct frobkit_report frobkit_report;

FROBKIT_API const char* frobkit_version(void);
FROBKIT_API const char* frobkit_status_name(frobkit_status status);

/* Message of the last failure on the calling thread; "" after a success. */
FROBKIT_API const char* frobkit_last_error(void);

/* Expressions over x1..x<dim> (aliases x, y, z). dim is 2 or 3. */
FROBKIT_API frobkit_status frobkit_expr_parse(const char* text, int dim, frobkit_expr** out);
FROBKIT_API frobkit_status frobkit_expr_eval(const frobkit_expr* e, const double* point, double* value);
/* Exact derivative along axis (0-based). */
FROBKIT_API frobkit_status frobkit_expr_partial(const frobkit_expr* e, int axis, const double* point, double* value);
FROBKIT_API void frobkit_expr_free(frobkit_expr* e);

/* Problem files: JSON, CSV references resolved against the file's directory. */
FROBKIT_API frobkit_status frobkit_problem_load(const char* path, frobkit_problem** out);
FROBKIT_API frobkit_status frobkit_problem_parse(const char* json_text, const char* base_dir, frobkit_problem** out);
/* Dotted-path override, e.g. ("certify.t0", "0.3"). */
FROBKIT_API frobkit_status frobkit_problem_set(frobkit_problem* p, const char* key, const char* value);
FROBKIT_API frobkit_status frobkit_problem_validate(const frobkit_problem* p);
FROBKIT_API void frobkit_problem_free(frobkit_problem* p);

/* command: certify, surface, pfaff, ode-check, mollify. */
FROBKIT_API frobkit_status frobkit_run(const frobkit_problem* p, const char* command, frobkit_report** out);
FROBKIT_API const char* frobkit_report_json(const frobkit_report* r);
/* Mesh or solution CSV; "" when the command emits none. */
FROBKIT_API const char* frobkit_report_csv(const frobkit_report* r);
/* 1 when the mathematical check failed, 0 otherwise. */
FROBKIT_API int frobkit_report_violated(const frobkit_report* r);
FROBKIT_API void frobkit_report_free(frobkit_report* r);

/* One uniqueness condition (ODESTAR, ODESTARB, OSGOOD) for a modulus in t. rate may be NULL. */
FROBKIT_API frobkit_status frobkit_ode_check(const char* modulus, const char* condition, const double* schedule,
                                             size_t n, frobkit_verdict* verdict, double* rate);

#ifdef __cplusplus
}
#endif

#endif

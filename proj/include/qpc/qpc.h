/*
 * Copyright 2026 The qpc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to the position-based quantum commitment simulator.
 *
 * Every function returns a qpc_status. On failure, qpc_last_error() describes
 * the problem until the next call on the same thread. Handles are opaque and
 * owned by the caller; free them with the matching *_free function.
 */

#ifndef QPC_QPC_H
#define QPC_QPC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(QPC_BUILDING_LIBRARY)
#define QPC_API __declspec(dllexport)
#else
#define QPC_API __declspec(dllimport)
#endif
#else
#define QPC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qpc_status {
    QPC_OK = 0,
    /* A null pointer or an out-of-range enum value. */
    QPC_ERR_INVALID_ARGUMENT = 1,
    /* The configuration was rejected; see qpc_last_error_field(). */
    QPC_ERR_CONFIG = 2,
    /* A file could not be read. */
    QPC_ERR_IO = 3,
    /* Malformed JSON. */
    QPC_ERR_PARSE = 4,
    QPC_ERR_INTERNAL = 5,
} qpc_status;

typedef enum qpc_format {
    QPC_FORMAT_JSON = 0,
    QPC_FORMAT_TEXT = 1,
} qpc_format;

typedef enum qpc_mode {
    QPC_MODE_SYMBOLIC = 0,
    QPC_MODE_ORACLE = 1,
} qpc_mode;

typedef enum qpc_variant {
    QPC_VARIANT_HONEST = 0,
    QPC_VARIANT_CHEATING = 1,
} qpc_variant;

typedef enum qpc_value {
    QPC_BIT0 = 0,
    QPC_BIT1 = 1,
    QPC_QUBIT_PLUS = 2,
    QPC_QUBIT_MINUS = 3,
} qpc_value;

typedef struct qpc_config qpc_config;
typedef struct qpc_result qpc_result;

QPC_API const char *qpc_version(void);

/* Message for the last failure on this thread, or "" after a success. */
QPC_API const char *qpc_last_error(void);
/* Dotted JSON path of the offending field for QPC_ERR_CONFIG, else "". */
QPC_API const char *qpc_last_error_field(void);
QPC_API const char *qpc_status_name(qpc_status status);

/* A configuration with every field at its default. */
QPC_API qpc_status qpc_config_new(qpc_config **out);
QPC_API qpc_status qpc_config_from_json(const char *json, qpc_config **out);
QPC_API qpc_status qpc_config_from_file(const char *path, qpc_config **out);
QPC_API qpc_status qpc_config_set_seed(qpc_config *config, uint64_t seed);
QPC_API qpc_status qpc_config_set_trials(qpc_config *config, uint64_t trials);
QPC_API qpc_status qpc_config_set_threads(qpc_config *config, uint64_t threads);
/* The validated configuration as JSON, every field spelled out. */
QPC_API qpc_status qpc_config_to_json(const qpc_config *config, qpc_result **out);
QPC_API void qpc_config_free(qpc_config *config);

/* Monte Carlo report over config.trials runs. Always passes. */
QPC_API qpc_status qpc_run_trials(const qpc_config *config, qpc_format format, qpc_result **out);
/* Full JSON transcript of one run (trial index `trial`). Passes when Bob accepts. */
QPC_API qpc_status qpc_run_transcript(const qpc_config *config, uint64_t trial, qpc_result **out);
/* The fixed three-pair worked example. Passes when every check matches. */
QPC_API qpc_status qpc_paper_example(qpc_variant variant, qpc_mode mode, qpc_format format, qpc_result **out);
/*
 * Compares Bob's pre-reveal views for two committed values over `trials` runs
 * each. Passes when the 95% interval of the excess distance contains 0.
 * With `leak` nonzero Bob also sees Alice's first committed label.
 */
QPC_API qpc_status qpc_hiding_test(
    const qpc_config *config,
    qpc_value value_a,
    qpc_value value_b,
    uint64_t trials,
    uint64_t bootstrap,
    int leak,
    qpc_format format,
    qpc_result **out);
/* Checks the label algebra against the statevector simulator. */
QPC_API qpc_status qpc_validate_algebra(qpc_format format, qpc_result **out);

/* NUL-terminated output; valid until qpc_result_free. */
QPC_API const char *qpc_result_text(const qpc_result *result);
QPC_API size_t qpc_result_size(const qpc_result *result);
/* 1 if the operation's check passed, else 0. */
QPC_API int qpc_result_passed(const qpc_result *result);
QPC_API void qpc_result_free(qpc_result *result);

#ifdef __cplusplus
}
#endif

#endif

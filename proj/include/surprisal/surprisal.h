// Copyright 2026 The Surprisal Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the surprisal pipeline and language model.
 *
 * All functions return an sp_status; on failure the message is available
 * from sp_last_error() on the calling thread until the next call. Handles
 * are opaque and owned by the caller; free them with the matching *_free.
 */
#ifndef SURPRISAL_SURPRISAL_H
#define SURPRISAL_SURPRISAL_H

#include <stddef.h>

#if defined(_WIN32)
#define SP_API __declspec(dllexport)
#else
#define SP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sp_status {
  SP_OK = 0,
  SP_ERR_INVALID_ARGUMENT = 1,
  SP_ERR_CONFIG = 2,
  SP_ERR_IO = 3,
  SP_ERR_SCHEMA = 4,
  SP_ERR_DOMAIN = 5,
  SP_ERR_SUPPORT = 6,
  SP_ERR_EMPTY_CORPUS = 7,
  SP_ERR_EMPTY_DOCUMENT = 8,
  SP_ERR_UNKNOWN_TOKEN = 9,
  SP_ERR_SAMPLE_SIZE = 10,
  SP_ERR_RANK_DEFICIENT = 11,
  SP_ERR_INSUFFICIENT_RATINGS = 12,
  SP_ERR_AUTH = 13,
  SP_ERR_RATE_LIMITED = 14,
  SP_ERR_NETWORK = 15,
  SP_ERR_PARTIAL_DATA = 16,
  SP_ERR_INTERNAL = 17
} sp_status;

typedef enum sp_score_mode { SP_MODE_CONDITIONAL_NGRAM = 0, SP_MODE_LITERAL_UNIGRAM = 1 } sp_score_mode;

typedef struct sp_config sp_config;
typedef struct sp_model sp_model;

/* Called once per log line, without the trailing newline. */
typedef void (*sp_log_fn)(const char* line, void* user);

SP_API const char* sp_version(void);
SP_API const char* sp_last_error(void);
SP_API const char* sp_status_name(sp_status status);
/* 0 for SP_OK, 2 for configuration and argument errors, 1 otherwise. */
SP_API int sp_exit_code(sp_status status);

/* ---- pipeline configuration ---- */
SP_API sp_status sp_config_new(sp_config** out);
SP_API void sp_config_free(sp_config* config);
/* key = value, same keys as the config file. */
SP_API sp_status sp_config_set(sp_config* config, const char* key, const char* value);
/* Applies a config file on top of the current settings. */
SP_API sp_status sp_config_load(sp_config* config, const char* path);
SP_API sp_status sp_config_validate(const sp_config* config);
/* Resolved settings as config-file text; release with sp_string_free. */
SP_API sp_status sp_config_resolved(const sp_config* config, char** out);
SP_API void sp_string_free(char* text);

/* ---- pipeline stages ----
 * stage: ingest, preprocess, train, score, metrics, analyze, agreement or
 * run-all. skipped (optional) receives the number of stages whose inputs
 * were unchanged. log may be NULL. */
SP_API sp_status sp_run_stage(const sp_config* config, const char* stage, sp_log_fn log, void* user,
                              int* skipped);

/* ---- language model ---- */
/* Trains on a token dump (one document per line, see the README). */
SP_API sp_status sp_model_train(const char* token_dump_path, int order, sp_model** out);
SP_API sp_status sp_model_load(const char* path, sp_model** out);
SP_API sp_status sp_model_save(const sp_model* model, const char* path);
SP_API void sp_model_free(sp_model* model);
SP_API int sp_model_order(const sp_model* model);
SP_API sp_status sp_model_prob(const sp_model* model, const char* word, const char* const* context,
                               size_t context_len, double* out);
/* Bits per token of one document. */
SP_API sp_status sp_model_score(const sp_model* model, const char* const* tokens, size_t n, sp_score_mode mode,
                                double* out);

#ifdef __cplusplus
}
#endif

#endif /* SURPRISAL_SURPRISAL_H */

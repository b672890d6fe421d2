/*
 * Copyright 2026 The pdws Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the pdws library. Objects are opaque handles owned by the
 * caller and released with the matching *_free function. Strings returned
 * through char** out-parameters are NUL-terminated UTF-8 and must be released
 * with pdws_string_free. On failure a function returns a non-zero status and
 * pdws_last_error() describes the problem (per thread). */

#ifndef PDWS_PDWS_H_
#define PDWS_PDWS_H_

#include <stddef.h>
#include <stdint.h>

#if defined(PDWS_BUILDING)
#define PDWS_API __attribute__((visibility("default")))
#else
#define PDWS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pdws_status {
  PDWS_OK = 0,
  PDWS_ERR_PARAMETER = 1,
  PDWS_ERR_KEY = 2,
  PDWS_ERR_EMBED_FAILURE = 3,
  PDWS_ERR_TRANSPORT = 4,
  PDWS_ERR_PROTOCOL = 5,
  PDWS_ERR_IO = 6,
  PDWS_ERR_UNSUPPORTED = 7,
  PDWS_ERR_FORMAT = 8,
  PDWS_ERR_INTERNAL = 100
} pdws_status;

typedef enum pdws_detect_mode {
  PDWS_DETECT_OFFSET = 0, /* check a single known offset */
  PDWS_DETECT_SCAN = 1,   /* slide over every offset, lowest match wins */
  PDWS_DETECT_ALL = 2     /* report every gadget found */
} pdws_detect_mode;

typedef struct pdws_params pdws_params;
typedef struct pdws_keys pdws_keys;
typedef struct pdws_model pdws_model;

/* Negative fields leave the model file's value unchanged; NULL endpoint too. */
typedef struct pdws_model_overrides {
  const char* endpoint;
  int32_t top_k;
  int32_t timeout_ms;
  int32_t retries;
} pdws_model_overrides;

PDWS_API const char* pdws_version(void);
PDWS_API const char* pdws_last_error(void);
PDWS_API void pdws_string_free(char* s);

/* Parameters */
PDWS_API pdws_status pdws_params_default(pdws_params** out);
PDWS_API pdws_status pdws_params_from_json(const char* json, pdws_params** out);
PDWS_API pdws_status pdws_params_to_json(const pdws_params* params, char** out);
PDWS_API pdws_status pdws_params_set_n(pdws_params* params, uint64_t n);
PDWS_API uint64_t pdws_params_n(const pdws_params* params);
PDWS_API uint64_t pdws_params_gadget_chars(const pdws_params* params);
PDWS_API void pdws_params_free(pdws_params* params);

/* Keys. A handle holds either a secret envelope (keys + full parameters) or a
 * public envelope. scheme_id may be NULL to pick the scheme matching
 * lambda_sig; seed32 may be NULL for fresh randomness. */
PDWS_API pdws_status pdws_keygen(const pdws_params* params, const char* scheme_id, const uint8_t* seed32,
                                 pdws_keys** out);
PDWS_API pdws_status pdws_keys_from_json(const char* json, pdws_keys** out);
PDWS_API int pdws_keys_has_secret(const pdws_keys* keys);
PDWS_API pdws_status pdws_keys_secret_json(const pdws_keys* keys, char** out);
PDWS_API pdws_status pdws_keys_public_json(const pdws_keys* keys, char** out);
/* Copy of the watermarking parameters of a secret envelope. */
PDWS_API pdws_status pdws_keys_params(const pdws_keys* keys, pdws_params** out);
PDWS_API void pdws_keys_free(pdws_keys* keys);

/* Models */
PDWS_API pdws_status pdws_model_from_json(const char* json, const pdws_model_overrides* overrides, pdws_model** out);
PDWS_API void pdws_model_free(pdws_model* model);

/* Watermarking. params may be NULL to use the envelope's parameters; when
 * given, its public fields must match the envelope. out_json receives
 * {"format_version", "text", "transcript"}. */
PDWS_API pdws_status pdws_watermark(const pdws_keys* keys, const pdws_params* params, const pdws_model* model,
                                    const char* prompt, uint64_t seed, unsigned threads, char** out_json);
/* k_pairs tiled gadgets; params->n is ignored. */
PDWS_API pdws_status pdws_tile(const pdws_keys* keys, const pdws_params* params, const pdws_model* model,
                               const char* prompt, size_t k_pairs, uint64_t seed, unsigned threads,
                               char** out_json);

/* Detection needs only public material. mode is a pdws_detect_mode value
 * (other values give PDWS_ERR_PARAMETER); offset is used by PDWS_DETECT_OFFSET.
 * *detected is set to 1 or 0; out_json may be NULL. */
PDWS_API pdws_status pdws_detect(const pdws_keys* keys, const char* text, int mode, size_t offset,
                                 unsigned threads, int* detected, char** out_json);

/* Extracts "text" from a watermark output document. */
PDWS_API pdws_status pdws_text_from_watermark_json(const char* json, char** out_text);

/* Benchmarking. params may be NULL as for pdws_watermark. Any of the out
 * strings may be NULL. */
PDWS_API pdws_status pdws_bench(const pdws_keys* keys, const pdws_params* params, const pdws_model* model,
                                const char* const* prompts, size_t n_prompts, size_t repeats, uint64_t seed,
                                size_t warmup, int censor_failures, char** out_json, char** out_runs_csv, char** out_plot_csv);
PDWS_API pdws_status pdws_expected_chars(uint64_t ell, uint64_t beta, uint64_t lambda_bits, uint64_t* out);

#ifdef __cplusplus
}
#endif

#endif /* PDWS_PDWS_H_ */

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

#include "pdws/pdws.h"

#include <cstring>
#include <new>
#include <optional>
#include <string>

#include <json.hpp>

#include "pdws/bench.hpp"
#include "pdws/detector.hpp"
#include "pdws/embedder.hpp"
#include "pdws/envelope.hpp"
#include "pdws/model.hpp"
#include "pdws/serialize.hpp"

struct pdws_params {
  pdws::WatermarkParams p;
};

struct pdws_keys {
  std::optional<pdws::SecretEnvelope> secret;
  pdws::PublicEnvelope pub;
};

struct pdws_model {
  std::shared_ptr<const pdws::Model> m;
};

namespace {

thread_local std::string g_last_error;

pdws_status Fail(pdws_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

pdws_status StatusFor(pdws::ErrorCode c) {
  switch (c) {
    case pdws::ErrorCode::kParameter: return PDWS_ERR_PARAMETER;
    case pdws::ErrorCode::kKey: return PDWS_ERR_KEY;
    case pdws::ErrorCode::kEmbedFailure: return PDWS_ERR_EMBED_FAILURE;
    case pdws::ErrorCode::kTransport: return PDWS_ERR_TRANSPORT;
    case pdws::ErrorCode::kProtocol: return PDWS_ERR_PROTOCOL;
    case pdws::ErrorCode::kIo: return PDWS_ERR_IO;
    case pdws::ErrorCode::kUnsupported: return PDWS_ERR_UNSUPPORTED;
    case pdws::ErrorCode::kFormat: return PDWS_ERR_FORMAT;
  }
  return PDWS_ERR_INTERNAL;
}

template <typename F>
pdws_status Guard(F&& f) {
  try {
    g_last_error.clear();
    f();
    return PDWS_OK;
  } catch (const pdws::Error& e) {
    return Fail(StatusFor(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return Fail(PDWS_ERR_FORMAT, e.what());
  } catch (const std::bad_alloc&) {
    return Fail(PDWS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(PDWS_ERR_INTERNAL, e.what());
  }
}

char* Dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void Need(const void* p, const char* what) {
  if (!p) throw pdws::ParameterError(std::string(what) + " must not be NULL");
}

const pdws::SecretEnvelope& SecretOf(const pdws_keys* keys) {
  Need(keys, "keys");
  if (!keys->secret) throw pdws::KeyError("operation needs a secret envelope");
  return *keys->secret;
}

// The envelope with its watermarking parameters optionally replaced.
pdws::SecretEnvelope WithParams(const pdws_keys* keys, const pdws_params* params) {
  pdws::SecretEnvelope env = SecretOf(keys);
  if (params) {
    pdws::SecretEnvelope alt = env;
    alt.params = params->p;
    if (!(alt.public_params() == env.public_params())) {
      throw pdws::ParameterError("parameters do not match the key envelope (ell, beta, lambda_sig, lambda_c)");
    }
    env = alt;
  }
  env.validate();
  return env;
}

}  // namespace

extern "C" {

const char* pdws_version(void) { return "1.0.0"; }

const char* pdws_last_error(void) { return g_last_error.c_str(); }

void pdws_string_free(char* s) { std::free(s); }

pdws_status pdws_params_default(pdws_params** out) {
  return Guard([&] {
    Need(out, "out");
    *out = new pdws_params{};
  });
}

pdws_status pdws_params_from_json(const char* json, pdws_params** out) {
  return Guard([&] {
    Need(json, "json");
    Need(out, "out");
    *out = new pdws_params{pdws::ParamsFromJson(json)};
  });
}

pdws_status pdws_params_to_json(const pdws_params* params, char** out) {
  return Guard([&] {
    Need(params, "params");
    Need(out, "out");
    *out = Dup(pdws::ParamsToJson(params->p));
  });
}

pdws_status pdws_params_set_n(pdws_params* params, uint64_t n) {
  return Guard([&] {
    Need(params, "params");
    if (n == 0) throw pdws::ParameterError("n must be >= 1");
    params->p.n = n;
  });
}

uint64_t pdws_params_n(const pdws_params* params) { return params ? params->p.n : 0; }

uint64_t pdws_params_gadget_chars(const pdws_params* params) { return params ? params->p.gadget_chars() : 0; }

void pdws_params_free(pdws_params* params) { delete params; }

pdws_status pdws_keygen(const pdws_params* params, const char* scheme_id, const uint8_t* seed32, pdws_keys** out) {
  return Guard([&] {
    Need(params, "params");
    Need(out, "out");
    std::optional<pdws::KeySeed> seed;
    if (seed32) {
      seed.emplace();
      std::memcpy(seed->data(), seed32, seed->size());
    }
    auto env = pdws::MakeSecretEnvelope(params->p, scheme_id ? scheme_id : "", seed);
    *out = new pdws_keys{env, env.public_envelope()};
  });
}

pdws_status pdws_keys_from_json(const char* json, pdws_keys** out) {
  return Guard([&] {
    Need(json, "json");
    Need(out, "out");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(json);
    } catch (const nlohmann::json::exception& e) {
      throw pdws::FormatError(std::string("key envelope: invalid JSON: ") + e.what());
    }
    if (j.is_object() && j.contains("secret_key")) {
      auto env = pdws::SecretEnvelopeFromJson(json);
      *out = new pdws_keys{env, env.public_envelope()};
    } else {
      *out = new pdws_keys{std::nullopt, pdws::PublicEnvelopeFromJson(json)};
    }
  });
}

int pdws_keys_has_secret(const pdws_keys* keys) { return keys && keys->secret ? 1 : 0; }

pdws_status pdws_keys_secret_json(const pdws_keys* keys, char** out) {
  return Guard([&] {
    Need(out, "out");
    *out = Dup(pdws::SecretEnvelopeToJson(SecretOf(keys)));
  });
}

pdws_status pdws_keys_public_json(const pdws_keys* keys, char** out) {
  return Guard([&] {
    Need(keys, "keys");
    Need(out, "out");
    *out = Dup(pdws::PublicEnvelopeToJson(keys->pub));
  });
}

pdws_status pdws_keys_params(const pdws_keys* keys, pdws_params** out) {
  return Guard([&] {
    Need(out, "out");
    *out = new pdws_params{SecretOf(keys).params};
  });
}

void pdws_keys_free(pdws_keys* keys) { delete keys; }

pdws_status pdws_model_from_json(const char* json, const pdws_model_overrides* ov, pdws_model** out) {
  return Guard([&] {
    Need(json, "json");
    Need(out, "out");
    auto cfg = pdws::ModelConfigFromJson(json);
    if (ov) {
      if (ov->endpoint && *ov->endpoint) cfg.endpoint = ov->endpoint;
      if (ov->top_k >= 0) cfg.top_k = static_cast<std::uint32_t>(ov->top_k);
      if (ov->timeout_ms >= 0) cfg.timeout_ms = static_cast<std::uint32_t>(ov->timeout_ms);
      if (ov->retries >= 0) cfg.retries = static_cast<std::uint32_t>(ov->retries);
    }
    *out = new pdws_model{pdws::MakeModel(cfg)};
  });
}

void pdws_model_free(pdws_model* model) { delete model; }

pdws_status pdws_watermark(const pdws_keys* keys, const pdws_params* params, const pdws_model* model,
                           const char* prompt, uint64_t seed, unsigned threads, char** out_json) {
  return Guard([&] {
    Need(model, "model");
    Need(out_json, "out_json");
    const auto env = WithParams(keys, params);
    const auto result = pdws::Watermark(env, model->m, pdws::FromUtf8(prompt ? prompt : ""), {seed, threads});
    *out_json = Dup(pdws::WatermarkResultToJson(result, env.params));
  });
}

pdws_status pdws_tile(const pdws_keys* keys, const pdws_params* params, const pdws_model* model,
                      const char* prompt, size_t k_pairs, uint64_t seed, unsigned threads, char** out_json) {
  return Guard([&] {
    Need(model, "model");
    Need(out_json, "out_json");
    const auto env = WithParams(keys, params);
    const auto result =
        pdws::TileCompress(env, model->m, pdws::FromUtf8(prompt ? prompt : ""), k_pairs, {seed, threads});
    *out_json = Dup(pdws::WatermarkResultToJson(result, env.params));
  });
}

pdws_status pdws_detect(const pdws_keys* keys, const char* text, int mode, size_t offset,
                        unsigned threads, int* detected, char** out_json) {
  return Guard([&] {
    Need(keys, "keys");
    Need(text, "text");
    Need(detected, "detected");
    const auto t = pdws::FromUtf8(text);
    const auto& pub = keys->pub;
    std::string json;
    switch (mode) {
      case PDWS_DETECT_OFFSET: {
        auto r = pdws::DetectAt(pub.keys, pub.params, t, offset);
        *detected = r.detected;
        json = pdws::DetectionToJson(r);
        break;
      }
      case PDWS_DETECT_SCAN: {
        auto r = pdws::Detect(pub.keys, pub.params, t, {threads});
        *detected = r.detected;
        json = pdws::DetectionToJson(r);
        break;
      }
      case PDWS_DETECT_ALL: {
        auto rs = pdws::DetectAll(pub.keys, pub.params, t, {threads});
        *detected = !rs.empty();
        json = pdws::DetectionsToJson(rs);
        break;
      }
      default:
        throw pdws::ParameterError("unknown detect mode");
    }
    if (out_json) *out_json = Dup(json);
  });
}

pdws_status pdws_text_from_watermark_json(const char* json, char** out_text) {
  return Guard([&] {
    Need(json, "json");
    Need(out_text, "out_text");
    auto t = pdws::TextFromWatermarkJson(json);
    if (!t) throw pdws::FormatError("not a watermark output document");
    *out_text = Dup(pdws::ToUtf8(*t));
  });
}

pdws_status pdws_bench(const pdws_keys* keys, const pdws_params* params, const pdws_model* model,
                       const char* const* prompts, size_t n_prompts, size_t repeats, uint64_t seed, size_t warmup,
                       int censor_failures, char** out_json, char** out_runs_csv, char** out_plot_csv) {
  return Guard([&] {
    Need(model, "model");
    Need(prompts, "prompts");
    std::vector<pdws::Text> ps;
    for (size_t i = 0; i < n_prompts; ++i) {
      Need(prompts[i], "prompt");
      ps.push_back(pdws::FromUtf8(prompts[i]));
    }
    pdws::BenchOptions opt;
    opt.repeats = repeats;
    opt.seed = seed;
    opt.warmup = warmup;
    opt.censor_failures = censor_failures != 0;
    const auto report = pdws::RunBench(WithParams(keys, params), model->m, ps, opt);
    if (out_json) *out_json = Dup(pdws::BenchReportToJson(report));
    if (out_runs_csv) *out_runs_csv = Dup(pdws::BenchRunsCsv(report));
    if (out_plot_csv) *out_plot_csv = Dup(pdws::BenchPlotCsv(report));
  });
}

pdws_status pdws_expected_chars(uint64_t ell, uint64_t beta, uint64_t lambda_bits, uint64_t* out) {
  return Guard([&] {
    Need(out, "out");
    *out = pdws::ExpectedChars(ell, beta, lambda_bits);
  });
}

}  // extern "C"

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

#include "pdws/serialize.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

namespace pdws {

using nlohmann::json;

namespace {

json Parse(std::string_view text, const char* what) {
  try {
    json j = json::parse(text);
    if (!j.is_object()) throw FormatError(std::string(what) + ": expected a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw FormatError(std::string(what) + ": invalid JSON: " + e.what());
  }
}

void RejectUnknown(const json& j, std::initializer_list<const char*> allowed, const char* what) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!ok.count(key)) throw FormatError(std::string(what) + ": unknown field '" + key + "'");
  }
}

void CheckVersion(const json& j, const char* what) {
  if (!j.contains("format_version")) throw FormatError(std::string(what) + ": missing format_version");
  if (!j["format_version"].is_number_integer() || j["format_version"].get<int>() != kFormatVersion) {
    throw FormatError(std::string(what) + ": unsupported format_version");
  }
}

template <typename T>
T Get(const json& j, const char* key, const char* what) {
  if (!j.contains(key)) throw FormatError(std::string(what) + ": missing field '" + key + "'");
  try {
    const auto& v = j.at(key);
    if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
      if (!v.is_number_integer()) throw FormatError("");
      if (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0) throw FormatError("");
    }
    return v.get<T>();
  } catch (const std::exception&) {
    throw FormatError(std::string(what) + ": field '" + key + "' has the wrong type");
  }
}

template <typename T>
T GetOr(const json& j, const char* key, T fallback, const char* what) {
  return j.contains(key) ? Get<T>(j, key, what) : fallback;
}

json ParamsJson(const WatermarkParams& p) {
  return json{{"ell", p.ell},   {"beta", p.beta},         {"gamma_max", p.gamma_max}, {"a_max", p.a_max},
              {"n", p.n},       {"lambda_sig", p.lambda_sig}, {"lambda_c", p.lambda_c}, {"alpha", p.alpha}};
}

WatermarkParams ParamsFrom(const json& j, const char* what) {
  WatermarkParams p;
  p.ell = Get<std::uint32_t>(j, "ell", what);
  p.beta = Get<std::uint32_t>(j, "beta", what);
  p.gamma_max = Get<std::uint32_t>(j, "gamma_max", what);
  p.a_max = Get<std::uint32_t>(j, "a_max", what);
  p.n = Get<std::uint64_t>(j, "n", what);
  p.lambda_sig = Get<std::uint32_t>(j, "lambda_sig", what);
  p.lambda_c = Get<std::uint32_t>(j, "lambda_c", what);
  p.alpha = Get<double>(j, "alpha", what);
  return p;
}

json EccJson(const EccProfile& e) {
  return json{{"data_symbols", e.data_symbols},
              {"parity_symbols", e.parity_symbols},
              {"symbol_bits", e.symbol_bits},
              {"t_correctable", e.t_correctable},
              {"lambda_sig", e.lambda_sig}};
}

EccProfile EccFrom(const json& j) {
  constexpr const char* what = "ecc profile";
  if (!j.is_object()) throw FormatError("ecc profile: expected an object");
  RejectUnknown(j, {"data_symbols", "parity_symbols", "symbol_bits", "t_correctable", "lambda_sig"}, what);
  EccProfile e;
  e.data_symbols = Get<std::size_t>(j, "data_symbols", what);
  e.parity_symbols = Get<std::size_t>(j, "parity_symbols", what);
  e.symbol_bits = Get<std::size_t>(j, "symbol_bits", what);
  e.t_correctable = Get<std::size_t>(j, "t_correctable", what);
  e.lambda_sig = Get<std::size_t>(j, "lambda_sig", what);
  return e;
}

Salt SaltFrom(const std::string& hex) {
  const auto raw = FromHex(hex);
  if (raw.size() != kSaltBytes) throw FormatError("hash_salt must be 16 bytes of hex");
  Salt s;
  std::copy(raw.begin(), raw.end(), s.begin());
  return s;
}

json PublicParamsJson(const PublicParams& p) {
  return json{{"ell", p.ell},           {"beta", p.beta},       {"lambda_sig", p.lambda_sig},
              {"lambda_c", p.lambda_c}, {"ecc", EccJson(p.ecc)}, {"hash_salt", ToHex(p.salt)}};
}

std::vector<std::uint8_t> HexField(const json& j, const char* key, const char* what) {
  try {
    return FromHex(Get<std::string>(j, key, what));
  } catch (const FormatError& e) {
    throw FormatError(std::string(what) + ": field '" + key + "': " + e.what());
  }
}

json BlockJson(const BlockRecord& b) {
  return json{{"attempts", b.attempts},
              {"planted_error", b.planted_error},
              {"best_hamming", b.best_hamming},
              {"text", ToUtf8(b.text)},
              {"sampled_chars", b.sampled_chars}};
}

json DetectionJson(const DetectionResult& r) {
  json j{{"detected", r.detected}, {"corrected_errors", r.corrected_errors}};
  j["offset"] = r.detected ? json(r.offset) : json(nullptr);
  j["recovered_sig"] = r.detected ? r.recovered_sig.to_hex() : std::string();
  j["message_block"] = ToUtf8(r.message_block);
  return j;
}

Text TextField(const json& j, const char* key, const char* what) {
  return FromUtf8(Get<std::string>(j, key, what));
}

}  // namespace

std::string ParamsToJson(const WatermarkParams& params) {
  json j = ParamsJson(params);
  j["format_version"] = kFormatVersion;
  return j.dump(2);
}

WatermarkParams ParamsFromJson(std::string_view text) {
  constexpr const char* what = "params";
  const json j = Parse(text, what);
  RejectUnknown(j, {"format_version", "ell", "beta", "gamma_max", "a_max", "n", "lambda_sig", "lambda_c", "alpha"},
                what);
  CheckVersion(j, what);
  WatermarkParams p = ParamsFrom(j, what);
  p.validate();
  return p;
}

std::string ModelConfigToJson(const ModelConfig& c) {
  json j{{"format_version", kFormatVersion}, {"kind", ModelKindName(c.kind)}, {"seed", c.seed}};
  if (!c.alphabet.empty()) j["alphabet"] = ToUtf8(c.alphabet);
  if (c.kind == ModelKind::kScriptedMock) {
    json segs = json::array();
    for (const auto& s : c.segments) {
      segs.push_back(s.forced.empty() ? json{{"free", s.free_len}} : json{{"forced", ToUtf8(s.forced)}});
    }
    j["segments"] = segs;
    j["repeat"] = c.repeat;
  }
  if (c.kind == ModelKind::kRemote) {
    j["endpoint"] = c.endpoint;
    j["top_k"] = c.top_k;
    j["timeout_ms"] = c.timeout_ms;
    j["retries"] = c.retries;
  }
  return j.dump(2);
}

ModelConfig ModelConfigFromJson(std::string_view text) {
  constexpr const char* what = "model config";
  const json j = Parse(text, what);
  RejectUnknown(j, {"format_version", "kind", "seed", "alphabet", "segments", "repeat", "endpoint", "top_k",
                    "timeout_ms", "retries"},
                what);
  CheckVersion(j, what);
  ModelConfig c;
  try {
    c.kind = ParseModelKind(Get<std::string>(j, "kind", what));
  } catch (const ParameterError& e) {
    throw FormatError(e.what());
  }
  c.seed = GetOr<std::uint64_t>(j, "seed", 0, what);
  if (j.contains("alphabet")) c.alphabet = TextField(j, "alphabet", what);
  if (j.contains("segments")) {
    if (!j["segments"].is_array()) throw FormatError("model config: segments must be an array");
    for (const auto& s : j["segments"]) {
      if (!s.is_object()) throw FormatError("model config: segment must be an object");
      RejectUnknown(s, {"forced", "free"}, "model segment");
      ScriptSegment seg;
      if (s.contains("forced") == s.contains("free")) {
        throw FormatError("model config: segment needs exactly one of forced/free");
      }
      if (s.contains("forced")) {
        seg.forced = TextField(s, "forced", "model segment");
      } else {
        seg.free_len = Get<std::size_t>(s, "free", "model segment");
      }
      c.segments.push_back(std::move(seg));
    }
  }
  c.repeat = GetOr<bool>(j, "repeat", true, what);
  c.endpoint = GetOr<std::string>(j, "endpoint", "", what);
  c.top_k = GetOr<std::uint32_t>(j, "top_k", 64, what);
  c.timeout_ms = GetOr<std::uint32_t>(j, "timeout_ms", 10000, what);
  c.retries = GetOr<std::uint32_t>(j, "retries", 2, what);
  return c;
}

std::string SecretEnvelopeToJson(const SecretEnvelope& env) {
  json params = ParamsJson(env.params);
  const PublicParams pub = env.public_params();
  params["ecc"] = EccJson(pub.ecc);
  params["hash_salt"] = ToHex(env.salt);
  json j{{"format_version", kFormatVersion},
         {"scheme_id", env.keys.scheme_id},
         {"public_key", ToHex(env.keys.verify_key)},
         {"secret_key", ToHex(env.keys.signing_key)},
         {"params", params}};
  return j.dump(2);
}

SecretEnvelope SecretEnvelopeFromJson(std::string_view text) {
  constexpr const char* what = "secret envelope";
  const json j = Parse(text, what);
  RejectUnknown(j, {"format_version", "scheme_id", "public_key", "secret_key", "params"}, what);
  CheckVersion(j, what);
  if (!j.contains("secret_key")) throw KeyError("secret envelope: missing secret_key");
  SecretEnvelope env;
  env.keys.scheme_id = Get<std::string>(j, "scheme_id", what);
  env.keys.verify_key = HexField(j, "public_key", what);
  env.keys.signing_key = HexField(j, "secret_key", what);
  if (!j.contains("params") || !j["params"].is_object()) throw FormatError("secret envelope: missing params");
  const json& p = j["params"];
  RejectUnknown(p,
                {"ell", "beta", "gamma_max", "a_max", "n", "lambda_sig", "lambda_c", "alpha", "ecc", "hash_salt"},
                "secret envelope params");
  env.params = ParamsFrom(p, "secret envelope params");
  env.salt = SaltFrom(Get<std::string>(p, "hash_salt", "secret envelope params"));
  if (!p.contains("ecc")) throw FormatError("secret envelope params: missing ecc");
  if (EccFrom(p["ecc"]) != env.public_params().ecc) {
    throw ParameterError("secret envelope: ecc profile does not match parameters");
  }
  env.validate();
  return env;
}

std::string PublicEnvelopeToJson(const PublicEnvelope& env) {
  json j{{"format_version", kFormatVersion},
         {"scheme_id", env.keys.scheme_id},
         {"public_key", ToHex(env.keys.verify_key)},
         {"params", PublicParamsJson(env.params)}};
  return j.dump(2);
}

PublicEnvelope PublicEnvelopeFromJson(std::string_view text) {
  constexpr const char* what = "public envelope";
  const json j = Parse(text, what);
  RejectUnknown(j, {"format_version", "scheme_id", "public_key", "secret_key", "params"}, what);
  CheckVersion(j, what);
  PublicEnvelope env;
  env.keys.scheme_id = Get<std::string>(j, "scheme_id", what);
  env.keys.verify_key = HexField(j, "public_key", what);
  if (!j.contains("params") || !j["params"].is_object()) throw FormatError("public envelope: missing params");
  const json& p = j["params"];
  RejectUnknown(p,
                {"ell", "beta", "gamma_max", "a_max", "n", "lambda_sig", "lambda_c", "alpha", "ecc", "hash_salt"},
                "public envelope params");
  env.params.ell = Get<std::uint32_t>(p, "ell", what);
  env.params.beta = Get<std::uint32_t>(p, "beta", what);
  env.params.lambda_sig = Get<std::uint32_t>(p, "lambda_sig", what);
  env.params.lambda_c = Get<std::uint32_t>(p, "lambda_c", what);
  if (!p.contains("ecc")) throw FormatError("public envelope params: missing ecc");
  env.params.ecc = EccFrom(p["ecc"]);
  env.params.salt = SaltFrom(Get<std::string>(p, "hash_salt", what));
  env.params.validate();
  CheckKeyMaterial(env.keys);
  if (SchemeById(env.keys.scheme_id).signature_bits() != env.params.lambda_sig) {
    throw ParameterError("public envelope: scheme signature length does not match lambda_sig");
  }
  return env;
}

std::string WatermarkResultToJson(const WatermarkResult& result, const WatermarkParams& params) {
  json gadgets = json::array();
  for (const auto& g : result.gadgets) {
    json blocks = json::array();
    for (const auto& b : g.blocks) blocks.push_back(BlockJson(b));
    gadgets.push_back(json{{"offset", g.offset},
                           {"message", ToUtf8(g.message)},
                           {"masked_codeword", g.masked_codeword.to_hex()},
                           {"gamma_used", g.gamma_used},
                           {"sampled_chars", g.sampled_chars()},
                           {"blocks", blocks}});
  }
  json transcript{{"params", ParamsJson(params)},
                  {"seed", result.seed},
                  {"tail_chars", result.tail_chars},
                  {"gadgets", gadgets}};
  json j{{"format_version", kFormatVersion}, {"text", ToUtf8(result.text)}, {"transcript", transcript}};
  return j.dump(2);
}

std::optional<Text> TextFromWatermarkJson(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception&) {
    return std::nullopt;
  }
  if (!j.is_object() || !j.contains("format_version") || !j.contains("text") || !j["text"].is_string()) {
    return std::nullopt;
  }
  return FromUtf8(j["text"].get<std::string>());
}

std::string DetectionToJson(const DetectionResult& result) {
  json j = DetectionJson(result);
  j["format_version"] = kFormatVersion;
  return j.dump(2);
}

std::string DetectionsToJson(const std::vector<DetectionResult>& results) {
  json arr = json::array();
  for (const auto& r : results) arr.push_back(DetectionJson(r));
  json j{{"format_version", kFormatVersion}, {"detected", !results.empty()}, {"detections", arr}};
  return j.dump(2);
}

}  // namespace pdws

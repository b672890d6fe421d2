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

// JSON documents. Every document carries "format_version": 1 and unknown
// fields are rejected with FormatError.

#ifndef PDWS_SERIALIZE_HPP_
#define PDWS_SERIALIZE_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pdws/core.hpp"
#include "pdws/detector.hpp"
#include "pdws/embedder.hpp"
#include "pdws/envelope.hpp"
#include "pdws/model.hpp"

namespace pdws {

inline constexpr int kFormatVersion = 1;

std::string ParamsToJson(const WatermarkParams& params);
WatermarkParams ParamsFromJson(std::string_view json);

std::string ModelConfigToJson(const ModelConfig& config);
ModelConfig ModelConfigFromJson(std::string_view json);

// {format_version, scheme_id, public_key, secret_key, params{...}}
std::string SecretEnvelopeToJson(const SecretEnvelope& env);
SecretEnvelope SecretEnvelopeFromJson(std::string_view json);
// Same shape without secret_key and with only the public parameters.
std::string PublicEnvelopeToJson(const PublicEnvelope& env);
// Accepts public or secret envelopes; secret material is dropped.
PublicEnvelope PublicEnvelopeFromJson(std::string_view json);

// {format_version, text, transcript{params, seed, tail_chars, gadgets[...]}}
std::string WatermarkResultToJson(const WatermarkResult& result, const WatermarkParams& params);
// Text field of a watermark output document, or nullopt if `json` is not one.
std::optional<Text> TextFromWatermarkJson(std::string_view json);

std::string DetectionToJson(const DetectionResult& result);
std::string DetectionsToJson(const std::vector<DetectionResult>& results);

}  // namespace pdws

#endif  // PDWS_SERIALIZE_HPP_

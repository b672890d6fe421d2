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

// Black-box auto-regressive model abstraction. Mock models emit
// single-character tokens; the remote adapter may return longer tokens.

#ifndef PDWS_MODEL_HPP_
#define PDWS_MODEL_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "pdws/core.hpp"
#include "pdws/rng.hpp"

namespace pdws {

class TransportError : public Error {
 public:
  explicit TransportError(const std::string& what) : Error(ErrorCode::kTransport, what) {}
};

class ProtocolError : public Error {
 public:
  explicit ProtocolError(const std::string& what) : Error(ErrorCode::kProtocol, what) {}
};

struct TokenCandidate {
  Text token;
  double probability = 0.0;
};

struct TokenDistribution {
  std::vector<TokenCandidate> support;

  // Probabilities within [0,1] summing to 1 +- 1e-9, tokens non-empty.
  bool valid() const;
};

enum class ModelKind { kUniformMock, kScriptedMock, kRemote };

std::string ModelKindName(ModelKind kind);
ModelKind ParseModelKind(const std::string& name);

// One entry of a scripted schedule: either a forced string or a run of
// `free_len` characters drawn uniformly from the alphabet.
struct ScriptSegment {
  Text forced;
  std::size_t free_len = 0;

  std::size_t length() const { return forced.empty() ? free_len : forced.size(); }
};

struct ModelConfig {
  ModelKind kind = ModelKind::kUniformMock;
  std::uint64_t seed = 0;
  Text alphabet;
  // scripted-mock
  std::vector<ScriptSegment> segments;
  bool repeat = true;
  // remote
  std::string endpoint;
  std::uint32_t top_k = 64;
  std::uint32_t timeout_ms = 10000;
  std::uint32_t retries = 2;

  // Printable ASCII subset of size 64 used when no alphabet is given.
  static Text DefaultAlphabet();
};

class Model {
 public:
  virtual ~Model() = default;
  virtual ModelKind kind() const = 0;
  virtual const ModelConfig& config() const = 0;
  // Distribution of the next token given the prompt and the characters
  // generated so far. Must be safe to call concurrently.
  virtual TokenDistribution next_distribution(std::u32string_view prompt,
                                              std::u32string_view context) const = 0;
};

// Throws ParameterError for inconsistent configurations.
std::shared_ptr<const Model> MakeModel(const ModelConfig& config);

TokenDistribution NextDistribution(const Model& model, std::u32string_view prompt,
                                   std::u32string_view context);

// Multinomial draw from `dist`, consuming one value from `rng`.
const Text& SampleToken(const TokenDistribution& dist, SamplerState& rng);

// Samples tokens until at least `min_new` characters exist past `context` and
// returns every sampled character, including any overshoot of the last token.
Text SampleAtLeast(const Model& model, std::u32string_view prompt, std::u32string_view context,
                   std::size_t min_new, SamplerState& rng);

// Exactly `n_chars` characters of iterative multinomial sampling.
Text GenModel(const Model& model, std::size_t n_chars, std::u32string_view prompt,
              std::u32string_view context, SamplerState& rng);

// Analytic min-entropy, in bits, of the `ell` characters starting at generated
// position `block_start`. Mock kinds only.
double MinEntropyPerBlock(const Model& model, std::size_t ell, std::size_t block_start = 0);

}  // namespace pdws

#endif  // PDWS_MODEL_HPP_

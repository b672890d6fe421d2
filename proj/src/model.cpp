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

#include "pdws/model.hpp"

#include <cmath>
#include <numeric>

namespace pdws {

std::shared_ptr<const Model> MakeRemoteModel(const ModelConfig& config);  // remote_model.cpp

namespace {

TokenDistribution UniformOver(const Text& alphabet) {
  TokenDistribution d;
  d.support.reserve(alphabet.size());
  const double p = 1.0 / static_cast<double>(alphabet.size());
  for (char32_t c : alphabet) d.support.push_back({Text(1, c), p});
  return d;
}

void CheckAlphabet(const Text& alphabet) {
  if (alphabet.empty()) throw ParameterError("model: alphabet must not be empty");
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    for (std::size_t j = i + 1; j < alphabet.size(); ++j) {
      if (alphabet[i] == alphabet[j]) throw ParameterError("model: alphabet has duplicate characters");
    }
  }
}

class UniformMock final : public Model {
 public:
  explicit UniformMock(ModelConfig config) : config_(std::move(config)) {
    if (config_.alphabet.empty()) config_.alphabet = ModelConfig::DefaultAlphabet();
    CheckAlphabet(config_.alphabet);
    dist_ = UniformOver(config_.alphabet);
  }
  ModelKind kind() const override { return ModelKind::kUniformMock; }
  const ModelConfig& config() const override { return config_; }
  TokenDistribution next_distribution(std::u32string_view, std::u32string_view) const override {
    return dist_;
  }

 private:
  ModelConfig config_;
  TokenDistribution dist_;
};

class ScriptedMock final : public Model {
 public:
  explicit ScriptedMock(ModelConfig config) : config_(std::move(config)) {
    if (config_.alphabet.empty()) config_.alphabet = ModelConfig::DefaultAlphabet();
    CheckAlphabet(config_.alphabet);
    for (const auto& s : config_.segments) {
      if (s.length() == 0) throw ParameterError("scripted-mock: empty segment");
      if (!s.forced.empty() && s.free_len != 0) {
        throw ParameterError("scripted-mock: segment is either forced or free");
      }
      period_ += s.length();
    }
    free_ = UniformOver(config_.alphabet);
  }
  ModelKind kind() const override { return ModelKind::kScriptedMock; }
  const ModelConfig& config() const override { return config_; }

  TokenDistribution next_distribution(std::u32string_view, std::u32string_view context) const override {
    if (const char32_t* c = forced_at(context.size())) {
      TokenDistribution d;
      d.support.push_back({Text(1, *c), 1.0});
      return d;
    }
    return free_;
  }

  // Forced character at generated position `pos`, or null in a free region.
  const char32_t* forced_at(std::size_t pos) const {
    if (period_ == 0) return nullptr;
    if (pos >= period_) {
      if (!config_.repeat) return nullptr;
      pos %= period_;
    }
    for (const auto& s : config_.segments) {
      if (pos < s.length()) return s.forced.empty() ? nullptr : &s.forced[pos];
      pos -= s.length();
    }
    return nullptr;
  }

 private:
  ModelConfig config_;
  TokenDistribution free_;
  std::size_t period_ = 0;
};

}  // namespace

Text ModelConfig::DefaultAlphabet() {
  return U"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 .";
}

bool TokenDistribution::valid() const {
  if (support.empty()) return false;
  double sum = 0.0;
  for (const auto& c : support) {
    if (c.token.empty()) return false;
    if (!(c.probability >= 0.0 && c.probability <= 1.0)) return false;
    sum += c.probability;
  }
  return std::abs(sum - 1.0) <= 1e-9;
}

std::string ModelKindName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kUniformMock: return "uniform-mock";
    case ModelKind::kScriptedMock: return "scripted-mock";
    case ModelKind::kRemote: return "remote";
  }
  return "unknown";
}

ModelKind ParseModelKind(const std::string& name) {
  if (name == "uniform-mock") return ModelKind::kUniformMock;
  if (name == "scripted-mock") return ModelKind::kScriptedMock;
  if (name == "remote") return ModelKind::kRemote;
  throw ParameterError("model: unknown kind '" + name + "'");
}

std::shared_ptr<const Model> MakeModel(const ModelConfig& config) {
  switch (config.kind) {
    case ModelKind::kUniformMock: return std::make_shared<UniformMock>(config);
    case ModelKind::kScriptedMock: return std::make_shared<ScriptedMock>(config);
    case ModelKind::kRemote: return MakeRemoteModel(config);
  }
  throw ParameterError("model: unknown kind");
}

TokenDistribution NextDistribution(const Model& model, std::u32string_view prompt,
                                   std::u32string_view context) {
  return model.next_distribution(prompt, context);
}

const Text& SampleToken(const TokenDistribution& dist, SamplerState& rng) {
  if (dist.support.empty()) throw ProtocolError("sample: empty distribution");
  const double u = rng.next_double();
  double acc = 0.0;
  for (const auto& c : dist.support) {
    acc += c.probability;
    if (u < acc) return c.token;
  }
  // Rounding left u above the final cumulative sum.
  for (auto it = dist.support.rbegin(); it != dist.support.rend(); ++it) {
    if (it->probability > 0.0) return it->token;
  }
  return dist.support.back().token;
}

Text SampleAtLeast(const Model& model, std::u32string_view prompt, std::u32string_view context,
                   std::size_t min_new, SamplerState& rng) {
  Text work(context);
  const std::size_t base = work.size();
  while (work.size() - base < min_new) {
    const auto dist = model.next_distribution(prompt, work);
    work.append(SampleToken(dist, rng));
  }
  return work.substr(base);
}

Text GenModel(const Model& model, std::size_t n_chars, std::u32string_view prompt,
              std::u32string_view context, SamplerState& rng) {
  if (n_chars == 0) throw ParameterError("gen_model: n_chars must be >= 1");
  Text out = SampleAtLeast(model, prompt, context, n_chars, rng);
  out.resize(n_chars);
  return out;
}

double MinEntropyPerBlock(const Model& model, std::size_t ell, std::size_t block_start) {
  const double per_char = std::log2(static_cast<double>(model.config().alphabet.empty()
                                                            ? ModelConfig::DefaultAlphabet().size()
                                                            : model.config().alphabet.size()));
  switch (model.kind()) {
    case ModelKind::kUniformMock:
      return static_cast<double>(ell) * per_char;
    case ModelKind::kScriptedMock: {
      const auto& scripted = static_cast<const ScriptedMock&>(model);
      std::size_t free_positions = 0;
      for (std::size_t i = 0; i < ell; ++i) {
        if (scripted.forced_at(block_start + i) == nullptr) ++free_positions;
      }
      return static_cast<double>(free_positions) * per_char;
    }
    case ModelKind::kRemote:
      break;
  }
  throw UnsupportedError("min_entropy_per_block: not available for remote models");
}

}  // namespace pdws

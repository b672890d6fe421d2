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

// HTTP adapter for inference endpoints that expose a top-k candidate list.
//
//   request:  {"prompt": str, "context": str, "top_k": int}
//   response: {"candidates": [{"token": str, "logprob": float}, ...]}

#include <algorithm>
#include <cmath>
#include <map>

#include <httplib.h>
#include <json.hpp>

#include "pdws/model.hpp"

namespace pdws {
namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Endpoint ParseEndpoint(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos || url.compare(0, scheme_end, "http") != 0) {
    throw ParameterError("remote: endpoint must be an http:// URL, got '" + url + "'");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  Endpoint ep;
  ep.origin = url.substr(0, path_start);
  ep.path = path_start == std::string::npos ? "/" : url.substr(path_start);
  if (ep.origin.size() <= scheme_end + 3) throw ParameterError("remote: endpoint has no host");
  return ep;
}

class RemoteModel final : public Model {
 public:
  explicit RemoteModel(ModelConfig config) : config_(std::move(config)), endpoint_(ParseEndpoint(config_.endpoint)) {
    if (config_.top_k == 0) throw ParameterError("remote: top_k must be positive");
  }
  ModelKind kind() const override { return ModelKind::kRemote; }
  const ModelConfig& config() const override { return config_; }

  TokenDistribution next_distribution(std::u32string_view prompt, std::u32string_view context) const override {
    nlohmann::json req = {{"prompt", ToUtf8(prompt)}, {"context", ToUtf8(context)}, {"top_k", config_.top_k}};
    const std::string body = req.dump();

    std::string last_error;
    for (std::uint32_t attempt = 0; attempt <= config_.retries; ++attempt) {
      httplib::Client client(endpoint_.origin);
      const auto timeout = std::chrono::milliseconds(config_.timeout_ms);
      client.set_connection_timeout(timeout);
      client.set_read_timeout(timeout);
      client.set_write_timeout(timeout);
      auto res = client.Post(endpoint_.path, body, "application/json");
      if (!res) {
        last_error = httplib::to_string(res.error());
        continue;
      }
      if (res->status >= 500) {
        last_error = "HTTP " + std::to_string(res->status);
        continue;
      }
      if (res->status != 200) {
        throw ProtocolError("remote: endpoint answered HTTP " + std::to_string(res->status));
      }
      return Parse(res->body);
    }
    throw TransportError("remote: " + endpoint_.origin + endpoint_.path + " unreachable after " +
                         std::to_string(config_.retries + 1) + " attempt(s): " + last_error);
  }

 private:
  TokenDistribution Parse(const std::string& body) const {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
      throw ProtocolError(std::string("remote: response is not JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("candidates") || !doc["candidates"].is_array()) {
      throw ProtocolError("remote: response lacks a candidates array");
    }
    // Duplicate tokens are merged; the list is cut to top_k by logprob.
    std::map<Text, double> merged;
    std::vector<std::pair<double, Text>> ranked;
    for (const auto& c : doc["candidates"]) {
      if (!c.is_object() || !c.contains("token") || !c.contains("logprob") || !c["token"].is_string() ||
          !c["logprob"].is_number()) {
        throw ProtocolError("remote: malformed candidate entry");
      }
      const double lp = c["logprob"].get<double>();
      if (!std::isfinite(lp) && !(std::isinf(lp) && lp < 0)) throw ProtocolError("remote: non-finite logprob");
      Text token;
      try {
        token = FromUtf8(c["token"].get<std::string>());
      } catch (const FormatError& e) {
        throw ProtocolError(std::string("remote: ") + e.what());
      }
      if (token.empty()) throw ProtocolError("remote: empty token in candidates");
      ranked.emplace_back(lp, std::move(token));
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    if (ranked.size() > config_.top_k) ranked.resize(config_.top_k);
    if (ranked.empty() || !std::isfinite(ranked.front().first)) {
      throw ProtocolError("remote: no candidate with finite logprob");
    }
    const double top = ranked.front().first;
    double z = 0.0;
    for (auto& [lp, tok] : ranked) {
      const double w = std::exp(lp - top);
      merged[tok] += w;
      z += w;
    }
    TokenDistribution d;
    d.support.reserve(merged.size());
    for (const auto& [lp, tok] : ranked) {
      auto it = merged.find(tok);
      if (it == merged.end()) continue;
      d.support.push_back({tok, it->second / z});
      merged.erase(it);
    }
    return d;
  }

  ModelConfig config_;
  Endpoint endpoint_;
};

}  // namespace

std::shared_ptr<const Model> MakeRemoteModel(const ModelConfig& config) {
  return std::make_shared<RemoteModel>(config);
}

}  // namespace pdws

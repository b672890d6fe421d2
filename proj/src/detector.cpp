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

#include "pdws/detector.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <thread>

#include "pdws/crypto.hpp"
#include "pdws/ecc.hpp"

namespace pdws {
namespace {

std::size_t LastOffset(const PublicParams& params, std::size_t len) { return len - params.gadget_chars(); }

// Lowest verifying offset in [from, to], or nullopt.
std::optional<DetectionResult> ScanRange(const KeyMaterial& pk, const PublicParams& params, std::u32string_view text,
                                         std::size_t from, std::size_t to, unsigned threads) {
  if (from > to) return std::nullopt;
  if (threads <= 1 || to - from < 2) {
    for (std::size_t i = from; i <= to; ++i) {
      auto r = DetectAt(pk, params, text, i);
      if (r.detected) return r;
    }
    return std::nullopt;
  }
  // Interleaved offsets per worker; a worker stops once it passes the best
  // hit so far, which keeps the lowest-offset result.
  std::atomic<std::size_t> best{std::numeric_limits<std::size_t>::max()};
  std::vector<std::optional<DetectionResult>> found(threads);
  std::vector<std::thread> workers;
  for (unsigned w = 0; w < threads; ++w) {
    workers.emplace_back([&, w] {
      for (std::size_t i = from + w; i <= to; i += threads) {
        if (i > best.load(std::memory_order_relaxed)) break;
        auto r = DetectAt(pk, params, text, i);
        if (r.detected) {
          found[w] = std::move(r);
          std::size_t cur = best.load();
          while (i < cur && !best.compare_exchange_weak(cur, i)) {
          }
          break;
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  std::optional<DetectionResult> out;
  for (auto& f : found) {
    if (f && (!out || f->offset < out->offset)) out = std::move(f);
  }
  return out;
}

}  // namespace

BitString ReadCodeword(const PublicParams& params, std::u32string_view text, std::size_t offset) {
  if (offset > text.size() || text.size() - offset < params.gadget_chars()) {
    throw ParameterError("read_codeword: gadget does not fit at offset " + std::to_string(offset));
  }
  BitChain chain(params.salt, params.beta);
  BitString c;
  const std::size_t first = offset + params.ell;
  for (std::size_t j = 0; j < params.n_blocks(); ++j) {
    const auto block = text.substr(first + j * params.ell, params.ell);
    c.append(chain.probe(block, c));
    chain.absorb(block);
  }
  return c;
}

DetectionResult DetectAt(const KeyMaterial& pk, const PublicParams& params, std::u32string_view text,
                         std::size_t offset) {
  DetectionResult res;
  if (offset > text.size() || text.size() - offset < params.gadget_chars()) return res;
  const Text message(text.substr(offset, params.ell));
  const std::string utf8 = ToUtf8(message);
  const BitString masked = ReadCodeword(params, text, offset);
  const BitString codeword = Xor(HMask(AsBytes(utf8), params.lambda_c, params.salt), masked);
  const auto decoded = EccDecode(codeword, params.ecc);
  if (!decoded) return res;
  if (!Verify(pk, HSign(AsBytes(utf8), params.salt), decoded->sigma)) return res;
  res.detected = true;
  res.offset = offset;
  res.corrected_errors = decoded->corrected;
  res.recovered_sig = decoded->sigma;
  res.message_block = message;
  return res;
}

DetectionResult Detect(const KeyMaterial& pk, const PublicParams& params, std::u32string_view text,
                       const DetectOptions& options) {
  if (text.size() < params.gadget_chars()) return {};
  auto hit = ScanRange(pk, params, text, 0, LastOffset(params, text.size()), options.threads);
  return hit ? std::move(*hit) : DetectionResult{};
}

std::vector<DetectionResult> DetectAll(const KeyMaterial& pk, const PublicParams& params, std::u32string_view text,
                                       const DetectOptions& options) {
  std::vector<DetectionResult> out;
  if (text.size() < params.gadget_chars()) return out;
  const std::size_t last = LastOffset(params, text.size());
  std::size_t from = 0;
  while (from <= last) {
    auto hit = ScanRange(pk, params, text, from, last, options.threads);
    if (!hit) break;
    from = hit->offset + params.ell * params.n_blocks();
    out.push_back(std::move(*hit));
  }
  return out;
}

}  // namespace pdws

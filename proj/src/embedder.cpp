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

#include "pdws/embedder.hpp"

#include <future>
#include <limits>

#include "pdws/crypto.hpp"
#include "pdws/ecc.hpp"

namespace pdws {
namespace {

struct Candidate {
  Text fresh;  // newly sampled characters, past the committed prefix
  Text block;  // the ell-character window
  std::size_t distance = 0;
};

}  // namespace

Embedder::Embedder(SecretEnvelope secret, std::shared_ptr<const Model> model, Text prompt, EmbedOptions options)
    : secret_(std::move(secret)), model_(std::move(model)), prompt_(std::move(prompt)), options_(options) {
  if (!model_) throw ParameterError("embedder: model is null");
  secret_.validate();
  ecc_ = EccProfile::For(secret_.params.lambda_sig, secret_.params.lambda_c, secret_.params.gamma_max);
  if (options_.threads == 0) options_.threads = 1;
}

BitString Embedder::masked_codeword(std::u32string_view message) const {
  const std::string utf8 = ToUtf8(message);
  const BitString sigma = Sign(secret_.keys, HSign(AsBytes(utf8), secret_.salt));
  const BitString code = EccEncode(sigma, ecc_);
  return Xor(HMask(AsBytes(utf8), secret_.params.lambda_c, secret_.salt), code);
}

BlockRecord Embedder::reject_sample_tokens(const BitString& chunk, TextBuffer& state, std::size_t& cursor,
                                           ChainState& chain, std::uint32_t& gamma, SamplerState& rng,
                                           std::size_t gadget_index, std::size_t block_index) const {
  const auto& p = secret_.params;
  if (chunk.size() != p.beta) throw ParameterError("reject_sample_tokens: chunk must be beta bits");

  // Characters already committed past the block start (surplus of a previous
  // multi-character token) are an immutable prefix of every attempt.
  const Text prefix = state.chars().substr(cursor);
  const std::size_t need = prefix.size() >= p.ell ? 0 : p.ell - prefix.size();
  const SamplerState base = rng;
  rng.next_u64();

  auto attempt = [&](std::uint32_t index) {
    SamplerState local = base.fork(index);
    Candidate c;
    if (need > 0) c.fresh = SampleAtLeast(*model_, prompt_, state.chars(), need, local);
    c.block = (prefix + c.fresh).substr(0, p.ell);
    c.distance = Hamming(chain.hash.probe(c.block, chain.c_prev), chunk);
    return c;
  };

  BlockRecord rec;
  Candidate best;
  best.distance = std::numeric_limits<std::size_t>::max();
  std::optional<Candidate> chosen;

  std::uint32_t a = 0;
  while (!chosen) {
    // Evaluate a batch of attempts (concurrently when threads > 1), then
    // consume them in index order exactly as a sequential loop would.
    const unsigned batch = options_.threads;
    std::vector<Candidate> results;
    if (batch == 1) {
      results.push_back(attempt(a));
    } else {
      std::vector<std::future<Candidate>> futures;
      for (unsigned i = 0; i < batch; ++i) futures.push_back(std::async(std::launch::async, attempt, a + i));
      for (auto& f : futures) results.push_back(f.get());
    }
    for (auto& c : results) {
      ++a;
      rec.sampled_chars += c.fresh.size();
      const bool match = c.distance == 0;
      if (c.distance < best.distance) best = c;
      if (match) {
        chosen = std::move(c);
        break;
      }
      if (a > p.a_max) {
        if (gamma >= p.gamma_max) {
          throw EmbedFailure(gadget_index, block_index,
                             "embed failure: gadget " + std::to_string(gadget_index) + " block " +
                                 std::to_string(block_index) + " found no match in " + std::to_string(a) +
                                 " attempts and the planted-error budget (" + std::to_string(p.gamma_max) +
                                 ") is spent");
        }
        ++gamma;
        rec.planted_error = true;
        chosen = best;
        break;
      }
    }
  }

  rec.attempts = a;
  rec.best_hamming = static_cast<std::uint32_t>(chosen->distance);
  rec.text = chosen->block;
  state.append(chosen->fresh);
  state.commit();
  cursor += p.ell;

  // Chain the bits a detector will read back. They differ from `chunk` only
  // on a planted block; chaining the intended chunk instead would desync
  // every later block from the detector.
  const BitString observed = chain.hash.probe(chosen->block, chain.c_prev);
  chain.hash.absorb(chosen->block);
  chain.m += chosen->block;
  chain.c_prev.append(observed);
  return rec;
}

EmbedTranscript Embedder::embed_for_message(TextBuffer& state, std::size_t& cursor, std::size_t msg_offset,
                                            SamplerState& rng, std::size_t gadget_index) const {
  const auto& p = secret_.params;
  EmbedTranscript tr;
  tr.offset = msg_offset;
  tr.message = state.chars().substr(msg_offset, p.ell);
  tr.masked_codeword = masked_codeword(tr.message);

  ChainState chain(secret_.salt, p.beta);
  const auto chunks = Chunk(tr.masked_codeword, p.beta);
  tr.blocks.reserve(chunks.size());
  for (std::size_t j = 0; j < chunks.size(); ++j) {
    tr.blocks.push_back(reject_sample_tokens(chunks[j], state, cursor, chain, tr.gamma_used, rng, gadget_index, j));
  }
  return tr;
}

EmbedTranscript Embedder::generate_message_signature_pair(TextBuffer& state, std::size_t& cursor, SamplerState& rng,
                                                          std::size_t gadget_index) const {
  const auto& p = secret_.params;
  const std::size_t have = state.size() - cursor;
  if (have < p.ell) state.append(SampleAtLeast(*model_, prompt_, state.chars(), p.ell - have, rng));
  state.commit();
  const std::size_t msg_offset = cursor;
  cursor += p.ell;
  return embed_for_message(state, cursor, msg_offset, rng, gadget_index);
}

WatermarkResult Embedder::watermark() const {
  const auto& p = secret_.params;
  SamplerState rng(options_.seed, model_->config().seed);
  TextBuffer state;
  std::size_t cursor = 0;
  WatermarkResult out;
  out.seed = options_.seed;
  while (cursor + p.gadget_chars() <= p.n) {
    out.gadgets.push_back(generate_message_signature_pair(state, cursor, rng, out.gadgets.size()));
  }
  out.tail_chars = static_cast<std::size_t>(p.n) - cursor;
  if (state.size() < p.n) state.append(SampleAtLeast(*model_, prompt_, state.chars(), p.n - state.size(), rng));
  out.text = state.chars().substr(0, p.n);
  return out;
}

WatermarkResult Embedder::tile_compress(std::size_t k_pairs) const {
  if (k_pairs == 0) throw ParameterError("tile_compress: k_pairs must be >= 1");
  const auto& p = secret_.params;
  SamplerState rng(options_.seed, model_->config().seed);
  TextBuffer state;
  std::size_t cursor = 0;
  WatermarkResult out;
  out.seed = options_.seed;
  out.gadgets.push_back(generate_message_signature_pair(state, cursor, rng, 0));
  for (std::size_t k = 1; k < k_pairs; ++k) {
    out.gadgets.push_back(embed_for_message(state, cursor, cursor - p.ell, rng, k));
  }
  out.text = state.chars().substr(0, cursor);
  return out;
}

WatermarkResult Watermark(const SecretEnvelope& secret, std::shared_ptr<const Model> model,
                          std::u32string_view prompt, const EmbedOptions& options) {
  return Embedder(secret, std::move(model), Text(prompt), options).watermark();
}

WatermarkResult TileCompress(const SecretEnvelope& secret, std::shared_ptr<const Model> model,
                             std::u32string_view prompt, std::size_t k_pairs, const EmbedOptions& options) {
  return Embedder(secret, std::move(model), Text(prompt), options).tile_compress(k_pairs);
}

std::size_t TiledChars(const WatermarkParams& params, std::size_t k_pairs) {
  if (k_pairs == 0) return 0;
  return k_pairs * params.gadget_chars() - (k_pairs - 1) * params.ell;
}

}  // namespace pdws

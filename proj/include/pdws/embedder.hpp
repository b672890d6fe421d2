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

// Watermark embedding: sample a message block, sign/encode/mask it and plant
// the masked codeword chunk by chunk through rejection sampling, falling back
// to the best-Hamming candidate up to the planted-error budget.

#ifndef PDWS_EMBEDDER_HPP_
#define PDWS_EMBEDDER_HPP_

#include <memory>
#include <vector>

#include "pdws/core.hpp"
#include "pdws/envelope.hpp"
#include "pdws/model.hpp"
#include "pdws/rng.hpp"

namespace pdws {

struct EmbedOptions {
  std::uint64_t seed = 0;
  // Worker threads evaluating rejection attempts. Output does not depend on it.
  unsigned threads = 1;
};

struct WatermarkResult {
  Text text;
  std::vector<EmbedTranscript> gadgets;
  std::uint64_t seed = 0;
  std::size_t tail_chars = 0;  // plain characters after the last gadget
};

// Running state of one gadget's chained rejection hash: accumulated blocks m
// and the chunks embedded so far c_prev.
struct ChainState {
  explicit ChainState(const Salt& salt, unsigned beta) : hash(salt, beta) {}
  BitChain hash;
  Text m;
  BitString c_prev;
};

class Embedder {
 public:
  Embedder(SecretEnvelope secret, std::shared_ptr<const Model> model, Text prompt, EmbedOptions options = {});

  const WatermarkParams& params() const { return secret_.params; }

  WatermarkResult watermark() const;

  // Appends one gadget (message block plus n_blocks signature blocks) to
  // `state`, starting at block-aligned position `cursor`; advances cursor.
  EmbedTranscript generate_message_signature_pair(TextBuffer& state, std::size_t& cursor, SamplerState& rng,
                                                  std::size_t gadget_index = 0) const;

  // Embeds `chunk` into the next ell characters at `cursor`.
  BlockRecord reject_sample_tokens(const BitString& chunk, TextBuffer& state, std::size_t& cursor,
                                   ChainState& chain, std::uint32_t& gamma, SamplerState& rng,
                                   std::size_t gadget_index, std::size_t block_index) const;

  // k gadgets where each gadget after the first takes the last ell characters
  // of the previous signature region as its message.
  WatermarkResult tile_compress(std::size_t k_pairs) const;

  // Masked codeword for a message block.
  BitString masked_codeword(std::u32string_view message) const;

 private:
  EmbedTranscript embed_for_message(TextBuffer& state, std::size_t& cursor, std::size_t msg_offset,
                                    SamplerState& rng, std::size_t gadget_index) const;

  SecretEnvelope secret_;
  EccProfile ecc_;
  std::shared_ptr<const Model> model_;
  Text prompt_;
  EmbedOptions options_;
};

WatermarkResult Watermark(const SecretEnvelope& secret, std::shared_ptr<const Model> model,
                          std::u32string_view prompt, const EmbedOptions& options = {});

WatermarkResult TileCompress(const SecretEnvelope& secret, std::shared_ptr<const Model> model,
                             std::u32string_view prompt, std::size_t k_pairs, const EmbedOptions& options = {});

// Characters used by k tiled gadgets.
std::size_t TiledChars(const WatermarkParams& params, std::size_t k_pairs);

}  // namespace pdws

#endif  // PDWS_EMBEDDER_HPP_

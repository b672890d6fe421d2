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

// Shared domain types: error hierarchy, bit strings, protocol parameters,
// the character buffer used during generation and the embedding transcript.

#ifndef PDWS_CORE_HPP_
#define PDWS_CORE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pdws {

enum class ErrorCode {
  kParameter = 1,
  kKey,
  kEmbedFailure,
  kTransport,
  kProtocol,
  kIo,
  kUnsupported,
  kFormat,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& what)
      : Error(ErrorCode::kParameter, what) {}
};

class KeyError : public Error {
 public:
  explicit KeyError(const std::string& what) : Error(ErrorCode::kKey, what) {}
};

class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what)
      : Error(ErrorCode::kFormat, what) {}
};

class UnsupportedError : public Error {
 public:
  explicit UnsupportedError(const std::string& what)
      : Error(ErrorCode::kUnsupported, what) {}
};

// Raised when a block cannot be embedded: the attempt limit is exceeded and
// the gadget's planted-error budget is already spent.
class EmbedFailure : public Error {
 public:
  EmbedFailure(std::size_t gadget, std::size_t block, const std::string& what)
      : Error(ErrorCode::kEmbedFailure, what), gadget_(gadget), block_(block) {}
  std::size_t gadget_index() const noexcept { return gadget_; }
  std::size_t block_index() const noexcept { return block_; }

 private:
  std::size_t gadget_;
  std::size_t block_;
};

// Fixed-length bit sequence. Bits are stored most-significant-first within
// each byte; unused trailing bits of the last byte are always zero.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t nbits);
  BitString(std::span<const std::uint8_t> bytes, std::size_t nbits);

  static BitString FromBytes(std::span<const std::uint8_t> bytes);
  // Parses a string of '0'/'1' characters.
  static BitString FromBinary(std::string_view bits);
  static BitString FromHex(std::string_view hex, std::size_t nbits);

  std::size_t size() const noexcept { return nbits_; }
  bool empty() const noexcept { return nbits_ == 0; }
  bool get(std::size_t i) const;
  void set(std::size_t i, bool v);

  // Packed bytes, ceil(size/8) long, zero padded.
  const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }

  BitString slice(std::size_t pos, std::size_t len) const;
  void append(const BitString& other);
  void append_bit(bool v);

  std::string to_binary() const;
  std::string to_hex() const;

  // Unsigned value of a string of at most 64 bits, first bit most significant.
  std::uint64_t to_uint() const;

  friend bool operator==(const BitString& a, const BitString& b) {
    return a.nbits_ == b.nbits_ && a.bytes_ == b.bytes_;
  }

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t nbits_ = 0;
};

BitString Xor(const BitString& a, const BitString& b);
std::size_t Hamming(const BitString& a, const BitString& b);
std::vector<BitString> Chunk(const BitString& c, std::size_t beta);
BitString Concat(std::span<const BitString> parts);

std::string ToHex(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> FromHex(std::string_view hex);

// All protocol knobs. Field names match the JSON profile format.
struct WatermarkParams {
  std::uint32_t ell = 16;         // characters per block
  std::uint32_t beta = 2;         // bits embedded per block
  std::uint32_t gamma_max = 2;    // planted-error budget per gadget
  std::uint32_t a_max = 64;       // attempts before a block may be planted
  std::uint64_t n = 16 * 181;     // output length in characters
  std::uint32_t lambda_sig = 328; // raw signature bits
  std::uint32_t lambda_c = 360;   // codeword bits after error correction
  double alpha = 96.0;            // assumed per-block min-entropy, bits

  std::size_t n_blocks() const { return lambda_c / beta; }
  // Message block plus one block per codeword chunk.
  std::size_t gadget_chars() const {
    return static_cast<std::size_t>(ell) * (1 + n_blocks());
  }

  // Throws ParameterError naming the first violated invariant. The n bound is
  // only checked when `require_gadget_fits` is set; shorter outputs are legal
  // and degrade to plain generation.
  void validate(bool require_gadget_fits = false) const;

  friend bool operator==(const WatermarkParams&, const WatermarkParams&) = default;
};

// Character layout of one gadget starting at msg_start.
struct GadgetLayout {
  std::size_t msg_start = 0;
  std::size_t msg_len = 0;
  std::size_t n_blocks = 0;
  std::size_t block_len = 0;

  static GadgetLayout For(const WatermarkParams& p, std::size_t start);
  std::size_t total_len() const { return msg_len + n_blocks * block_len; }
  std::size_t block_start(std::size_t j) const {
    return msg_start + msg_len + j * block_len;
  }
  std::size_t end() const { return msg_start + total_len(); }
};

// Characters are unicode scalar values.
using Text = std::u32string;

std::string ToUtf8(std::u32string_view text);
// Throws FormatError on malformed UTF-8.
Text FromUtf8(std::string_view utf8);

// Append-only generation buffer. Characters below committed_len() belong to
// accepted blocks and can never be rolled back.
class TextBuffer {
 public:
  TextBuffer() = default;
  explicit TextBuffer(Text initial) : chars_(std::move(initial)) {}

  const Text& chars() const noexcept { return chars_; }
  std::size_t size() const noexcept { return chars_.size(); }
  std::size_t committed_len() const noexcept { return committed_; }

  void append(std::u32string_view s) { chars_.append(s); }
  void commit() noexcept { committed_ = chars_.size(); }
  // Drops uncommitted characters past `len`. Throws ParameterError if `len`
  // is below the committed length.
  void rollback(std::size_t len);

 private:
  Text chars_;
  std::size_t committed_ = 0;
};

struct BlockRecord {
  std::uint32_t attempts = 0;
  bool planted_error = false;
  std::uint32_t best_hamming = 0;
  Text text;
  std::uint64_t sampled_chars = 0;
};

// Record of one gadget's embedding.
struct EmbedTranscript {
  std::size_t offset = 0;  // message block start
  Text message;
  BitString masked_codeword;
  std::vector<BlockRecord> blocks;
  std::uint32_t gamma_used = 0;

  std::uint64_t sampled_chars() const;
  // gamma_used matches the planted blocks, stays within budget and no block
  // exceeds a_max + 1 attempts.
  bool consistent(const WatermarkParams& p) const;
};

}  // namespace pdws

#endif  // PDWS_CORE_HPP_

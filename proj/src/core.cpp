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

#include "pdws/core.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace pdws {

BitString::BitString(std::size_t nbits) : bytes_((nbits + 7) / 8, 0), nbits_(nbits) {}

BitString::BitString(std::span<const std::uint8_t> bytes, std::size_t nbits)
    : bytes_((nbits + 7) / 8, 0), nbits_(nbits) {
  if (bytes.size() * 8 < nbits) {
    throw ParameterError("BitString: " + std::to_string(bytes.size()) +
                         " bytes cannot hold " + std::to_string(nbits) + " bits");
  }
  std::copy_n(bytes.begin(), bytes_.size(), bytes_.begin());
  if (nbits % 8 != 0) bytes_.back() &= static_cast<std::uint8_t>(0xFF00u >> (nbits % 8));
}

BitString BitString::FromBytes(std::span<const std::uint8_t> bytes) {
  return BitString(bytes, bytes.size() * 8);
}

BitString BitString::FromBinary(std::string_view bits) {
  BitString out(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1') {
      throw FormatError("BitString: invalid binary digit");
    }
    out.set(i, bits[i] == '1');
  }
  return out;
}

BitString BitString::FromHex(std::string_view hex, std::size_t nbits) {
  auto raw = pdws::FromHex(hex);
  if (raw.size() != (nbits + 7) / 8) {
    throw ParameterError("BitString: hex length does not match bit length");
  }
  BitString out(raw, nbits);
  if (out.bytes_ != raw) throw ParameterError("BitString: nonzero padding bits");
  return out;
}

bool BitString::get(std::size_t i) const {
  if (i >= nbits_) throw ParameterError("BitString: index out of range");
  return (bytes_[i / 8] >> (7 - i % 8)) & 1u;
}

void BitString::set(std::size_t i, bool v) {
  if (i >= nbits_) throw ParameterError("BitString: index out of range");
  const auto mask = static_cast<std::uint8_t>(0x80u >> (i % 8));
  if (v) {
    bytes_[i / 8] |= mask;
  } else {
    bytes_[i / 8] &= static_cast<std::uint8_t>(~mask);
  }
}

BitString BitString::slice(std::size_t pos, std::size_t len) const {
  if (pos > nbits_ || len > nbits_ - pos) {
    throw ParameterError("BitString: slice out of range");
  }
  BitString out(len);
  if (pos % 8 == 0) {
    std::copy_n(bytes_.begin() + pos / 8, out.bytes_.size(), out.bytes_.begin());
    if (len % 8 != 0) out.bytes_.back() &= static_cast<std::uint8_t>(0xFF00u >> (len % 8));
    return out;
  }
  for (std::size_t i = 0; i < len; ++i) out.set(i, get(pos + i));
  return out;
}

void BitString::append(const BitString& other) {
  if (nbits_ % 8 == 0) {
    bytes_.insert(bytes_.end(), other.bytes_.begin(), other.bytes_.end());
    nbits_ += other.nbits_;
    return;
  }
  for (std::size_t i = 0; i < other.nbits_; ++i) append_bit(other.get(i));
}

void BitString::append_bit(bool v) {
  if (nbits_ % 8 == 0) bytes_.push_back(0);
  ++nbits_;
  set(nbits_ - 1, v);
}

std::string BitString::to_binary() const {
  std::string s(nbits_, '0');
  for (std::size_t i = 0; i < nbits_; ++i) {
    if (get(i)) s[i] = '1';
  }
  return s;
}

std::string BitString::to_hex() const { return ToHex(bytes_); }

std::uint64_t BitString::to_uint() const {
  if (nbits_ > 64) throw ParameterError("BitString: too long for integer view");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < nbits_; ++i) v = (v << 1) | (get(i) ? 1u : 0u);
  return v;
}

BitString Xor(const BitString& a, const BitString& b) {
  if (a.size() != b.size()) {
    throw ParameterError("xor: length mismatch (" + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()) + ")");
  }
  std::vector<std::uint8_t> out(a.bytes().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.bytes()[i] ^ b.bytes()[i];
  return BitString(out, a.size());
}

std::size_t Hamming(const BitString& a, const BitString& b) {
  if (a.size() != b.size()) {
    throw ParameterError("hamming: length mismatch (" + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()) + ")");
  }
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.bytes().size(); ++i) {
    d += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(a.bytes()[i] ^ b.bytes()[i])));
  }
  return d;
}

std::vector<BitString> Chunk(const BitString& c, std::size_t beta) {
  if (beta == 0 || c.size() % beta != 0) {
    throw ParameterError("chunk: beta=" + std::to_string(beta) +
                         " does not divide length " + std::to_string(c.size()));
  }
  std::vector<BitString> out;
  out.reserve(c.size() / beta);
  for (std::size_t pos = 0; pos < c.size(); pos += beta) out.push_back(c.slice(pos, beta));
  return out;
}

BitString Concat(std::span<const BitString> parts) {
  BitString out;
  for (const auto& p : parts) out.append(p);
  return out;
}

std::string ToHex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  s.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    s.push_back(kDigits[b >> 4]);
    s.push_back(kDigits[b & 0xF]);
  }
  return s;
}

std::vector<std::uint8_t> FromHex(std::string_view hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  if (hex.size() % 2 != 0) throw FormatError("hex: odd length");
  std::vector<std::uint8_t> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int hi = nibble(hex[2 * i]);
    const int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw FormatError("hex: invalid digit");
    out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return out;
}

void WatermarkParams::validate(bool require_gadget_fits) const {
  auto fail = [](const std::string& msg) { throw ParameterError("params: " + msg); };
  if (ell == 0) fail("ell must be positive");
  if (beta != 1 && beta != 2 && beta != 4 && beta != 8) fail("beta must be one of 1, 2, 4, 8");
  if (a_max == 0) fail("a_max must be positive");
  if (n == 0) fail("n must be positive");
  if (lambda_sig == 0) fail("lambda_sig must be positive");
  if (lambda_c < lambda_sig) fail("lambda_c must be >= lambda_sig");
  if (lambda_c % beta != 0) fail("beta must divide lambda_c");
  if (!(alpha > 0.0)) fail("alpha must be positive");
  if (require_gadget_fits && n < gadget_chars()) {
    fail("n=" + std::to_string(n) + " is shorter than one gadget (" +
         std::to_string(gadget_chars()) + " chars)");
  }
}

GadgetLayout GadgetLayout::For(const WatermarkParams& p, std::size_t start) {
  return GadgetLayout{start, p.ell, p.n_blocks(), p.ell};
}

std::string ToUtf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : text) {
    const auto u = static_cast<std::uint32_t>(c);
    if (u > 0x10FFFF || (u >= 0xD800 && u <= 0xDFFF)) {
      throw FormatError("utf8: not a unicode scalar value");
    }
    if (u < 0x80) {
      out.push_back(static_cast<char>(u));
    } else if (u < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (u >> 6)));
      out.push_back(static_cast<char>(0x80 | (u & 0x3F)));
    } else if (u < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (u >> 12)));
      out.push_back(static_cast<char>(0x80 | ((u >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (u & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (u >> 18)));
      out.push_back(static_cast<char>(0x80 | ((u >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((u >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (u & 0x3F)));
    }
  }
  return out;
}

Text FromUtf8(std::string_view utf8) {
  Text out;
  out.reserve(utf8.size());
  std::size_t i = 0;
  while (i < utf8.size()) {
    const auto b0 = static_cast<std::uint8_t>(utf8[i]);
    std::size_t len;
    std::uint32_t cp;
    if (b0 < 0x80) {
      len = 1;
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    } else {
      throw FormatError("utf8: invalid lead byte");
    }
    if (i + len > utf8.size()) throw FormatError("utf8: truncated sequence");
    for (std::size_t k = 1; k < len; ++k) {
      const auto b = static_cast<std::uint8_t>(utf8[i + k]);
      if ((b & 0xC0) != 0x80) throw FormatError("utf8: invalid continuation byte");
      cp = (cp << 6) | (b & 0x3F);
    }
    static constexpr std::uint32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      throw FormatError("utf8: overlong or out-of-range sequence");
    }
    out.push_back(static_cast<char32_t>(cp));
    i += len;
  }
  return out;
}

void TextBuffer::rollback(std::size_t len) {
  if (len < committed_) {
    throw ParameterError("TextBuffer: cannot roll back below committed length");
  }
  if (len < chars_.size()) chars_.resize(len);
}

std::uint64_t EmbedTranscript::sampled_chars() const {
  return std::accumulate(blocks.begin(), blocks.end(), std::uint64_t{0},
                         [](std::uint64_t acc, const BlockRecord& b) { return acc + b.sampled_chars; });
}

bool EmbedTranscript::consistent(const WatermarkParams& p) const {
  std::uint32_t planted = 0;
  for (const auto& b : blocks) {
    if (b.planted_error) ++planted;
    if (b.attempts == 0 || b.attempts > p.a_max + 1) return false;
  }
  return planted == gamma_used && gamma_used <= p.gamma_max;
}

}  // namespace pdws

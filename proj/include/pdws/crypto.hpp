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

// Hash oracles and signature schemes.
//
// Three oracle families stand in for random oracles: SIGN (the digest that is
// signed), MASK (one-time pad over the codeword, extendable output) and BIT
// (the beta-bit rejection hash). Each is BLAKE2b with the domain tag as the
// personalization string and an optional public 16-byte salt.

#ifndef PDWS_CRYPTO_HPP_
#define PDWS_CRYPTO_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <sodium.h>

#include "pdws/core.hpp"

namespace pdws {

inline constexpr std::size_t kSaltBytes = 16;
using Salt = std::array<std::uint8_t, kSaltBytes>;
using KeySeed = std::array<std::uint8_t, 32>;

inline constexpr std::size_t kSignDigestBits = 256;

enum class OracleDomain { kSign, kMask, kBit };

const char* DomainTag(OracleDomain domain);  // "SIGN", "MASK", "BIT"

BitString HSign(std::span<const std::uint8_t> data, const Salt& salt = {});
BitString HMask(std::span<const std::uint8_t> data, std::size_t out_bits, const Salt& salt = {});
BitString HBit(std::span<const std::uint8_t> data, unsigned beta, const Salt& salt = {});

inline std::span<const std::uint8_t> AsBytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

// Byte encoding of m || x || c_prev fed to the BIT oracle: UTF-8 of m then x,
// packed c_prev bits, then the c_prev bit length as 32-bit big endian.
std::vector<std::uint8_t> ChainInput(std::u32string_view m, std::u32string_view x, const BitString& c_prev);

// Incremental BIT oracle over a growing accumulated text m. probe(x, c_prev)
// equals HBit(ChainInput(m, x, c_prev)); probe is safe to call concurrently.
class BitChain {
 public:
  BitChain(const Salt& salt, unsigned beta);

  BitString probe(std::u32string_view x, const BitString& c_prev) const;
  void absorb(std::u32string_view x);

 private:
  crypto_generichash_blake2b_state state_;
  unsigned beta_;
};

struct KeyMaterial {
  std::string scheme_id;
  std::vector<std::uint8_t> signing_key;  // empty for public-only material
  std::vector<std::uint8_t> verify_key;

  bool has_secret() const { return !signing_key.empty(); }
  KeyMaterial public_only() const { return {scheme_id, {}, verify_key}; }
};

class SignatureScheme {
 public:
  virtual ~SignatureScheme() = default;
  virtual std::string id() const = 0;
  virtual std::size_t signature_bits() const = 0;
  virtual std::vector<std::uint8_t> derive_verify_key(std::span<const std::uint8_t> signing_key) const = 0;
  // Deterministic: equal keys and digests give equal signatures.
  virtual BitString sign(std::span<const std::uint8_t> signing_key, const BitString& digest) const = 0;
  // Total; malformed keys or signatures verify as false.
  virtual bool verify(std::span<const std::uint8_t> verify_key, const BitString& digest,
                      const BitString& sig) const = 0;
};

// Schnorr over ristretto255 with a 75-bit challenge: 75 + 253 = 328 bits.
inline constexpr const char* kShortSchnorrId = "ristretto255-schnorr-c75";
inline constexpr const char* kEd25519Id = "ed25519";

// Throws KeyError for unknown ids.
const SignatureScheme& SchemeById(const std::string& id);
std::vector<std::string> SchemeIds();
// Scheme whose signature length is lambda_sig; throws ParameterError if none.
std::string SchemeForSignatureBits(std::size_t lambda_sig);

KeyMaterial Keygen(const std::string& scheme_id, const std::optional<KeySeed>& seed = std::nullopt);
BitString Sign(const KeyMaterial& keys, const BitString& digest);
bool Verify(const KeyMaterial& keys, const BitString& digest, const BitString& sig);
// Throws KeyError unless verify_key matches signing_key (when present) and
// both have the scheme's sizes.
void CheckKeyMaterial(const KeyMaterial& keys);

}  // namespace pdws

#endif  // PDWS_CRYPTO_HPP_

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

#include "pdws/crypto.hpp"

#include <algorithm>
#include <cstring>
#include <mutex>

namespace pdws {
namespace {

void EnsureSodium() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0) throw Error(ErrorCode::kKey, "libsodium failed to initialize");
  });
}

using Personal = std::array<std::uint8_t, crypto_generichash_blake2b_PERSONALBYTES>;

Personal MakePersonal(std::string_view tag) {
  Personal p{};
  std::string_view prefix = "pdws/";
  std::copy(prefix.begin(), prefix.end(), p.begin());
  std::copy_n(tag.begin(), std::min(tag.size(), p.size() - prefix.size()), p.begin() + prefix.size());
  return p;
}

crypto_generichash_blake2b_state InitState(std::string_view tag, const Salt& salt, std::size_t outlen,
                                           std::span<const std::uint8_t> key = {}) {
  EnsureSodium();
  crypto_generichash_blake2b_state st;
  const Personal personal = MakePersonal(tag);
  crypto_generichash_blake2b_init_salt_personal(&st, key.empty() ? nullptr : key.data(), key.size(), outlen,
                                                salt.data(), personal.data());
  return st;
}

void Update(crypto_generichash_blake2b_state& st, std::span<const std::uint8_t> data) {
  crypto_generichash_blake2b_update(&st, data.data(), data.size());
}

void UpdateBe32(crypto_generichash_blake2b_state& st, std::uint32_t v) {
  const std::uint8_t b[4] = {static_cast<std::uint8_t>(v >> 24), static_cast<std::uint8_t>(v >> 16),
                             static_cast<std::uint8_t>(v >> 8), static_cast<std::uint8_t>(v)};
  crypto_generichash_blake2b_update(&st, b, 4);
}

template <std::size_t N>
std::array<std::uint8_t, N> Final(crypto_generichash_blake2b_state& st) {
  std::array<std::uint8_t, N> out;
  crypto_generichash_blake2b_final(&st, out.data(), N);
  return out;
}

void UpdateChainTail(crypto_generichash_blake2b_state& st, const BitString& c_prev) {
  Update(st, c_prev.bytes());
  UpdateBe32(st, static_cast<std::uint32_t>(c_prev.size()));
}

void UpdateText(crypto_generichash_blake2b_state& st, std::u32string_view s) {
  const std::string utf8 = ToUtf8(s);
  Update(st, AsBytes(utf8));
}

// ---------------------------------------------------------------------------
// Short Schnorr over ristretto255.

constexpr std::size_t kChallengeBits = 75;
constexpr std::size_t kResponseBits = 253;
constexpr std::size_t kScalarBytes = crypto_core_ristretto255_SCALARBYTES;
constexpr std::size_t kPointBytes = crypto_core_ristretto255_BYTES;

using Scalar = std::array<std::uint8_t, kScalarBytes>;
using Point = std::array<std::uint8_t, kPointBytes>;

Scalar Reduce(const std::array<std::uint8_t, 64>& wide) {
  Scalar s;
  crypto_core_ristretto255_scalar_reduce(s.data(), wide.data());
  return s;
}

bool IsZero(std::span<const std::uint8_t> v) {
  return std::all_of(v.begin(), v.end(), [](std::uint8_t b) { return b == 0; });
}

// Big-endian bit string (<= 256 bits) to little-endian scalar bytes.
Scalar ScalarFromBits(const BitString& bits) {
  Scalar s{};
  const std::size_t n = bits.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!bits.get(i)) continue;
    const std::size_t power = n - 1 - i;
    s[power / 8] |= static_cast<std::uint8_t>(1u << (power % 8));
  }
  return s;
}

BitString BitsFromScalar(const Scalar& s, std::size_t nbits) {
  BitString out(nbits);
  for (std::size_t i = 0; i < nbits; ++i) {
    const std::size_t power = nbits - 1 - i;
    out.set(i, (s[power / 8] >> (power % 8)) & 1u);
  }
  return out;
}

bool IsCanonical(const Scalar& s) {
  std::array<std::uint8_t, 64> wide{};
  std::copy(s.begin(), s.end(), wide.begin());
  return Reduce(wide) == s;
}

std::vector<std::uint8_t> DigestMessage(const BitString& digest) {
  std::vector<std::uint8_t> msg = digest.bytes();
  const auto n = static_cast<std::uint32_t>(digest.size());
  msg.insert(msg.end(), {static_cast<std::uint8_t>(n >> 24), static_cast<std::uint8_t>(n >> 16),
                         static_cast<std::uint8_t>(n >> 8), static_cast<std::uint8_t>(n)});
  return msg;
}

BitString Challenge(const Point& r, std::span<const std::uint8_t> pk, std::span<const std::uint8_t> msg) {
  auto st = InitState("schnorr-chal", Salt{}, 32);
  Update(st, r);
  Update(st, pk);
  Update(st, msg);
  const auto h = Final<32>(st);
  return BitString(h, 256).slice(0, kChallengeBits);
}

class ShortSchnorr final : public SignatureScheme {
 public:
  std::string id() const override { return kShortSchnorrId; }
  std::size_t signature_bits() const override { return kChallengeBits + kResponseBits; }

  std::vector<std::uint8_t> derive_verify_key(std::span<const std::uint8_t> signing_key) const override {
    const Scalar x = SecretScalar(signing_key);
    Point pk;
    if (crypto_scalarmult_ristretto255_base(pk.data(), x.data()) != 0) {
      throw KeyError("schnorr: degenerate secret scalar");
    }
    return {pk.begin(), pk.end()};
  }

  BitString sign(std::span<const std::uint8_t> signing_key, const BitString& digest) const override {
    const Scalar x = SecretScalar(signing_key);
    const auto pk = derive_verify_key(signing_key);
    const auto msg = DigestMessage(digest);

    auto nk_state = InitState("schnorr-nkey", Salt{}, 32);
    Update(nk_state, signing_key);
    const auto nonce_key = Final<32>(nk_state);

    // Deterministic nonce; the counter only moves past the negligible
    // zero-challenge and zero-response cases.
    for (std::uint32_t ctr = 0;; ++ctr) {
      auto st = InitState("schnorr-nonce", Salt{}, 64, nonce_key);
      Update(st, msg);
      UpdateBe32(st, ctr);
      const Scalar k = Reduce(Final<64>(st));
      Point r;
      if (crypto_scalarmult_ristretto255_base(r.data(), k.data()) != 0) continue;
      const BitString e_bits = Challenge(r, pk, msg);
      const Scalar e = ScalarFromBits(e_bits);
      if (IsZero(e)) continue;
      Scalar ex, s;
      crypto_core_ristretto255_scalar_mul(ex.data(), e.data(), x.data());
      crypto_core_ristretto255_scalar_sub(s.data(), k.data(), ex.data());
      if (IsZero(s)) continue;
      BitString sig = e_bits;
      sig.append(BitsFromScalar(s, kResponseBits));
      return sig;
    }
  }

  bool verify(std::span<const std::uint8_t> verify_key, const BitString& digest,
              const BitString& sig) const override {
    EnsureSodium();
    if (sig.size() != signature_bits() || verify_key.size() != kPointBytes) return false;
    if (crypto_core_ristretto255_is_valid_point(verify_key.data()) != 1) return false;
    const BitString e_bits = sig.slice(0, kChallengeBits);
    const Scalar e = ScalarFromBits(e_bits);
    const Scalar s = ScalarFromBits(sig.slice(kChallengeBits, kResponseBits));
    if (IsZero(e) || IsZero(s) || !IsCanonical(s)) return false;

    Point sg, ep, r;
    if (crypto_scalarmult_ristretto255_base(sg.data(), s.data()) != 0) return false;
    if (crypto_scalarmult_ristretto255(ep.data(), e.data(), verify_key.data()) != 0) return false;
    if (crypto_core_ristretto255_add(r.data(), sg.data(), ep.data()) != 0) return false;
    return Challenge(r, verify_key, DigestMessage(digest)) == e_bits;
  }

 private:
  static Scalar SecretScalar(std::span<const std::uint8_t> signing_key) {
    if (signing_key.size() != 32) throw KeyError("schnorr: signing key must be 32 bytes");
    auto st = InitState("schnorr-sk", Salt{}, 64);
    Update(st, signing_key);
    const Scalar x = Reduce(Final<64>(st));
    if (IsZero(x)) throw KeyError("schnorr: degenerate secret scalar");
    return x;
  }
};

class Ed25519 final : public SignatureScheme {
 public:
  std::string id() const override { return kEd25519Id; }
  std::size_t signature_bits() const override { return crypto_sign_BYTES * 8; }

  std::vector<std::uint8_t> derive_verify_key(std::span<const std::uint8_t> signing_key) const override {
    const auto [pk, sk] = Expand(signing_key);
    return {pk.begin(), pk.end()};
  }

  BitString sign(std::span<const std::uint8_t> signing_key, const BitString& digest) const override {
    const auto [pk, sk] = Expand(signing_key);
    const auto msg = DigestMessage(digest);
    std::array<std::uint8_t, crypto_sign_BYTES> sig;
    crypto_sign_detached(sig.data(), nullptr, msg.data(), msg.size(), sk.data());
    return BitString::FromBytes(sig);
  }

  bool verify(std::span<const std::uint8_t> verify_key, const BitString& digest,
              const BitString& sig) const override {
    EnsureSodium();
    if (sig.size() != signature_bits() || verify_key.size() != crypto_sign_PUBLICKEYBYTES) return false;
    const auto msg = DigestMessage(digest);
    return crypto_sign_verify_detached(sig.bytes().data(), msg.data(), msg.size(), verify_key.data()) == 0;
  }

 private:
  using Pair = std::pair<std::array<std::uint8_t, crypto_sign_PUBLICKEYBYTES>,
                         std::array<std::uint8_t, crypto_sign_SECRETKEYBYTES>>;
  static Pair Expand(std::span<const std::uint8_t> seed) {
    EnsureSodium();
    if (seed.size() != crypto_sign_SEEDBYTES) throw KeyError("ed25519: signing key must be 32 bytes");
    Pair out;
    crypto_sign_seed_keypair(out.first.data(), out.second.data(), seed.data());
    return out;
  }
};

}  // namespace

const char* DomainTag(OracleDomain domain) {
  switch (domain) {
    case OracleDomain::kSign: return "SIGN";
    case OracleDomain::kMask: return "MASK";
    case OracleDomain::kBit: return "BIT";
  }
  return "";
}

BitString HSign(std::span<const std::uint8_t> data, const Salt& salt) {
  auto st = InitState(DomainTag(OracleDomain::kSign), salt, 32);
  Update(st, data);
  return BitString::FromBytes(Final<32>(st));
}

BitString HMask(std::span<const std::uint8_t> data, std::size_t out_bits, const Salt& salt) {
  // Counter-mode expansion of a 512-bit seed block.
  auto st = InitState(DomainTag(OracleDomain::kMask), salt, 64);
  Update(st, data);
  UpdateBe32(st, static_cast<std::uint32_t>(out_bits));
  const auto seed = Final<64>(st);

  std::vector<std::uint8_t> out;
  out.reserve((out_bits + 7) / 8 + 64);
  for (std::uint32_t i = 0; out.size() * 8 < out_bits; ++i) {
    auto blk = InitState(DomainTag(OracleDomain::kMask), salt, 64);
    Update(blk, seed);
    UpdateBe32(blk, i);
    const auto b = Final<64>(blk);
    out.insert(out.end(), b.begin(), b.end());
  }
  return BitString(out, out_bits);
}

BitString HBit(std::span<const std::uint8_t> data, unsigned beta, const Salt& salt) {
  if (beta != 1 && beta != 2 && beta != 4 && beta != 8) throw ParameterError("h_bit: beta must be 1, 2, 4 or 8");
  auto st = InitState(DomainTag(OracleDomain::kBit), salt, 16);
  Update(st, data);
  const auto h = Final<16>(st);
  return BitString(std::span<const std::uint8_t>(h.data(), 1), beta);
}

std::vector<std::uint8_t> ChainInput(std::u32string_view m, std::u32string_view x, const BitString& c_prev) {
  const std::string text = ToUtf8(m) + ToUtf8(x);
  std::vector<std::uint8_t> out(text.begin(), text.end());
  out.insert(out.end(), c_prev.bytes().begin(), c_prev.bytes().end());
  const auto n = static_cast<std::uint32_t>(c_prev.size());
  out.insert(out.end(), {static_cast<std::uint8_t>(n >> 24), static_cast<std::uint8_t>(n >> 16),
                         static_cast<std::uint8_t>(n >> 8), static_cast<std::uint8_t>(n)});
  return out;
}

BitChain::BitChain(const Salt& salt, unsigned beta)
    : state_(InitState(DomainTag(OracleDomain::kBit), salt, 16)), beta_(beta) {
  if (beta != 1 && beta != 2 && beta != 4 && beta != 8) throw ParameterError("h_bit: beta must be 1, 2, 4 or 8");
}

BitString BitChain::probe(std::u32string_view x, const BitString& c_prev) const {
  crypto_generichash_blake2b_state st;
  std::memcpy(&st, &state_, sizeof st);
  UpdateText(st, x);
  UpdateChainTail(st, c_prev);
  const auto h = Final<16>(st);
  return BitString(std::span<const std::uint8_t>(h.data(), 1), beta_);
}

void BitChain::absorb(std::u32string_view x) { UpdateText(state_, x); }

const SignatureScheme& SchemeById(const std::string& id) {
  static const ShortSchnorr kShort;
  static const Ed25519 kEd;
  if (id == kShortSchnorrId) return kShort;
  if (id == kEd25519Id) return kEd;
  throw KeyError("unknown signature scheme '" + id + "'");
}

std::vector<std::string> SchemeIds() { return {kShortSchnorrId, kEd25519Id}; }

std::string SchemeForSignatureBits(std::size_t lambda_sig) {
  for (const auto& id : SchemeIds()) {
    if (SchemeById(id).signature_bits() == lambda_sig) return id;
  }
  throw ParameterError("no signature scheme produces " + std::to_string(lambda_sig) + "-bit signatures");
}

KeyMaterial Keygen(const std::string& scheme_id, const std::optional<KeySeed>& seed) {
  EnsureSodium();
  const auto& scheme = SchemeById(scheme_id);
  KeyMaterial km;
  km.scheme_id = scheme_id;
  km.signing_key.resize(32);
  if (seed) {
    std::copy(seed->begin(), seed->end(), km.signing_key.begin());
  } else {
    randombytes_buf(km.signing_key.data(), km.signing_key.size());
  }
  km.verify_key = scheme.derive_verify_key(km.signing_key);
  return km;
}

BitString Sign(const KeyMaterial& keys, const BitString& digest) {
  if (!keys.has_secret()) throw KeyError("sign: key material has no signing key");
  return SchemeById(keys.scheme_id).sign(keys.signing_key, digest);
}

bool Verify(const KeyMaterial& keys, const BitString& digest, const BitString& sig) {
  try {
    return SchemeById(keys.scheme_id).verify(keys.verify_key, digest, sig);
  } catch (const Error&) {
    return false;
  }
}

void CheckKeyMaterial(const KeyMaterial& keys) {
  const auto& scheme = SchemeById(keys.scheme_id);
  if (keys.verify_key.size() != 32) throw KeyError("verify key must be 32 bytes");
  if (keys.has_secret() && scheme.derive_verify_key(keys.signing_key) != keys.verify_key) {
    throw KeyError("verify key does not match signing key");
  }
}

}  // namespace pdws

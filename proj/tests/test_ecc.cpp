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

#include <algorithm>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "pdws/ecc.hpp"

namespace pdws {
namespace {

// Bitwise GF(2^8) multiply reducing by x^8+x^4+x^3+x^2+1.
std::uint8_t SlowMul(std::uint8_t a, std::uint8_t b) {
  unsigned acc = 0;
  for (int i = 0; i < 8; ++i) {
    if (b & (1u << i)) acc ^= static_cast<unsigned>(a) << i;
  }
  for (int bit = 14; bit >= 8; --bit) {
    if (acc & (1u << bit)) acc ^= 0x11Du << (bit - 8);
  }
  return static_cast<std::uint8_t>(acc);
}

TEST(Gf256, MatchesBitwiseMultiply) {
  for (unsigned a = 0; a < 256; ++a) {
    for (unsigned b = 0; b < 256; ++b) {
      ASSERT_EQ(gf256::Mul(a, b), SlowMul(a, b)) << a << "*" << b;
    }
  }
}

TEST(Gf256, DivisionAndPowers) {
  for (unsigned a = 1; a < 256; ++a) {
    for (unsigned b = 1; b < 256; b += 17) {
      ASSERT_EQ(gf256::Mul(gf256::Div(a, b), b), a);
    }
  }
  // alpha = 2 generates the multiplicative group.
  std::set<unsigned> seen;
  std::uint8_t x = 1;
  for (int i = 0; i < 255; ++i) {
    EXPECT_EQ(gf256::Exp(i), x);
    seen.insert(x);
    x = SlowMul(x, 2);
  }
  EXPECT_EQ(seen.size(), 255u);
  EXPECT_EQ(gf256::Pow(2, 255), 1);
  EXPECT_THROW(gf256::Div(1, 0), ParameterError);
}

std::vector<std::uint8_t> Range(std::uint8_t first, std::size_t n) {
  std::vector<std::uint8_t> v(n);
  std::iota(v.begin(), v.end(), first);
  return v;
}

// Parity vectors from the reedsolo Python package (prim 0x11d, generator 2,
// first consecutive root 0).
TEST(ReedSolomon, ReferenceVectors) {
  const ReedSolomon rs(41, 4);
  const auto cw = rs.encode(Range(1, 41));
  ASSERT_EQ(cw.size(), 45u);
  EXPECT_TRUE(std::equal(cw.begin(), cw.begin() + 41, Range(1, 41).begin()));
  EXPECT_EQ(ToHex(std::span(cw).subspan(41)), "4df65ce6");

  const std::string hello = "hello world";
  const ReedSolomon small(hello.size(), 4);
  const auto cw2 = small.encode(std::vector<std::uint8_t>(hello.begin(), hello.end()));
  EXPECT_EQ(ToHex(std::span(cw2).subspan(hello.size())), "453c174e");
}

TEST(ReedSolomon, CodewordsHaveZeroSyndromes) {
  const ReedSolomon rs(41, 4);
  std::mt19937 gen(1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::uint8_t> data(41);
    for (auto& b : data) b = static_cast<std::uint8_t>(gen());
    const auto cw = rs.encode(data);
    for (unsigned j = 0; j < 4; ++j) {
      // Horner evaluation at alpha^j, highest-degree coefficient first.
      std::uint8_t s = 0;
      std::uint8_t root = 1;
      for (unsigned i = 0; i < j; ++i) root = SlowMul(root, 2);
      for (auto c : cw) s = SlowMul(s, root) ^ c;
      ASSERT_EQ(s, 0) << "syndrome " << j;
    }
  }
}

TEST(ReedSolomon, CorrectsUpToTwoErrors) {
  const ReedSolomon rs(41, 4);
  std::mt19937 gen(2);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::uint8_t> data(41);
    for (auto& b : data) b = static_cast<std::uint8_t>(gen());
    auto cw = rs.encode(data);
    const std::size_t nerr = trial % 3;
    std::set<std::size_t> pos;
    while (pos.size() < nerr) pos.insert(gen() % cw.size());
    for (auto p : pos) cw[p] ^= static_cast<std::uint8_t>(1 + gen() % 255);
    const auto dec = rs.decode(cw);
    ASSERT_TRUE(dec.has_value());
    EXPECT_EQ(dec->data, data);
    EXPECT_EQ(dec->corrected, nerr);
  }
}

TEST(ReedSolomon, ThreeErrorsNeverRecoverOriginalSilently) {
  const ReedSolomon rs(41, 4);
  std::mt19937 gen(3);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::uint8_t> data(41);
    for (auto& b : data) b = static_cast<std::uint8_t>(gen());
    auto cw = rs.encode(data);
    std::set<std::size_t> pos;
    while (pos.size() < 3) pos.insert(gen() % cw.size());
    for (auto p : pos) cw[p] ^= static_cast<std::uint8_t>(1 + gen() % 255);
    const auto dec = rs.decode(cw);
    // Either detected, or miscorrected to a different codeword.
    if (dec) EXPECT_NE(dec->data, data);
  }
}

TEST(ReedSolomon, BadShapes) {
  EXPECT_THROW(ReedSolomon(250, 10), ParameterError);
  EXPECT_THROW(ReedSolomon(0, 4), ParameterError);
  const ReedSolomon rs(4, 2);
  EXPECT_THROW(rs.encode(Range(0, 3)), ParameterError);
  EXPECT_THROW(rs.decode(Range(0, 5)), ParameterError);
}

TEST(Profile, DefaultSizes) {
  const auto p = EccProfile::For(328, 360, 2);
  EXPECT_EQ(p.data_symbols, 41u);
  EXPECT_EQ(p.parity_symbols, 4u);
  EXPECT_EQ(p.t_correctable, 2u);
  EXPECT_EQ(p.lambda_c(), 360u);
  EXPECT_EQ(p, EccProfile{});

  const auto bypass = EccProfile::For(328, 328, 0);
  EXPECT_TRUE(bypass.bypass());
  EXPECT_EQ(bypass.lambda_c(), 328u);

  const auto ed = EccProfile::For(512, 544, 2);
  EXPECT_EQ(ed.data_symbols, 64u);
  EXPECT_EQ(ed.parity_symbols, 4u);
}

TEST(Profile, Rejections) {
  EXPECT_THROW(EccProfile::For(328, 360, 3), ParameterError);   // beyond t
  EXPECT_THROW(EccProfile::For(328, 328, 1), ParameterError);   // no parity
  EXPECT_THROW(EccProfile::For(328, 352, 0), ParameterError);   // odd parity count
  EXPECT_THROW(EccProfile::For(328, 300, 0), ParameterError);   // lambda_c < lambda_sig
  EXPECT_THROW(EccProfile::For(328, 362, 0), ParameterError);   // not whole bytes
  EXPECT_THROW(EccProfile::For(2040, 2072, 2), ParameterError); // too many symbols
}

TEST(EccBits, EncodeDecodeRoundTrip) {
  const auto p = EccProfile::For(328, 360, 2);
  std::mt19937 gen(4);
  BitString sigma(328);
  for (std::size_t i = 0; i < 328; ++i) sigma.set(i, gen() & 1);
  const auto code = EccEncode(sigma, p);
  ASSERT_EQ(code.size(), 360u);
  EXPECT_EQ(code.slice(0, 328), sigma);  // systematic
  auto bad = code;
  bad.set(5, !bad.get(5));
  bad.set(300, !bad.get(300));
  const auto dec = EccDecode(bad, p);
  ASSERT_TRUE(dec);
  EXPECT_EQ(dec->sigma, sigma);
  EXPECT_EQ(dec->corrected, 2u);
  EXPECT_THROW(EccEncode(BitString(320), p), ParameterError);
  EXPECT_THROW(EccDecode(BitString(359), p), ParameterError);
}

TEST(EccBits, UnalignedSignatureIsZeroPadded) {
  const auto p = EccProfile::For(330, 368, 2);
  EXPECT_EQ(p.data_symbols, 42u);
  BitString sigma(330);
  sigma.set(329, true);
  const auto code = EccEncode(sigma, p);
  EXPECT_EQ(code.size(), 368u);
  ASSERT_TRUE(EccDecode(code, p));
  EXPECT_EQ(EccDecode(code, p)->sigma, sigma);
  // A valid RS codeword whose padding bits are set is not an encoding.
  auto data = sigma.bytes();
  data.back() |= 0x01;
  const auto cw = ReedSolomon(42, 4).encode(data);
  EXPECT_FALSE(EccDecode(BitString(cw, 368), p));
}

TEST(EccBits, BypassIsIdentity) {
  const auto p = EccProfile::For(328, 328, 0);
  BitString sigma(328);
  sigma.set(3, true);
  EXPECT_EQ(EccEncode(sigma, p), sigma);
  EXPECT_EQ(EccDecode(sigma, p)->sigma, sigma);
  EXPECT_EQ(EccDecode(sigma, p)->corrected, 0u);
}

}  // namespace
}  // namespace pdws

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

// Systematic byte-symbol Reed-Solomon code over GF(2^8) carrying the
// signature codeword.

#ifndef PDWS_ECC_HPP_
#define PDWS_ECC_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pdws/core.hpp"

namespace pdws {

namespace gf256 {
std::uint8_t Mul(std::uint8_t a, std::uint8_t b);
std::uint8_t Div(std::uint8_t a, std::uint8_t b);
std::uint8_t Pow(std::uint8_t a, unsigned e);
std::uint8_t Exp(unsigned e);  // alpha^e, alpha = 0x02 over x^8+x^4+x^3+x^2+1
}  // namespace gf256

// RS(n = data + parity, k = data) with roots alpha^0 .. alpha^(parity-1).
class ReedSolomon {
 public:
  ReedSolomon(std::size_t data_symbols, std::size_t parity_symbols);

  std::size_t data_symbols() const { return k_; }
  std::size_t parity_symbols() const { return generator_.size() - 1; }

  // data || parity.
  std::vector<std::uint8_t> encode(std::span<const std::uint8_t> data) const;

  struct Decoded {
    std::vector<std::uint8_t> data;
    std::size_t corrected = 0;
  };
  // nullopt when the error pattern is beyond the correction radius and the
  // decoder notices; otherwise the nearest codeword's data symbols.
  std::optional<Decoded> decode(std::span<const std::uint8_t> codeword) const;

 private:
  std::size_t k_;
  std::vector<std::uint8_t> generator_;  // highest degree first, monic
};

struct EccProfile {
  std::size_t data_symbols = 41;
  std::size_t parity_symbols = 4;
  std::size_t symbol_bits = 8;
  std::size_t t_correctable = 2;
  std::size_t lambda_sig = 328;  // true signature bit length

  // Profile for the given sizes. lambda_c == lambda_sig yields the
  // parity-free bypass profile and requires gamma_max == 0.
  static EccProfile For(std::size_t lambda_sig, std::size_t lambda_c, std::size_t gamma_max);

  bool bypass() const { return parity_symbols == 0; }
  std::size_t lambda_c() const {
    return bypass() ? lambda_sig : (data_symbols + parity_symbols) * symbol_bits;
  }

  friend bool operator==(const EccProfile&, const EccProfile&) = default;
};

BitString EccEncode(const BitString& sigma, const EccProfile& profile);

struct EccDecoded {
  BitString sigma;
  std::size_t corrected = 0;
};
std::optional<EccDecoded> EccDecode(const BitString& codeword, const EccProfile& profile);

}  // namespace pdws

#endif  // PDWS_ECC_HPP_

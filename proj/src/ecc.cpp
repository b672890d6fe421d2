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

#include "pdws/ecc.hpp"

#include <algorithm>
#include <array>

namespace pdws {
namespace gf256 {
namespace {

struct Tables {
  std::array<std::uint8_t, 512> exp{};
  std::array<std::uint16_t, 256> log{};
  Tables() {
    unsigned x = 1;
    for (unsigned i = 0; i < 255; ++i) {
      exp[i] = static_cast<std::uint8_t>(x);
      log[x] = static_cast<std::uint16_t>(i);
      x <<= 1;
      if (x & 0x100) x ^= 0x11D;
    }
    for (unsigned i = 255; i < 512; ++i) exp[i] = exp[i - 255];
  }
};

const Tables& T() {
  static const Tables tables;
  return tables;
}

}  // namespace

std::uint8_t Mul(std::uint8_t a, std::uint8_t b) {
  if (a == 0 || b == 0) return 0;
  return T().exp[T().log[a] + T().log[b]];
}

std::uint8_t Div(std::uint8_t a, std::uint8_t b) {
  if (b == 0) throw ParameterError("gf256: division by zero");
  if (a == 0) return 0;
  return T().exp[(T().log[a] + 255 - T().log[b]) % 255];
}

std::uint8_t Pow(std::uint8_t a, unsigned e) {
  if (e == 0) return 1;
  if (a == 0) return 0;
  return T().exp[(T().log[a] * static_cast<unsigned long>(e)) % 255];
}

std::uint8_t Exp(unsigned e) { return T().exp[e % 255]; }

}  // namespace gf256

namespace {

using Poly = std::vector<std::uint8_t>;  // lowest degree first

std::uint8_t EvalLow(const Poly& p, std::uint8_t x) {
  std::uint8_t y = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) y = gf256::Mul(y, x) ^ *it;
  return y;
}

}  // namespace

ReedSolomon::ReedSolomon(std::size_t data_symbols, std::size_t parity_symbols) : k_(data_symbols) {
  if (data_symbols == 0 || parity_symbols == 0 || data_symbols + parity_symbols > 255) {
    throw ParameterError("reed-solomon: need 0 < k, 0 < parity and n <= 255");
  }
  generator_ = {1};
  for (std::size_t i = 0; i < parity_symbols; ++i) {
    // Multiply by (x - alpha^i).
    const std::uint8_t root = gf256::Exp(static_cast<unsigned>(i));
    Poly next(generator_.size() + 1, 0);
    for (std::size_t j = 0; j < generator_.size(); ++j) {
      next[j] ^= generator_[j];
      next[j + 1] ^= gf256::Mul(generator_[j], root);
    }
    generator_ = std::move(next);
  }
}

std::vector<std::uint8_t> ReedSolomon::encode(std::span<const std::uint8_t> data) const {
  if (data.size() != k_) throw ParameterError("reed-solomon: wrong data length");
  const std::size_t parity = parity_symbols();
  std::vector<std::uint8_t> out(data.begin(), data.end());
  out.resize(k_ + parity, 0);
  // Polynomial long division of data * x^parity by the generator.
  std::vector<std::uint8_t> rem(out);
  for (std::size_t i = 0; i < k_; ++i) {
    const std::uint8_t coef = rem[i];
    if (coef == 0) continue;
    for (std::size_t j = 1; j < generator_.size(); ++j) rem[i + j] ^= gf256::Mul(generator_[j], coef);
  }
  std::copy(rem.begin() + static_cast<std::ptrdiff_t>(k_), rem.end(), out.begin() + static_cast<std::ptrdiff_t>(k_));
  return out;
}

std::optional<ReedSolomon::Decoded> ReedSolomon::decode(std::span<const std::uint8_t> codeword) const {
  const std::size_t parity = parity_symbols();
  const std::size_t n = k_ + parity;
  if (codeword.size() != n) throw ParameterError("reed-solomon: wrong codeword length");

  auto syndromes = [&](std::span<const std::uint8_t> c) {
    Poly s(parity, 0);
    for (std::size_t j = 0; j < parity; ++j) {
      const std::uint8_t x = gf256::Exp(static_cast<unsigned>(j));
      std::uint8_t y = 0;
      for (auto b : c) y = gf256::Mul(y, x) ^ b;
      s[j] = y;
    }
    return s;
  };

  const Poly synd = syndromes(codeword);
  if (std::all_of(synd.begin(), synd.end(), [](std::uint8_t v) { return v == 0; })) {
    return Decoded{{codeword.begin(), codeword.begin() + static_cast<std::ptrdiff_t>(k_)}, 0};
  }

  // Berlekamp-Massey for the error locator.
  Poly lambda{1}, prev{1};
  std::size_t len = 0;
  std::size_t shift = 1;
  std::uint8_t prev_disc = 1;
  for (std::size_t r = 0; r < parity; ++r) {
    std::uint8_t disc = synd[r];
    for (std::size_t i = 1; i <= len && i < lambda.size(); ++i) disc ^= gf256::Mul(lambda[i], synd[r - i]);
    if (disc == 0) {
      ++shift;
      continue;
    }
    const std::uint8_t scale = gf256::Div(disc, prev_disc);
    Poly next = lambda;
    if (next.size() < prev.size() + shift) next.resize(prev.size() + shift, 0);
    for (std::size_t i = 0; i < prev.size(); ++i) next[i + shift] ^= gf256::Mul(scale, prev[i]);
    if (2 * len <= r) {
      prev = lambda;
      len = r + 1 - len;
      prev_disc = disc;
      shift = 1;
    } else {
      ++shift;
    }
    lambda = std::move(next);
  }
  while (lambda.size() > 1 && lambda.back() == 0) lambda.pop_back();
  const std::size_t n_errors = lambda.size() - 1;
  if (n_errors == 0 || n_errors != len || 2 * n_errors > parity) return std::nullopt;

  // Chien search: byte k sits at power n-1-k.
  std::vector<std::size_t> positions;
  for (std::size_t k = 0; k < n; ++k) {
    const unsigned power = static_cast<unsigned>(n - 1 - k);
    const std::uint8_t x_inv = gf256::Exp(255 - power % 255);
    if (EvalLow(lambda, x_inv) == 0) positions.push_back(k);
  }
  if (positions.size() != n_errors) return std::nullopt;

  // Forney with first consecutive root alpha^0: e = X * omega(X^-1) / lambda'(X^-1).
  Poly omega(parity, 0);
  for (std::size_t i = 0; i < parity; ++i) {
    for (std::size_t j = 0; j < lambda.size() && i + j < parity; ++j) omega[i + j] ^= gf256::Mul(synd[i], lambda[j]);
  }
  Poly dlambda(lambda.size() > 1 ? lambda.size() - 1 : 1, 0);
  for (std::size_t i = 1; i < lambda.size(); i += 2) dlambda[i - 1] = lambda[i];

  std::vector<std::uint8_t> fixed(codeword.begin(), codeword.end());
  for (std::size_t k : positions) {
    const unsigned power = static_cast<unsigned>(n - 1 - k);
    const std::uint8_t x = gf256::Exp(power);
    const std::uint8_t x_inv = gf256::Exp(255 - power % 255);
    const std::uint8_t denom = EvalLow(dlambda, x_inv);
    if (denom == 0) return std::nullopt;
    const std::uint8_t mag = gf256::Mul(x, gf256::Div(EvalLow(omega, x_inv), denom));
    if (mag == 0) return std::nullopt;
    fixed[k] ^= mag;
  }
  const Poly check = syndromes(fixed);
  if (!std::all_of(check.begin(), check.end(), [](std::uint8_t v) { return v == 0; })) return std::nullopt;
  fixed.resize(k_);
  return Decoded{std::move(fixed), n_errors};
}

EccProfile EccProfile::For(std::size_t lambda_sig, std::size_t lambda_c, std::size_t gamma_max) {
  if (lambda_sig == 0 || lambda_c < lambda_sig) throw ParameterError("ecc: need 0 < lambda_sig <= lambda_c");
  EccProfile p;
  p.lambda_sig = lambda_sig;
  p.symbol_bits = 8;
  p.data_symbols = (lambda_sig + 7) / 8;
  if (lambda_c == lambda_sig) {
    if (gamma_max != 0) throw ParameterError("ecc: gamma_max > 0 needs parity (lambda_c > lambda_sig)");
    p.parity_symbols = 0;
    p.t_correctable = 0;
    return p;
  }
  if (lambda_c % 8 != 0) throw ParameterError("ecc: lambda_c must be a whole number of bytes");
  if (lambda_c / 8 <= p.data_symbols) throw ParameterError("ecc: lambda_c leaves no room for parity");
  p.parity_symbols = lambda_c / 8 - p.data_symbols;
  if (p.parity_symbols % 2 != 0) throw ParameterError("ecc: parity symbol count must be even");
  if (p.data_symbols + p.parity_symbols > 255) throw ParameterError("ecc: codeword exceeds 255 symbols");
  p.t_correctable = p.parity_symbols / 2;
  if (gamma_max > p.t_correctable) {
    throw ParameterError("ecc: gamma_max=" + std::to_string(gamma_max) + " exceeds correction capacity " +
                         std::to_string(p.t_correctable));
  }
  return p;
}

BitString EccEncode(const BitString& sigma, const EccProfile& profile) {
  if (sigma.size() != profile.lambda_sig) {
    throw ParameterError("ecc encode: expected " + std::to_string(profile.lambda_sig) + " bits, got " +
                         std::to_string(sigma.size()));
  }
  if (profile.bypass()) return sigma;
  const ReedSolomon rs(profile.data_symbols, profile.parity_symbols);
  return BitString::FromBytes(rs.encode(sigma.bytes()));
}

std::optional<EccDecoded> EccDecode(const BitString& codeword, const EccProfile& profile) {
  if (codeword.size() != profile.lambda_c()) {
    throw ParameterError("ecc decode: expected " + std::to_string(profile.lambda_c()) + " bits, got " +
                         std::to_string(codeword.size()));
  }
  if (profile.bypass()) return EccDecoded{codeword, 0};
  const ReedSolomon rs(profile.data_symbols, profile.parity_symbols);
  auto decoded = rs.decode(codeword.bytes());
  if (!decoded) return std::nullopt;
  BitString full = BitString::FromBytes(decoded->data);
  BitString sigma = full.slice(0, profile.lambda_sig);
  // Padding bits of a non-aligned signature must come back as zero.
  for (std::size_t i = profile.lambda_sig; i < full.size(); ++i) {
    if (full.get(i)) return std::nullopt;
  }
  return EccDecoded{std::move(sigma), decoded->corrected};
}

}  // namespace pdws

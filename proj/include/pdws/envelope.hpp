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

// Key envelopes: the public bundle is everything a detector needs; the
// secret bundle adds the signing key and the generation-only knobs.

#ifndef PDWS_ENVELOPE_HPP_
#define PDWS_ENVELOPE_HPP_

#include "pdws/core.hpp"
#include "pdws/crypto.hpp"
#include "pdws/ecc.hpp"

namespace pdws {

struct PublicParams {
  std::uint32_t ell = 16;
  std::uint32_t beta = 2;
  std::uint32_t lambda_sig = 328;
  std::uint32_t lambda_c = 360;
  EccProfile ecc;
  Salt salt{};

  static PublicParams From(const WatermarkParams& params, const Salt& salt);

  std::size_t n_blocks() const { return lambda_c / beta; }
  std::size_t gadget_chars() const { return static_cast<std::size_t>(ell) * (1 + n_blocks()); }
  // Structural checks plus agreement between the sizes and the ECC profile.
  void validate() const;

  friend bool operator==(const PublicParams&, const PublicParams&) = default;
};

struct PublicEnvelope {
  KeyMaterial keys;  // verify key only
  PublicParams params;
};

struct SecretEnvelope {
  KeyMaterial keys;
  WatermarkParams params;
  Salt salt{};

  PublicParams public_params() const { return PublicParams::From(params, salt); }
  PublicEnvelope public_envelope() const { return {keys.public_only(), public_params()}; }
  // Params valid, keys consistent and signature length == lambda_sig.
  void validate() const;
};

// Fresh key pair and salt for `params`. The scheme defaults to the one whose
// signature length equals params.lambda_sig. A seed makes keys and salt
// deterministic.
SecretEnvelope MakeSecretEnvelope(const WatermarkParams& params, const std::string& scheme_id = "",
                                  const std::optional<KeySeed>& seed = std::nullopt);

}  // namespace pdws

#endif  // PDWS_ENVELOPE_HPP_

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

#include "pdws/envelope.hpp"

namespace pdws {

PublicParams PublicParams::From(const WatermarkParams& params, const Salt& salt) {
  PublicParams p;
  p.ell = params.ell;
  p.beta = params.beta;
  p.lambda_sig = params.lambda_sig;
  p.lambda_c = params.lambda_c;
  p.ecc = EccProfile::For(params.lambda_sig, params.lambda_c, params.gamma_max);
  p.salt = salt;
  return p;
}

void PublicParams::validate() const {
  WatermarkParams probe;
  probe.ell = ell;
  probe.beta = beta;
  probe.lambda_sig = lambda_sig;
  probe.lambda_c = lambda_c;
  probe.gamma_max = 0;
  probe.validate();
  if (ecc.lambda_sig != lambda_sig || ecc.lambda_c() != lambda_c) {
    throw ParameterError("public params: ECC profile does not match lambda_sig/lambda_c");
  }
  if (ecc.symbol_bits != 8 || (!ecc.bypass() && ecc.t_correctable != ecc.parity_symbols / 2)) {
    throw ParameterError("public params: malformed ECC profile");
  }
  if (!ecc.bypass()) EccProfile::For(lambda_sig, lambda_c, ecc.t_correctable);
}

void SecretEnvelope::validate() const {
  params.validate();
  EccProfile::For(params.lambda_sig, params.lambda_c, params.gamma_max);
  CheckKeyMaterial(keys);
  if (!keys.has_secret()) throw KeyError("secret envelope lacks a signing key");
  const auto bits = SchemeById(keys.scheme_id).signature_bits();
  if (bits != params.lambda_sig) {
    throw ParameterError("scheme " + keys.scheme_id + " signs " + std::to_string(bits) +
                         " bits but lambda_sig=" + std::to_string(params.lambda_sig));
  }
}

SecretEnvelope MakeSecretEnvelope(const WatermarkParams& params, const std::string& scheme_id,
                                  const std::optional<KeySeed>& seed) {
  params.validate();
  SecretEnvelope env;
  env.params = params;
  const std::string scheme = scheme_id.empty() ? SchemeForSignatureBits(params.lambda_sig) : scheme_id;
  env.keys = Keygen(scheme, seed);
  if (seed) {
    // Salt derived from the seed under its own domain.
    const auto h = HSign(*seed, Salt{'s', 'a', 'l', 't'});
    std::copy_n(h.bytes().begin(), kSaltBytes, env.salt.begin());
  } else {
    randombytes_buf(env.salt.data(), env.salt.size());
  }
  env.validate();
  return env;
}

}  // namespace pdws

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

// Public detection: slide over candidate message offsets, rebuild the masked
// codeword through the chained BIT oracle, unmask, error-correct and verify
// with the public key alone.

#ifndef PDWS_DETECTOR_HPP_
#define PDWS_DETECTOR_HPP_

#include <vector>

#include "pdws/core.hpp"
#include "pdws/envelope.hpp"

namespace pdws {

struct DetectionResult {
  bool detected = false;
  std::size_t offset = 0;  // message block start when detected
  std::size_t corrected_errors = 0;
  BitString recovered_sig;
  Text message_block;
};

struct DetectOptions {
  // Offsets evaluated concurrently; the lowest verifying offset still wins.
  unsigned threads = 1;
};

// Masked codeword as read from `text` for a gadget whose message starts at
// `offset`. Requires the full gadget to fit.
BitString ReadCodeword(const PublicParams& params, std::u32string_view text, std::size_t offset);

// Checks the single offset `offset` (known-offset fast path).
DetectionResult DetectAt(const KeyMaterial& pk, const PublicParams& params, std::u32string_view text,
                         std::size_t offset);

// Scans offsets 0 .. len - gadget_chars and returns the first that verifies.
DetectionResult Detect(const KeyMaterial& pk, const PublicParams& params, std::u32string_view text,
                       const DetectOptions& options = {});

// Every verifying gadget. After a hit at offset i the scan resumes at the
// gadget's last block, so tiled gadgets sharing that block are found too.
std::vector<DetectionResult> DetectAll(const KeyMaterial& pk, const PublicParams& params, std::u32string_view text,
                                       const DetectOptions& options = {});

}  // namespace pdws

#endif  // PDWS_DETECTOR_HPP_

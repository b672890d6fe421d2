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

// Philox4x32-10 counter-based generator and the sampler state threaded
// through generation.

#ifndef PDWS_RNG_HPP_
#define PDWS_RNG_HPP_

#include <array>
#include <cstdint>

namespace pdws {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

// One Philox4x32 bijection with 10 rounds.
PhiloxCounter Philox4x32(PhiloxCounter ctr, PhiloxKey key);

std::uint64_t SplitMix64(std::uint64_t x);

// Sampler state. Keyed by (seed, stream); draws walk a 64-bit block counter.
// Equal states produce equal draw sequences.
class SamplerState {
 public:
  SamplerState() = default;
  explicit SamplerState(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }
  std::uint64_t counter() const noexcept { return counter_; }

  std::uint64_t next_u64();
  // Uniform in [0, 1) with 53 bits of resolution.
  double next_double();
  // Uniform in [0, bound) without modulo bias.
  std::uint64_t next_below(std::uint64_t bound);

  // Independent child state for attempt `index`, derived from this state's
  // seed, stream and current position. Does not advance this state.
  SamplerState fork(std::uint64_t index) const;

  friend bool operator==(const SamplerState&, const SamplerState&) = default;

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
  std::uint64_t counter_ = 0;  // 64-bit words consumed
};

}  // namespace pdws

#endif  // PDWS_RNG_HPP_

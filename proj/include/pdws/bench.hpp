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

// Desk-scale measurements: expected sampled characters, attempt statistics,
// generation/detection timing and planted-error histograms.

#ifndef PDWS_BENCH_HPP_
#define PDWS_BENCH_HPP_

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "pdws/core.hpp"
#include "pdws/envelope.hpp"
#include "pdws/model.hpp"

namespace pdws {

// 2^beta * (lambda / beta) * ell: characters sampled to embed a lambda-bit
// codeword when each block needs 2^beta attempts on average.
std::uint64_t ExpectedChars(std::uint64_t ell, std::uint64_t beta, std::uint64_t lambda_bits);

struct TimeStats {
  double mean = 0.0;
  double p95 = 0.0;
};

// Nearest-rank percentile, q in (0, 1].
double Percentile(std::vector<double> values, double q);
TimeStats Summarize(const std::vector<double>& values);

struct BenchRun {
  std::size_t prompt_index = 0;
  std::size_t repeat = 0;
  std::uint64_t seed = 0;
  bool failed = false;  // embed failure (only recorded when censoring)
  bool detected = false;
  double gen_seconds = 0.0;
  double detect_seconds = 0.0;
  std::uint64_t sampled_chars = 0;   // rejection-sampling characters, all gadgets
  std::uint64_t blocks = 0;
  std::uint64_t clean_blocks = 0;    // blocks accepted on a hash match
  std::uint64_t clean_attempts = 0;  // attempts spent on those blocks
  std::uint32_t gamma_used = 0;
};

struct BenchReport {
  WatermarkParams config;
  std::string scheme_id;
  std::string model_kind;
  std::uint64_t base_seed = 0;
  std::string host;
  std::size_t runs = 0;
  std::size_t failures = 0;
  double mean_chars = 0.0;
  double mean_attempts_per_block = 0.0;
  TimeStats gen_time_stats;     // failed runs censored at the max observed time
  TimeStats detect_time_stats;  // known-offset detection, successful runs
  std::map<int, std::size_t> gamma_histogram;  // failed runs under gamma_max + 1
  std::vector<BenchRun> rows;
};

struct BenchOptions {
  std::size_t repeats = 1;
  std::uint64_t seed = 0;
  std::size_t warmup = 1;
  // Record embed failures as censored rows instead of propagating them.
  bool censor_failures = false;
};

// Runs watermark + known-offset detect for every (prompt, repeat) cell.
// Throws EmbedFailure (naming the config) unless censor_failures is set.
BenchReport RunBench(const SecretEnvelope& secret, std::shared_ptr<const Model> model,
                     const std::vector<Text>& prompts, const BenchOptions& options);

std::string BenchReportToJson(const BenchReport& report);
// One row per run.
std::string BenchRunsCsv(const BenchReport& report);
// Per-prompt aggregates: mean and 95% spread of generation time.
std::string BenchPlotCsv(const BenchReport& report);

}  // namespace pdws

#endif  // PDWS_BENCH_HPP_

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

#include "pdws/bench.hpp"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "pdws/detector.hpp"
#include "pdws/embedder.hpp"
#include "pdws/rng.hpp"
#include "pdws/serialize.hpp"

namespace pdws {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point a, Clock::time_point b) { return std::chrono::duration<double>(b - a).count(); }

std::string HostInfo() {
  char name[256] = {};
  if (gethostname(name, sizeof name - 1) != 0) name[0] = '\0';
  return std::string(name) + " (" + std::to_string(std::thread::hardware_concurrency()) + " threads)";
}

std::string ConfigLabel(const WatermarkParams& p) {
  return "l" + std::to_string(p.ell) + "-b" + std::to_string(p.beta) + "-g" + std::to_string(p.gamma_max);
}

}  // namespace

std::uint64_t ExpectedChars(std::uint64_t ell, std::uint64_t beta, std::uint64_t lambda_bits) {
  if (beta == 0 || beta >= 64 || lambda_bits % beta != 0) {
    throw ParameterError("expected_chars: beta must divide lambda");
  }
  return (std::uint64_t{1} << beta) * (lambda_bits / beta) * ell;
}

double Percentile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
  return values[std::clamp<std::size_t>(rank, 1, values.size()) - 1];
}

TimeStats Summarize(const std::vector<double>& values) {
  if (values.empty()) return {};
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  return {mean, Percentile(values, 0.95)};
}

BenchReport RunBench(const SecretEnvelope& secret, std::shared_ptr<const Model> model,
                     const std::vector<Text>& prompts, const BenchOptions& options) {
  if (options.repeats == 0) throw ParameterError("run_bench: repeats must be >= 1");
  if (prompts.empty()) throw ParameterError("run_bench: no prompts");
  secret.validate();
  const PublicEnvelope pub = secret.public_envelope();

  BenchReport report;
  report.config = secret.params;
  report.scheme_id = secret.keys.scheme_id;
  report.model_kind = ModelKindName(model->kind());
  report.base_seed = options.seed;
  report.host = HostInfo();

  for (std::size_t w = 0; w < options.warmup; ++w) {
    try {
      Watermark(secret, model, prompts.front(), {SplitMix64(options.seed ^ 0xA5A5A5A5ull), 1});
    } catch (const EmbedFailure&) {
    }
  }

  for (std::size_t pi = 0; pi < prompts.size(); ++pi) {
    for (std::size_t r = 0; r < options.repeats; ++r) {
      BenchRun row;
      row.prompt_index = pi;
      row.repeat = r;
      row.seed = SplitMix64(options.seed ^ SplitMix64((static_cast<std::uint64_t>(pi) << 32) | r));
      const auto t0 = Clock::now();
      WatermarkResult result;
      try {
        result = Watermark(secret, model, prompts[pi], {row.seed, 1});
      } catch (const EmbedFailure& e) {
        if (!options.censor_failures) {
          throw EmbedFailure(e.gadget_index(), e.block_index(),
                             std::string(e.what()) + " [config " + ConfigLabel(secret.params) + ", prompt " +
                                 std::to_string(pi) + ", repeat " + std::to_string(r) + "]");
        }
        row.failed = true;
        row.gen_seconds = Seconds(t0, Clock::now());
        report.rows.push_back(row);
        continue;
      }
      row.gen_seconds = Seconds(t0, Clock::now());
      for (const auto& g : result.gadgets) {
        row.gamma_used += g.gamma_used;
        row.sampled_chars += g.sampled_chars();
        for (const auto& b : g.blocks) {
          ++row.blocks;
          if (!b.planted_error) {
            ++row.clean_blocks;
            row.clean_attempts += b.attempts;
          }
        }
      }
      const auto t1 = Clock::now();
      row.detected = DetectAt(pub.keys, pub.params, result.text, 0).detected;
      row.detect_seconds = Seconds(t1, Clock::now());
      report.rows.push_back(row);
    }
  }

  report.runs = report.rows.size();
  double max_gen = 0.0;
  for (const auto& row : report.rows) max_gen = std::max(max_gen, row.gen_seconds);
  std::vector<double> gen, det;
  std::uint64_t chars = 0, clean_blocks = 0, clean_attempts = 0;
  std::size_t ok = 0;
  for (const auto& row : report.rows) {
    if (row.failed) {
      ++report.failures;
      ++report.gamma_histogram[static_cast<int>(secret.params.gamma_max) + 1];
      gen.push_back(max_gen);
      continue;
    }
    ++ok;
    ++report.gamma_histogram[static_cast<int>(row.gamma_used)];
    gen.push_back(row.gen_seconds);
    det.push_back(row.detect_seconds);
    chars += row.sampled_chars;
    clean_blocks += row.clean_blocks;
    clean_attempts += row.clean_attempts;
  }
  report.gen_time_stats = Summarize(gen);
  report.detect_time_stats = Summarize(det);
  report.mean_chars = ok ? static_cast<double>(chars) / static_cast<double>(ok) : 0.0;
  report.mean_attempts_per_block =
      clean_blocks ? static_cast<double>(clean_attempts) / static_cast<double>(clean_blocks) : 0.0;
  return report;
}

std::string BenchReportToJson(const BenchReport& report) {
  using nlohmann::json;
  json hist = json::object();
  for (const auto& [k, v] : report.gamma_histogram) hist[std::to_string(k)] = v;
  json j{{"format_version", kFormatVersion},
         {"config", json::parse(ParamsToJson(report.config))},
         {"scheme_id", report.scheme_id},
         {"model_kind", report.model_kind},
         {"seed", report.base_seed},
         {"host", report.host},
         {"runs", report.runs},
         {"failures", report.failures},
         {"expected_chars", ExpectedChars(report.config.ell, report.config.beta, report.config.lambda_c)},
         {"mean_chars", report.mean_chars},
         {"mean_attempts_per_block", report.mean_attempts_per_block},
         {"gen_time_stats", {{"mean", report.gen_time_stats.mean}, {"p95", report.gen_time_stats.p95}}},
         {"detect_time_stats", {{"mean", report.detect_time_stats.mean}, {"p95", report.detect_time_stats.p95}}},
         {"gamma_histogram", hist}};
  j["config"].erase("format_version");
  return j.dump(2);
}

std::string BenchRunsCsv(const BenchReport& report) {
  std::ostringstream os;
  os << "config,prompt,repeat,seed,failed,detected,gen_seconds,detect_seconds,sampled_chars,blocks,clean_blocks,"
        "clean_attempts,gamma_used\n";
  const std::string label = ConfigLabel(report.config);
  for (const auto& r : report.rows) {
    os << label << ',' << r.prompt_index << ',' << r.repeat << ',' << r.seed << ',' << r.failed << ',' << r.detected
       << ',' << r.gen_seconds << ',' << r.detect_seconds << ',' << r.sampled_chars << ',' << r.blocks << ','
       << r.clean_blocks << ',' << r.clean_attempts << ',' << r.gamma_used << '\n';
  }
  return os.str();
}

std::string BenchPlotCsv(const BenchReport& report) {
  std::map<std::size_t, std::vector<const BenchRun*>> by_prompt;
  for (const auto& r : report.rows) by_prompt[r.prompt_index].push_back(&r);
  double max_gen = 0.0;
  for (const auto& r : report.rows) max_gen = std::max(max_gen, r.gen_seconds);

  std::ostringstream os;
  os << "config,prompt,runs,failures,gen_mean,gen_p2_5,gen_p97_5,detect_mean,mean_chars\n";
  const std::string label = ConfigLabel(report.config);
  for (const auto& [prompt, rows] : by_prompt) {
    std::vector<double> gen, det;
    double chars = 0.0;
    std::size_t failures = 0;
    for (const auto* r : rows) {
      if (r->failed) {
        ++failures;
        gen.push_back(max_gen);
        continue;
      }
      gen.push_back(r->gen_seconds);
      det.push_back(r->detect_seconds);
      chars += static_cast<double>(r->sampled_chars);
    }
    const std::size_t ok = rows.size() - failures;
    os << label << ',' << prompt << ',' << rows.size() << ',' << failures << ',' << Summarize(gen).mean << ','
       << Percentile(gen, 0.025) << ',' << Percentile(gen, 0.975) << ',' << Summarize(det).mean << ','
       << (ok ? chars / static_cast<double>(ok) : 0.0) << '\n';
  }
  return os.str();
}

}  // namespace pdws

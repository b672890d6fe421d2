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

#include <chrono>

#include <gtest/gtest.h>
#include <json.hpp>

#include "pdws/bench.hpp"
#include "test_util.hpp"

namespace pdws {
namespace {

using testing::Envelope;
using testing::Uniform;

TEST(ExpectedChars, Examples) {
  EXPECT_EQ(ExpectedChars(16, 1, 328), 10496u);
  EXPECT_EQ(ExpectedChars(16, 2, 328), 10496u);
  EXPECT_EQ(ExpectedChars(32, 2, 328), 20992u);
  EXPECT_EQ(ExpectedChars(16, 2, 360), 11520u);
}

TEST(ExpectedChars, Errors) {
  EXPECT_THROW(ExpectedChars(16, 4, 330), ParameterError);
  EXPECT_THROW(ExpectedChars(16, 0, 328), ParameterError);
}

TEST(ExpectedChars, Monotone) {
  for (std::uint64_t ell = 1; ell < 64; ++ell) {
    EXPECT_LT(ExpectedChars(ell, 2, 328), ExpectedChars(ell + 1, 2, 328));
  }
  for (std::uint64_t lambda = 8; lambda < 1024; lambda += 8) {
    EXPECT_LT(ExpectedChars(16, 2, lambda), ExpectedChars(16, 2, lambda + 8));
  }
}

TEST(Percentile, NearestRank) {
  EXPECT_DOUBLE_EQ(Percentile({5, 1, 3, 2, 4}, 0.95), 5);
  EXPECT_DOUBLE_EQ(Percentile({5, 1, 3, 2, 4}, 0.5), 3);
  EXPECT_DOUBLE_EQ(Percentile({}, 0.5), 0);
  const auto s = Summarize({1, 2, 3, 4});
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_DOUBLE_EQ(s.p95, 4);
}

std::vector<Text> Prompts(std::size_t n) {
  std::vector<Text> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(U"prompt " + Text(1, static_cast<char32_t>(U'a' + i)));
  return out;
}

TEST(RunBench, UniformMockMatchesExpectedChars) {
  const auto env = Envelope({});
  BenchOptions o;
  o.repeats = 3;
  o.seed = 5;
  const auto r = RunBench(env, Uniform(), Prompts(10), o);
  EXPECT_EQ(r.runs, 30u);
  EXPECT_EQ(r.failures, 0u);
  const double expected = static_cast<double>(ExpectedChars(16, 2, 360));
  EXPECT_NEAR(r.mean_chars, expected, 0.15 * expected);
  EXPECT_NEAR(r.mean_attempts_per_block, 4.0, 0.5);
  for (const auto& row : r.rows) EXPECT_TRUE(row.detected);
  EXPECT_EQ(r.gamma_histogram.at(0), 30u);
  // Free mock inference: detection still beats generation.
  EXPECT_LT(r.detect_time_stats.mean, r.gen_time_stats.mean);
}

// Uniform model that burns a fixed amount of CPU per call, standing in for
// the inference cost of a real model.
class CostlyUniform final : public Model {
 public:
  explicit CostlyUniform(std::chrono::microseconds cost) : inner_(Uniform()), cost_(cost) {}
  ModelKind kind() const override { return inner_->kind(); }
  const ModelConfig& config() const override { return inner_->config(); }
  TokenDistribution next_distribution(std::u32string_view p, std::u32string_view c) const override {
    const auto until = std::chrono::steady_clock::now() + cost_;
    while (std::chrono::steady_clock::now() < until) {
    }
    return inner_->next_distribution(p, c);
  }

 private:
  std::shared_ptr<const Model> inner_;
  std::chrono::microseconds cost_;
};

TEST(RunBench, DetectUnderOnePercentWhenInferenceDominates) {
  const auto env = Envelope({});
  BenchOptions o;
  o.repeats = 1;
  o.warmup = 0;
  const auto r = RunBench(env, std::make_shared<CostlyUniform>(std::chrono::microseconds(5)), Prompts(3), o);
  EXPECT_LT(r.detect_time_stats.mean, 0.01 * r.gen_time_stats.mean)
      << r.detect_time_stats.mean << " vs " << r.gen_time_stats.mean;
}

TEST(RunBench, DeterministicGivenSeed) {
  const auto env = Envelope({});
  BenchOptions o;
  o.repeats = 2;
  o.seed = 9;
  const auto a = RunBench(env, Uniform(), Prompts(2), o);
  const auto b = RunBench(env, Uniform(), Prompts(2), o);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].seed, b.rows[i].seed);
    EXPECT_EQ(a.rows[i].sampled_chars, b.rows[i].sampled_chars);
    EXPECT_EQ(a.rows[i].clean_attempts, b.rows[i].clean_attempts);
  }
  EXPECT_NE(a.rows[0].seed, a.rows[1].seed);
}

std::shared_ptr<const Model> ManyForced() {
  ModelConfig c;
  c.kind = ModelKind::kScriptedMock;
  c.segments.push_back({U"", 16});
  for (int i = 0; i < 12; ++i) {
    c.segments.push_back({Text(16, static_cast<char32_t>(U'a' + i)), 0});
    c.segments.push_back({U"", 16});
  }
  c.segments.push_back({U"", 16 * 156});
  return MakeModel(c);
}

TEST(RunBench, FailuresPropagateWithConfig) {
  const auto env = Envelope({});
  BenchOptions o;
  o.warmup = 0;
  try {
    RunBench(env, ManyForced(), Prompts(1), o);
    FAIL() << "expected an embed failure";
  } catch (const EmbedFailure& e) {
    EXPECT_NE(std::string(e.what()).find("config l16-b2-g2"), std::string::npos) << e.what();
  }
}

TEST(RunBench, CensoredFailures) {
  const auto env = Envelope({});
  BenchOptions o;
  o.warmup = 0;
  o.repeats = 3;
  o.censor_failures = true;
  const auto r = RunBench(env, ManyForced(), Prompts(1), o);
  EXPECT_EQ(r.failures, 3u);
  EXPECT_EQ(r.gamma_histogram.at(3), 3u);
  double max_gen = 0;
  for (const auto& row : r.rows) {
    EXPECT_TRUE(row.failed);
    max_gen = std::max(max_gen, row.gen_seconds);
  }
  EXPECT_DOUBLE_EQ(r.gen_time_stats.p95, max_gen);
}

TEST(RunBench, Preconditions) {
  const auto env = Envelope({});
  BenchOptions o;
  o.repeats = 0;
  EXPECT_THROW(RunBench(env, Uniform(), Prompts(1), o), ParameterError);
  o.repeats = 1;
  EXPECT_THROW(RunBench(env, Uniform(), {}, o), ParameterError);
}

TEST(Report, Serialization) {
  const auto env = Envelope({});
  BenchOptions o;
  o.repeats = 2;
  const auto r = RunBench(env, Uniform(), Prompts(2), o);
  const auto j = nlohmann::json::parse(BenchReportToJson(r));
  EXPECT_EQ(j["runs"], 4);
  EXPECT_EQ(j["expected_chars"], 11520);
  EXPECT_EQ(j["config"]["ell"], 16);
  EXPECT_FALSE(j["config"].contains("format_version"));
  EXPECT_TRUE(j.contains("host"));
  EXPECT_TRUE(j["gen_time_stats"].contains("p95"));

  const auto csv = BenchRunsCsv(r);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  EXPECT_EQ(csv.rfind("config,prompt,repeat,seed", 0), 0u);
  const auto plot = BenchPlotCsv(r);
  EXPECT_EQ(std::count(plot.begin(), plot.end(), '\n'), 3);
  EXPECT_EQ(plot.rfind("config,prompt,runs,failures,gen_mean,gen_p2_5,gen_p97_5", 0), 0u);
}

}  // namespace
}  // namespace pdws

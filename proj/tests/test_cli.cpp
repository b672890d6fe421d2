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

// Drives the installed command-line tool as a subprocess.

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::string kCli = PDWS_CLI;
const std::string kSrc = PDWS_SOURCE_DIR;

struct Result {
  int code = -1;
  std::string out;
};

Result Exec(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " '" + kCli + "' " + args + " 2>stderr.txt";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void Spit(const fs::path& path, const std::string& s) {
  std::ofstream(path, std::ios::binary) << s;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("pdws_cli_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    old_ = fs::current_path();
    fs::current_path(dir_);
  }
  void TearDown() override {
    fs::current_path(old_);
    fs::remove_all(dir_);
  }
  static std::string Src(const std::string& rel) { return "'" + kSrc + "/" + rel + "'"; }

  void Keygen(const std::string& extra = "") {
    ASSERT_EQ(Exec("keygen --secret-out s.json --public-out p.json --seed 11 " + extra).code, 0)
        << Slurp("stderr.txt");
  }

  fs::path dir_, old_;
};

TEST_F(Cli, KeygenFiles) {
  Keygen();
  const auto secret = json::parse(Slurp("s.json"));
  const std::string pub = Slurp("p.json");
  EXPECT_EQ(pub.find(secret["secret_key"].get<std::string>()), std::string::npos);
  EXPECT_FALSE(json::parse(pub).contains("secret_key"));

  ASSERT_EQ(Exec("keygen --secret-out s2.json --public-out p2.json --seed 11").code, 0);
  EXPECT_EQ(Slurp("s.json"), Slurp("s2.json"));
  EXPECT_EQ(Slurp("p.json"), Slurp("p2.json"));
  ASSERT_EQ(Exec("keygen --secret-out s3.json --public-out p3.json --seed 12").code, 0);
  EXPECT_NE(Slurp("s.json"), Slurp("s3.json"));

  EXPECT_EQ(Exec("keygen --secret-out /nonexistent/dir/s.json --public-out p4.json").code, 2);
  EXPECT_EQ(Exec("keygen --secret-out s5.json --public-out p5.json --params missing.json").code, 2);
}

TEST_F(Cli, WatermarkAndDetect) {
  Keygen();
  const auto w = Exec("watermark --key s.json --model " + Src("configs/uniform-mock.json") +
                     " --prompt hello --seed 4 --out w.json");
  ASSERT_EQ(w.code, 0) << Slurp("stderr.txt");
  const auto doc = json::parse(Slurp("w.json"));
  const std::string text = doc["text"];
  EXPECT_EQ(text.size(), 2896u);

  auto d = Exec("detect --key p.json --input w.json");
  EXPECT_EQ(d.code, 0);
  EXPECT_EQ(json::parse(d.out)["detected"], true);

  // Plain text input works as well as the watermark document.
  Spit("t.txt", text);
  EXPECT_EQ(Exec("detect --key p.json --input t.txt").code, 0);
  EXPECT_EQ(Exec("detect --key p.json --input - < t.txt").code, 0);

  // The secret file is not needed for detection.
  fs::remove("s.json");
  EXPECT_EQ(Exec("detect --key p.json --input t.txt").code, 0);

  d = Exec("detect --key p.json --text ''");
  EXPECT_EQ(d.code, 1);
  EXPECT_EQ(json::parse(d.out)["detected"], false);

  Spit("shifted.txt", "some prefix " + text + " and a tail");
  EXPECT_EQ(Exec("detect --key p.json --input shifted.txt").code, 1);
  d = Exec("detect --key p.json --input shifted.txt --scan");
  EXPECT_EQ(d.code, 0);
  EXPECT_EQ(json::parse(d.out)["offset"], 12);
  EXPECT_EQ(Exec("detect --key p.json --input shifted.txt --known-offset 12").code, 0);

  Spit("bad.json", "{\"format_version\": 1, \"scheme\": 3}");
  EXPECT_EQ(Exec("detect --key bad.json --input t.txt").code, 2);
  EXPECT_EQ(Exec("detect --key p.json --input missing.txt").code, 2);
}

TEST_F(Cli, ShortOutputWarns) {
  Keygen();
  const auto w = Exec("watermark --key s.json --model " + Src("configs/uniform-mock.json") +
                     " --prompt x --n 100");
  EXPECT_EQ(w.code, 0);
  EXPECT_NE(Slurp("stderr.txt").find("warning"), std::string::npos);
  const std::string text = json::parse(w.out)["text"];
  EXPECT_EQ(text.size(), 100u);
  Spit("t.txt", text);
  EXPECT_EQ(Exec("detect --key p.json --input t.txt --scan").code, 1);
}

TEST_F(Cli, EmbedFailureExitCode) {
  Keygen();
  json cfg = {{"format_version", 1}, {"kind", "scripted-mock"}, {"segments", json::array()}};
  cfg["segments"].push_back({{"free", 16}});
  for (int i = 0; i < 3; ++i) {
    cfg["segments"].push_back({{"forced", std::string(16, static_cast<char>('p' + i))}});
    cfg["segments"].push_back({{"free", 800}});
  }
  Spit("m.json", cfg.dump());
  EXPECT_EQ(Exec("watermark --key s.json --model m.json --prompt x").code, 3);
  EXPECT_NE(Slurp("stderr.txt").find("block"), std::string::npos);
  // The bundled script has two forced blocks, within budget.
  EXPECT_EQ(Exec("watermark --key s.json --model " + Src("configs/scripted-mock.json") +
                " --prompt x --out w.json").code, 0);
  EXPECT_EQ(Exec("detect --key p.json --input w.json").code, 0);
}

TEST_F(Cli, TransportExitCode) {
  Keygen();
  const std::string remote = Src("configs/remote-example.json");
  EXPECT_EQ(Exec("watermark --key s.json --model " + remote + " --prompt x --timeout-ms 200 --retries 0",
                "PDWS_MODEL_ENDPOINT=http://127.0.0.1:1/next").code, 4);
  EXPECT_NE(Slurp("stderr.txt").find("127.0.0.1:1"), std::string::npos);
}

TEST_F(Cli, ProfileRoundTrips) {
  for (const std::string name : {"default", "beta1", "ell32", "gamma0", "ed25519"}) {
    SCOPED_TRACE(name);
    const std::string scheme = name == "ed25519" ? " --scheme ed25519" : "";
    ASSERT_EQ(Exec("keygen --secret-out s.json --public-out p.json --seed 3 --params " +
                  Src("profiles/" + name + ".json") + scheme).code, 0)
        << Slurp("stderr.txt");
    ASSERT_EQ(Exec("watermark --key s.json --model " + Src("configs/uniform-mock.json") +
                  " --prompt x --out w.json").code, 0)
        << Slurp("stderr.txt");
    const auto d = Exec("detect --key p.json --input w.json");
    EXPECT_EQ(d.code, 0);
    EXPECT_EQ(json::parse(d.out)["offset"], 0);
  }
}

TEST_F(Cli, TiledPairs) {
  Keygen();
  ASSERT_EQ(Exec("watermark --key s.json --model " + Src("configs/uniform-mock.json") +
                " --prompt x --pairs 2 --threads 2 --out w.json").code, 0)
      << Slurp("stderr.txt");
  const auto d = Exec("detect --key p.json --input w.json --all");
  EXPECT_EQ(d.code, 0);
  EXPECT_EQ(json::parse(d.out)["detections"].size(), 2u);
}

TEST_F(Cli, BenchOutputs) {
  Keygen();
  Spit("prompts.txt", "# comment\none\ntwo\n");
  const auto b = Exec("bench --key s.json --model " + Src("configs/uniform-mock.json") +
                     " --prompts prompts.txt --repeats 2 --warmup 0 --out r.json --csv runs.csv"
                     " --plot-data plot.csv");
  ASSERT_EQ(b.code, 0) << Slurp("stderr.txt");
  const auto report = json::parse(Slurp("r.json"));
  EXPECT_EQ(report["runs"], 4);
  EXPECT_EQ(report["failures"], 0);
  const std::string runs = Slurp("runs.csv");
  EXPECT_EQ(std::count(runs.begin(), runs.end(), '\n'), 5);
  const std::string plot = Slurp("plot.csv");
  EXPECT_EQ(plot.rfind("config,prompt,runs,failures,gen_mean", 0), 0u);
  EXPECT_EQ(std::count(plot.begin(), plot.end(), '\n'), 3);

  EXPECT_EQ(Exec("bench --key s.json --model " + Src("configs/uniform-mock.json") +
                " --prompts missing.txt").code, 2);
}

TEST_F(Cli, BenchCensorsFailures) {
  Keygen("--params " + Src("profiles/gamma0.json"));
  Spit("prompts.txt", "one\n");
  const std::string model = Src("configs/scripted-mock.json");
  EXPECT_EQ(Exec("bench --key s.json --model " + model + " --prompts prompts.txt --repeats 1 --warmup 0").code, 3);
  const auto b = Exec("bench --key s.json --model " + model +
                     " --prompts prompts.txt --repeats 2 --warmup 0 --censor-failures --out -");
  ASSERT_EQ(b.code, 0) << Slurp("stderr.txt");
  EXPECT_EQ(json::parse(b.out)["failures"], 2);
}

}  // namespace

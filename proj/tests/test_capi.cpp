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

#include <fstream>
#include <sstream>
#include <string>
#include <thread>

#include <gtest/gtest.h>
#include <json.hpp>

#include "pdws/pdws.h"

namespace {

using nlohmann::json;

std::string Slurp(const std::string& rel) {
  std::ifstream in(std::string(PDWS_SOURCE_DIR) + "/" + rel);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string Take(char* s) {
  std::string out = s ? s : "";
  pdws_string_free(s);
  return out;
}

struct Fixture : ::testing::Test {
  void SetUp() override {
    ASSERT_EQ(pdws_params_default(&params), PDWS_OK);
    const std::uint8_t seed[32] = {1, 2, 3};
    ASSERT_EQ(pdws_keygen(params, nullptr, seed, &keys), PDWS_OK);
    ASSERT_EQ(pdws_model_from_json(Slurp("configs/uniform-mock.json").c_str(), nullptr, &model), PDWS_OK);
  }
  void TearDown() override {
    pdws_params_free(params);
    pdws_keys_free(keys);
    pdws_model_free(model);
  }
  pdws_params* params = nullptr;
  pdws_keys* keys = nullptr;
  pdws_model* model = nullptr;
};

TEST(CApi, VersionAndFree) {
  EXPECT_STREQ(pdws_version(), "1.0.0");
  pdws_string_free(nullptr);
  pdws_params_free(nullptr);
  pdws_keys_free(nullptr);
  pdws_model_free(nullptr);
}

TEST(CApi, ParamsJson) {
  pdws_params* p = nullptr;
  ASSERT_EQ(pdws_params_from_json(Slurp("profiles/beta1.json").c_str(), &p), PDWS_OK);
  char* out = nullptr;
  ASSERT_EQ(pdws_params_to_json(p, &out), PDWS_OK);
  const auto j = json::parse(Take(out));
  EXPECT_EQ(j["beta"], 1);
  EXPECT_EQ(pdws_params_gadget_chars(p), 16u * 361u);
  EXPECT_EQ(pdws_params_set_n(p, 0), PDWS_ERR_PARAMETER);
  EXPECT_EQ(pdws_params_set_n(p, 99), PDWS_OK);
  EXPECT_EQ(pdws_params_n(p), 99u);
  pdws_params_free(p);

  pdws_params* bad = nullptr;
  EXPECT_EQ(pdws_params_from_json("{\"format_version\":1}", &bad), PDWS_ERR_FORMAT);
  EXPECT_EQ(bad, nullptr);
  EXPECT_NE(std::string(pdws_last_error()), "");
  EXPECT_EQ(pdws_params_from_json(nullptr, &bad), PDWS_ERR_PARAMETER);
}

TEST(CApi, LastErrorIsPerThread) {
  pdws_params* bad = nullptr;
  EXPECT_EQ(pdws_params_from_json("nope", &bad), PDWS_ERR_FORMAT);
  std::string other;
  std::thread([&] { other = pdws_last_error(); }).join();
  EXPECT_EQ(other, "");
  EXPECT_NE(std::string(pdws_last_error()), "");
}

TEST_F(Fixture, KeysJson) {
  char* s = nullptr;
  ASSERT_EQ(pdws_keys_secret_json(keys, &s), PDWS_OK);
  const std::string secret = Take(s);
  ASSERT_EQ(pdws_keys_public_json(keys, &s), PDWS_OK);
  const std::string pub = Take(s);
  const std::string sk = json::parse(secret)["secret_key"];
  EXPECT_EQ(pub.find(sk), std::string::npos);

  pdws_keys* pk = nullptr;
  ASSERT_EQ(pdws_keys_from_json(pub.c_str(), &pk), PDWS_OK);
  EXPECT_EQ(pdws_keys_has_secret(pk), 0);
  pdws_params* p = nullptr;
  EXPECT_EQ(pdws_keys_params(pk, &p), PDWS_ERR_KEY);
  EXPECT_EQ(pdws_keys_secret_json(pk, &s), PDWS_ERR_KEY);
  pdws_keys_free(pk);

  pdws_keys* sk2 = nullptr;
  ASSERT_EQ(pdws_keys_from_json(secret.c_str(), &sk2), PDWS_OK);
  EXPECT_EQ(pdws_keys_has_secret(sk2), 1);
  ASSERT_EQ(pdws_keys_secret_json(sk2, &s), PDWS_OK);
  EXPECT_EQ(Take(s), secret);
  pdws_keys_free(sk2);

  EXPECT_EQ(pdws_keys_from_json("{", &pk), PDWS_ERR_FORMAT);
}

TEST_F(Fixture, WatermarkDetect) {
  char* out = nullptr;
  ASSERT_EQ(pdws_watermark(keys, nullptr, model, "prompt", 3, 2, &out), PDWS_OK) << pdws_last_error();
  const std::string doc = Take(out);
  const auto j = json::parse(doc);
  EXPECT_EQ(j["text"].get<std::string>().size(), 2896u);
  EXPECT_EQ(j["transcript"]["gadgets"].size(), 1u);

  char* text = nullptr;
  ASSERT_EQ(pdws_text_from_watermark_json(doc.c_str(), &text), PDWS_OK);
  const std::string t = Take(text);
  EXPECT_EQ(pdws_text_from_watermark_json("plain", &text), PDWS_ERR_FORMAT);

  char* pubjson = nullptr;
  ASSERT_EQ(pdws_keys_public_json(keys, &pubjson), PDWS_OK);
  pdws_keys* pk = nullptr;
  ASSERT_EQ(pdws_keys_from_json(Take(pubjson).c_str(), &pk), PDWS_OK);

  int detected = -1;
  ASSERT_EQ(pdws_detect(pk, t.c_str(), PDWS_DETECT_OFFSET, 0, 1, &detected, &out), PDWS_OK);
  EXPECT_EQ(detected, 1);
  EXPECT_EQ(json::parse(Take(out))["offset"], 0);

  const std::string shifted = "xyz" + t;
  ASSERT_EQ(pdws_detect(pk, shifted.c_str(), PDWS_DETECT_OFFSET, 0, 1, &detected, nullptr), PDWS_OK);
  EXPECT_EQ(detected, 0);
  ASSERT_EQ(pdws_detect(pk, shifted.c_str(), PDWS_DETECT_OFFSET, 3, 1, &detected, nullptr), PDWS_OK);
  EXPECT_EQ(detected, 1);
  ASSERT_EQ(pdws_detect(pk, shifted.c_str(), PDWS_DETECT_SCAN, 0, 2, &detected, &out), PDWS_OK);
  EXPECT_EQ(detected, 1);
  EXPECT_EQ(json::parse(Take(out))["offset"], 3);
  ASSERT_EQ(pdws_detect(pk, shifted.c_str(), PDWS_DETECT_ALL, 0, 2, &detected, &out), PDWS_OK);
  EXPECT_EQ(json::parse(Take(out))["detections"].size(), 1u);

  EXPECT_EQ(pdws_detect(pk, "\xff", PDWS_DETECT_SCAN, 0, 1, &detected, nullptr), PDWS_ERR_FORMAT);
  EXPECT_EQ(pdws_detect(pk, "", 9, 0, 1, &detected, nullptr), PDWS_ERR_PARAMETER);
  EXPECT_EQ(pdws_watermark(pk, nullptr, model, "", 1, 1, &out), PDWS_ERR_KEY);
  pdws_keys_free(pk);
}

TEST_F(Fixture, ParamsOverride) {
  pdws_params* p = nullptr;
  ASSERT_EQ(pdws_keys_params(keys, &p), PDWS_OK);
  ASSERT_EQ(pdws_params_set_n(p, 2 * 2896), PDWS_OK);
  char* out = nullptr;
  ASSERT_EQ(pdws_watermark(keys, p, model, "", 1, 1, &out), PDWS_OK);
  EXPECT_EQ(json::parse(Take(out))["transcript"]["gadgets"].size(), 2u);
  pdws_params_free(p);

  pdws_params* other = nullptr;
  ASSERT_EQ(pdws_params_from_json(Slurp("profiles/ell32.json").c_str(), &other), PDWS_OK);
  EXPECT_EQ(pdws_watermark(keys, other, model, "", 1, 1, &out), PDWS_ERR_PARAMETER);
  pdws_params_free(other);
}

TEST_F(Fixture, Tile) {
  char* out = nullptr;
  ASSERT_EQ(pdws_tile(keys, nullptr, model, "", 2, 1, 1, &out), PDWS_OK);
  const auto j = json::parse(Take(out));
  EXPECT_EQ(j["text"].get<std::string>().size(), 5776u);
  int detected = 0;
  ASSERT_EQ(pdws_detect(keys, j["text"].get<std::string>().c_str(), PDWS_DETECT_ALL, 0, 1, &detected, &out), PDWS_OK);
  EXPECT_EQ(json::parse(Take(out))["detections"].size(), 2u);
}

TEST_F(Fixture, EmbedFailureStatus) {
  pdws_model* scripted = nullptr;
  json cfg = {{"format_version", 1}, {"kind", "scripted-mock"}, {"segments", json::array()}};
  cfg["segments"].push_back({{"free", 16}});
  for (int i = 0; i < 12; ++i) {
    cfg["segments"].push_back({{"forced", std::string(16, static_cast<char>('a' + i))}});
    cfg["segments"].push_back({{"free", 16}});
  }
  ASSERT_EQ(pdws_model_from_json(cfg.dump().c_str(), nullptr, &scripted), PDWS_OK);
  char* out = nullptr;
  EXPECT_EQ(pdws_watermark(keys, nullptr, scripted, "", 1, 1, &out), PDWS_ERR_EMBED_FAILURE);
  EXPECT_NE(std::string(pdws_last_error()).find("block"), std::string::npos);
  pdws_model_free(scripted);
}

TEST_F(Fixture, TransportStatusAndOverrides) {
  pdws_model* remote = nullptr;
  pdws_model_overrides ov{"http://127.0.0.1:1/next", -1, 100, 0};
  ASSERT_EQ(pdws_model_from_json(Slurp("configs/remote-example.json").c_str(), &ov, &remote), PDWS_OK);
  char* out = nullptr;
  EXPECT_EQ(pdws_watermark(keys, nullptr, remote, "", 1, 1, &out), PDWS_ERR_TRANSPORT);
  pdws_model_free(remote);
  pdws_model_overrides bad{"ftp://nowhere", -1, -1, -1};
  EXPECT_EQ(pdws_model_from_json(Slurp("configs/remote-example.json").c_str(), &bad, &remote), PDWS_ERR_PARAMETER);
}

TEST_F(Fixture, Bench) {
  const char* prompts[] = {"a", "b"};
  char *js = nullptr, *csv = nullptr, *plot = nullptr;
  ASSERT_EQ(pdws_bench(keys, nullptr, model, prompts, 2, 2, 1, 0, 0, &js, &csv, &plot), PDWS_OK);
  EXPECT_EQ(json::parse(Take(js))["runs"], 4);
  EXPECT_NE(Take(csv).find("clean_attempts"), std::string::npos);
  EXPECT_NE(Take(plot).find("gen_p97_5"), std::string::npos);
  EXPECT_EQ(pdws_bench(keys, nullptr, model, prompts, 2, 0, 1, 0, 0, nullptr, nullptr, nullptr),
            PDWS_ERR_PARAMETER);
}

TEST(CApi, ExpectedChars) {
  std::uint64_t v = 0;
  ASSERT_EQ(pdws_expected_chars(32, 2, 328, &v), PDWS_OK);
  EXPECT_EQ(v, 20992u);
  EXPECT_EQ(pdws_expected_chars(16, 4, 330, &v), PDWS_ERR_PARAMETER);
}

TEST(CApi, SeededKeygenReproducible) {
  pdws_params* p = nullptr;
  ASSERT_EQ(pdws_params_default(&p), PDWS_OK);
  const std::uint8_t seed[32] = {9};
  pdws_keys *a = nullptr, *b = nullptr;
  ASSERT_EQ(pdws_keygen(p, nullptr, seed, &a), PDWS_OK);
  ASSERT_EQ(pdws_keygen(p, nullptr, seed, &b), PDWS_OK);
  char *sa = nullptr, *sb = nullptr;
  pdws_keys_secret_json(a, &sa);
  pdws_keys_secret_json(b, &sb);
  EXPECT_EQ(Take(sa), Take(sb));
  pdws_keys* c = nullptr;
  EXPECT_EQ(pdws_keygen(p, "ed25519", seed, &c), PDWS_ERR_PARAMETER);  // 512-bit scheme, 328-bit profile
  pdws_keys_free(a);
  pdws_keys_free(b);
  pdws_params_free(p);
}

}  // namespace

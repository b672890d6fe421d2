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

// pdws command-line tool. Talks to the library only through the C API.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pdws/pdws.h"

namespace {

// Exit codes.
constexpr int kOk = 0;
constexpr int kNotDetected = 1;
constexpr int kInputError = 2;
constexpr int kEmbedFailure = 3;
constexpr int kTransport = 4;

struct ParamsDel { void operator()(pdws_params* p) const { pdws_params_free(p); } };
struct KeysDel { void operator()(pdws_keys* p) const { pdws_keys_free(p); } };
struct ModelDel { void operator()(pdws_model* p) const { pdws_model_free(p); } };
struct StrDel { void operator()(char* p) const { pdws_string_free(p); } };
using ParamsPtr = std::unique_ptr<pdws_params, ParamsDel>;
using KeysPtr = std::unique_ptr<pdws_keys, KeysDel>;
using ModelPtr = std::unique_ptr<pdws_model, ModelDel>;
using StrPtr = std::unique_ptr<char, StrDel>;

// Carries a status out of nested helpers.
struct Failure {
  pdws_status status;
  std::string message;
};

void Check(pdws_status s, const std::string& what) {
  if (s != PDWS_OK) throw Failure{s, what + ": " + pdws_last_error()};
}

std::optional<std::string> ReadFile(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), {});
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string MustRead(const std::string& path) {
  auto s = ReadFile(path);
  if (!s) throw Failure{PDWS_ERR_IO, "cannot read " + path};
  return *s;
}

bool WriteFile(const std::string& path, const std::string& data) {
  if (path == "-") {
    std::cout << data;
    return static_cast<bool>(std::cout);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return false;
  out << data;
  out.close();
  return static_cast<bool>(out);
}

void MustWrite(const std::string& path, const std::string& data) {
  if (!WriteFile(path, data)) throw Failure{PDWS_ERR_IO, "cannot write " + path};
}

std::string Take(char* s) {
  StrPtr hold(s);
  return s ? std::string(s) : std::string();
}

KeysPtr LoadKeys(const std::string& path) {
  pdws_keys* k = nullptr;
  Check(pdws_keys_from_json(MustRead(path).c_str(), &k), "key envelope " + path);
  return KeysPtr(k);
}

ParamsPtr LoadParams(const std::string& path) {
  pdws_params* p = nullptr;
  Check(pdws_params_from_json(MustRead(path).c_str(), &p), "params " + path);
  return ParamsPtr(p);
}

struct ModelFlags {
  std::string config;
  int top_k = -1;
  int timeout_ms = -1;
  int retries = -1;
};

ModelPtr LoadModel(const ModelFlags& f) {
  const char* env = std::getenv("PDWS_MODEL_ENDPOINT");
  pdws_model_overrides ov{env, f.top_k, f.timeout_ms, f.retries};
  pdws_model* m = nullptr;
  Check(pdws_model_from_json(MustRead(f.config).c_str(), &ov, &m), "model config " + f.config);
  return ModelPtr(m);
}

void AddModelFlags(CLI::App* cmd, ModelFlags& f) {
  cmd->add_option("--model", f.config, "Model configuration JSON")->required();
  cmd->add_option("--top-k", f.top_k, "Remote model: candidates requested per step");
  cmd->add_option("--timeout-ms", f.timeout_ms, "Remote model: per-request timeout");
  cmd->add_option("--retries", f.retries, "Remote model: retries after a failed request");
}

// Secret-envelope parameters, optionally replaced by a --params file.
ParamsPtr EffectiveParams(const pdws_keys* keys, const std::string& params_path) {
  if (!params_path.empty()) return LoadParams(params_path);
  pdws_params* p = nullptr;
  Check(pdws_keys_params(keys, &p), "key envelope");
  return ParamsPtr(p);
}

int ExitFor(pdws_status s) {
  switch (s) {
    case PDWS_ERR_EMBED_FAILURE: return kEmbedFailure;
    case PDWS_ERR_TRANSPORT:
    case PDWS_ERR_PROTOCOL: return kTransport;
    default: return kInputError;
  }
}

int Keygen(const std::string& secret_out, const std::string& public_out, const std::string& params_path,
           std::optional<std::uint64_t> seed, const std::string& seed_hex, const std::string& scheme) {
  ParamsPtr params;
  if (params_path.empty()) {
    pdws_params* p = nullptr;
    Check(pdws_params_default(&p), "params");
    params.reset(p);
  } else {
    params = LoadParams(params_path);
  }
  std::optional<std::vector<std::uint8_t>> seed32;
  if (!seed_hex.empty()) {
    if (seed_hex.size() != 64) throw Failure{PDWS_ERR_PARAMETER, "--seed-hex needs 64 hex digits"};
    std::vector<std::uint8_t> b(32);
    for (std::size_t i = 0; i < 32; ++i) {
      try {
        b[i] = static_cast<std::uint8_t>(std::stoul(seed_hex.substr(2 * i, 2), nullptr, 16));
      } catch (const std::exception&) {
        throw Failure{PDWS_ERR_PARAMETER, "--seed-hex is not hex"};
      }
    }
    seed32 = b;
  } else if (seed) {
    std::vector<std::uint8_t> b(32, 0);
    for (int i = 0; i < 8; ++i) b[i] = static_cast<std::uint8_t>(*seed >> (56 - 8 * i));
    seed32 = b;
  }
  pdws_keys* k = nullptr;
  Check(pdws_keygen(params.get(), scheme.empty() ? nullptr : scheme.c_str(), seed32 ? seed32->data() : nullptr, &k),
        "keygen");
  KeysPtr keys(k);
  char* s = nullptr;
  Check(pdws_keys_secret_json(keys.get(), &s), "keygen");
  const std::string secret = Take(s);
  Check(pdws_keys_public_json(keys.get(), &s), "keygen");
  const std::string pub = Take(s);
  MustWrite(secret_out, secret + "\n");
  MustWrite(public_out, pub + "\n");
  return kOk;
}

struct WatermarkFlags {
  std::string key;
  ModelFlags model;
  std::string prompt;
  std::string prompt_file;
  std::optional<std::uint64_t> n;
  std::string out = "-";
  std::string params;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::size_t pairs = 0;
};

int WatermarkCmd(const WatermarkFlags& f) {
  auto keys = LoadKeys(f.key);
  if (!pdws_keys_has_secret(keys.get())) throw Failure{PDWS_ERR_KEY, f.key + " is not a secret envelope"};
  auto params = EffectiveParams(keys.get(), f.params);
  if (f.n) Check(pdws_params_set_n(params.get(), *f.n), "--n");
  auto model = LoadModel(f.model);
  const std::string prompt = f.prompt_file.empty() ? f.prompt : MustRead(f.prompt_file);

  char* out = nullptr;
  if (f.pairs > 0) {
    Check(pdws_tile(keys.get(), params.get(), model.get(), prompt.c_str(), f.pairs, f.seed, f.threads, &out),
          "watermark");
  } else {
    const auto g = pdws_params_gadget_chars(params.get());
    if (pdws_params_n(params.get()) < g) {
      std::cerr << "warning: n = " << pdws_params_n(params.get()) << " is below one gadget (" << g
                << " chars); output is unwatermarked\n";
    }
    Check(pdws_watermark(keys.get(), params.get(), model.get(), prompt.c_str(), f.seed, f.threads, &out),
          "watermark");
  }
  MustWrite(f.out, Take(out) + "\n");
  return kOk;
}

struct DetectFlags {
  std::string key;
  std::string input;
  std::string text;
  bool scan = false;
  bool all = false;
  std::optional<std::size_t> known_offset;
  unsigned threads = 1;
};

int DetectCmd(const DetectFlags& f) {
  auto keys = LoadKeys(f.key);
  std::string text = f.text;
  if (!f.input.empty()) {
    text = MustRead(f.input);
    // Accept the JSON written by `watermark` as well as raw text.
    char* t = nullptr;
    if (pdws_text_from_watermark_json(text.c_str(), &t) == PDWS_OK) text = Take(t);
  }
  pdws_detect_mode mode = PDWS_DETECT_OFFSET;
  if (f.all) mode = PDWS_DETECT_ALL;
  else if (f.scan) mode = PDWS_DETECT_SCAN;
  int detected = 0;
  char* out = nullptr;
  Check(pdws_detect(keys.get(), text.c_str(), mode, f.known_offset.value_or(0), f.threads, &detected, &out),
        "detect");
  std::cout << Take(out) << "\n";
  return detected ? kOk : kNotDetected;
}

struct BenchFlags {
  std::string key;
  ModelFlags model;
  std::string prompts;
  std::string params;
  std::optional<std::uint64_t> n;
  std::size_t repeats = 5;
  std::uint64_t seed = 0;
  std::size_t warmup = 1;
  bool censor = false;
  std::string out = "-";
  std::string csv;
  std::string plot_data;
};

int BenchCmd(const BenchFlags& f) {
  auto keys = LoadKeys(f.key);
  if (!pdws_keys_has_secret(keys.get())) throw Failure{PDWS_ERR_KEY, f.key + " is not a secret envelope"};
  auto params = EffectiveParams(keys.get(), f.params);
  if (f.n) Check(pdws_params_set_n(params.get(), *f.n), "--n");
  auto model = LoadModel(f.model);

  std::vector<std::string> lines;
  std::istringstream in(MustRead(f.prompts));
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line[0] != '#') lines.push_back(line);  // '#' lines are comments
  }
  if (lines.empty()) throw Failure{PDWS_ERR_PARAMETER, "no prompts in " + f.prompts};
  std::vector<const char*> ptrs;
  for (const auto& l : lines) ptrs.push_back(l.c_str());

  char *json = nullptr, *csv = nullptr, *plot = nullptr;
  Check(pdws_bench(keys.get(), params.get(), model.get(), ptrs.data(), ptrs.size(), f.repeats, f.seed, f.warmup,
                   f.censor, &json, &csv, &plot),
        "bench");
  const std::string j = Take(json), c = Take(csv), p = Take(plot);
  MustWrite(f.out, j + "\n");
  if (!f.csv.empty()) MustWrite(f.csv, c);
  if (!f.plot_data.empty()) MustWrite(f.plot_data, p);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Publicly detectable watermarking for generated text"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pdws_version()));

  std::string secret_out, public_out, kg_params, seed_hex, scheme;
  std::optional<std::uint64_t> kg_seed;
  auto* kg = app.add_subcommand("keygen", "Create a secret and a public key envelope");
  kg->add_option("--secret-out", secret_out, "Secret envelope path")->required();
  kg->add_option("--public-out", public_out, "Public envelope path")->required();
  kg->add_option("--params", kg_params, "Parameter profile JSON");
  kg->add_option("--seed", kg_seed, "Deterministic key seed");
  kg->add_option("--seed-hex", seed_hex, "Deterministic 32-byte key seed, hex")->excludes("--seed");
  kg->add_option("--scheme", scheme, "Signature scheme id");

  WatermarkFlags wf;
  auto* wm = app.add_subcommand("watermark", "Generate watermarked text");
  wm->add_option("--key", wf.key, "Secret envelope")->required();
  AddModelFlags(wm, wf.model);
  auto* prompt_opt = wm->add_option("--prompt", wf.prompt, "Prompt text");
  wm->add_option("--prompt-file", wf.prompt_file, "Prompt file ('-' for stdin)")->excludes(prompt_opt);
  wm->add_option("--n", wf.n, "Output length in characters");
  wm->add_option("--out", wf.out, "Output JSON path ('-' for stdout)");
  wm->add_option("--params", wf.params, "Parameter profile overriding the envelope's non-public fields");
  wm->add_option("--seed", wf.seed, "Sampler seed");
  wm->add_option("--threads", wf.threads, "Parallel rejection-sampling attempts")->check(CLI::Range(1u, 256u));
  wm->add_option("--pairs", wf.pairs, "Emit this many tiled gadgets instead of n characters");

  DetectFlags df;
  auto* dt = app.add_subcommand("detect", "Check text for a watermark using the public envelope");
  dt->add_option("--key", df.key, "Public (or secret) envelope")->required();
  auto* in_opt = dt->add_option("--input", df.input, "Text or watermark JSON file ('-' for stdin)");
  dt->add_option("--text", df.text, "Text to check")->excludes(in_opt);
  auto* scan_opt = dt->add_flag("--scan", df.scan, "Try every offset");
  auto* all_opt = dt->add_flag("--all", df.all, "Report every gadget found");
  dt->add_option("--known-offset", df.known_offset, "Check only this offset (default 0)")
      ->excludes(scan_opt)
      ->excludes(all_opt);
  dt->add_option("--threads", df.threads, "Scan threads")->check(CLI::Range(1u, 256u));

  BenchFlags bf;
  auto* bn = app.add_subcommand("bench", "Measure generation and detection cost");
  bn->add_option("--key", bf.key, "Secret envelope")->required();
  AddModelFlags(bn, bf.model);
  bn->add_option("--prompts", bf.prompts, "Prompt file, one per line ('#' starts a comment line)")->required();
  bn->add_option("--params", bf.params, "Parameter profile overriding the envelope's non-public fields");
  bn->add_option("--n", bf.n, "Output length in characters");
  bn->add_option("--repeats", bf.repeats, "Generations per prompt")->check(CLI::PositiveNumber);
  bn->add_option("--seed", bf.seed, "Base seed");
  bn->add_option("--warmup", bf.warmup, "Untimed warmup runs");
  bn->add_flag("--censor-failures", bf.censor, "Record embed failures instead of aborting");
  bn->add_option("--out", bf.out, "Report JSON path ('-' for stdout)");
  bn->add_option("--csv", bf.csv, "Per-run CSV path");
  bn->add_option("--plot-data", bf.plot_data, "Per-prompt aggregate CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kInputError;
  }

  try {
    if (kg->parsed()) return Keygen(secret_out, public_out, kg_params, kg_seed, seed_hex, scheme);
    if (wm->parsed()) return WatermarkCmd(wf);
    if (dt->parsed()) return DetectCmd(df);
    if (bn->parsed()) return BenchCmd(bf);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return ExitFor(f.status);
  }
  return kInputError;
}

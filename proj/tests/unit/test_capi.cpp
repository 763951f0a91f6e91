// Copyright 2026 The Surprisal Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Exercises the shared library through its C header only.

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "surprisal/surprisal.h"

namespace fs = std::filesystem;

namespace {

const fs::path kData = SURPRISAL_TEST_DATA;

struct Config {
  sp_config* c = nullptr;
  Config() { EXPECT_EQ(sp_config_new(&c), SP_OK); }
  ~Config() { sp_config_free(c); }
};

struct Model {
  sp_model* m = nullptr;
  ~Model() { sp_model_free(m); }
};

fs::path temp(const std::string& tag) {
  auto p = fs::temp_directory_path() / ("surprisal_capi_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

void collect(const char* line, void* user) { static_cast<std::vector<std::string>*>(user)->push_back(line); }

}  // namespace

TEST(CApi, VersionAndStatusNames) {
  EXPECT_STRNE(sp_version(), "");
  EXPECT_STREQ(sp_status_name(SP_OK), "ok");
  EXPECT_STREQ(sp_status_name(SP_ERR_CONFIG), "ConfigError");
  EXPECT_STREQ(sp_status_name(SP_ERR_RANK_DEFICIENT), "RankDeficient");
  EXPECT_STREQ(sp_status_name(static_cast<sp_status>(99)), "unknown");
  EXPECT_EQ(sp_exit_code(SP_OK), 0);
  EXPECT_EQ(sp_exit_code(SP_ERR_CONFIG), 2);
  EXPECT_EQ(sp_exit_code(SP_ERR_INVALID_ARGUMENT), 2);
  EXPECT_EQ(sp_exit_code(SP_ERR_IO), 1);
}

TEST(CApi, ConfigErrors) {
  Config cfg;
  EXPECT_EQ(sp_config_set(cfg.c, "colour", "blue"), SP_ERR_CONFIG);
  EXPECT_NE(std::string(sp_last_error()).find("colour"), std::string::npos);
  EXPECT_EQ(sp_config_set(cfg.c, "order", "11"), SP_OK);
  EXPECT_EQ(sp_config_validate(cfg.c), SP_ERR_CONFIG);
  EXPECT_NE(std::string(sp_last_error()).find("1..10"), std::string::npos);
  EXPECT_EQ(sp_config_set(nullptr, "order", "3"), SP_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(sp_config_set(cfg.c, "order", nullptr), SP_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(sp_config_load(cfg.c, "/no/such/file.toml"), SP_ERR_CONFIG);
  EXPECT_EQ(sp_run_stage(cfg.c, "deploy", nullptr, nullptr, nullptr), SP_ERR_INVALID_ARGUMENT);
}

TEST(CApi, ResolvedText) {
  Config cfg;
  ASSERT_EQ(sp_config_set(cfg.c, "order", "5"), SP_OK);
  char* text = nullptr;
  ASSERT_EQ(sp_config_resolved(cfg.c, &text), SP_OK);
  EXPECT_NE(std::string(text).find("order = 5\n"), std::string::npos);
  sp_string_free(text);
}

TEST(CApi, RunAllWithLog) {
  const auto out = temp("run");
  Config cfg;
  ASSERT_EQ(sp_config_load(cfg.c, (kData / "pipeline" / "fixture.toml").c_str()), SP_OK) << sp_last_error();
  ASSERT_EQ(sp_config_set(cfg.c, "output_dir", out.c_str()), SP_OK);
  std::vector<std::string> lines;
  int skipped = -1;
  ASSERT_EQ(sp_run_stage(cfg.c, "run-all", collect, &lines, &skipped), SP_OK) << sp_last_error();
  EXPECT_EQ(skipped, 0);
  ASSERT_FALSE(lines.empty());
  EXPECT_EQ(lines.front().rfind("preprocess:", 0), 0u);
  ASSERT_EQ(sp_run_stage(cfg.c, "run-all", nullptr, nullptr, &skipped), SP_OK);
  EXPECT_EQ(skipped, 6);
  EXPECT_TRUE(fs::exists(out / "report.json"));
  fs::remove_all(out);
}

TEST(CApi, MissingArchive) {
  Config cfg;
  const auto out = temp("missing");
  ASSERT_EQ(sp_config_set(cfg.c, "archive", "/no/such/archive"), SP_OK);
  ASSERT_EQ(sp_config_set(cfg.c, "output_dir", out.c_str()), SP_OK);
  const auto st = sp_run_stage(cfg.c, "run-all", nullptr, nullptr, nullptr);
  EXPECT_EQ(st, SP_ERR_CONFIG);
  EXPECT_EQ(sp_exit_code(st), 2);
  fs::remove_all(out);
}

TEST(CApi, ModelTrainScoreSaveLoad) {
  Model model;
  ASSERT_EQ(sp_model_train((kData / "pipeline" / "expected_tokens.txt").c_str(), 3, &model.m), SP_OK)
      << sp_last_error();
  EXPECT_EQ(sp_model_order(model.m), 3);

  // orbit/sprockets#24 from the fixture dump, scored against the oracle value
  std::ifstream dump(kData / "pipeline" / "expected_tokens.txt");
  std::string line, text;
  while (std::getline(dump, line)) {
    if (line.rfind("orbit/sprockets#24\t", 0) == 0) text = line.substr(line.rfind('\t') + 1);
  }
  ASSERT_FALSE(text.empty());
  std::vector<std::string> toks;
  std::istringstream ts(text);
  for (std::string t; ts >> t;) toks.push_back(t);
  std::vector<const char*> ptrs;
  for (const auto& t : toks) ptrs.push_back(t.c_str());
  double bits = 0;
  ASSERT_EQ(sp_model_score(model.m, ptrs.data(), ptrs.size(), SP_MODE_CONDITIONAL_NGRAM, &bits), SP_OK);
  EXPECT_NEAR(bits, 1.0257159837352818, 1e-9);

  double p = 0;
  const char* ctx[] = {ptrs[0]};
  ASSERT_EQ(sp_model_prob(model.m, ptrs[1], ctx, 1, &p), SP_OK);
  EXPECT_GT(p, 0.0);
  EXPECT_LT(p, 1.0);
  EXPECT_EQ(sp_model_prob(model.m, "zzzunseen", nullptr, 0, &p), SP_ERR_UNKNOWN_TOKEN);
  EXPECT_EQ(sp_model_score(model.m, nullptr, 0, SP_MODE_CONDITIONAL_NGRAM, &bits), SP_ERR_EMPTY_DOCUMENT);

  const auto file = temp("model");
  ASSERT_EQ(sp_model_save(model.m, file.c_str()), SP_OK);
  Model back;
  ASSERT_EQ(sp_model_load(file.c_str(), &back.m), SP_OK);
  double p2 = 0;
  ASSERT_EQ(sp_model_prob(back.m, ptrs[1], ctx, 1, &p2), SP_OK);
  EXPECT_EQ(p, p2);
  fs::remove(file);

  Model bad;
  EXPECT_EQ(sp_model_train((kData / "pipeline" / "expected_tokens.txt").c_str(), 11, &bad.m),
            SP_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(bad.m, nullptr);
}

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

#include <cstring>
#include <fstream>
#include <new>
#include <ostream>
#include <streambuf>
#include <string>
#include <vector>

#include "surprisal/error.hpp"
#include "surprisal/lm.hpp"
#include "surprisal/pipeline.hpp"
#include "surprisal/surprisal.h"
#include "surprisal/textprep.hpp"

struct sp_config {
  surprisal::pipeline::PipelineConfig cfg;
};

struct sp_model {
  surprisal::lm::KneserNeyModel model;
};

namespace {

thread_local std::string g_last_error;

sp_status status_of(surprisal::ErrorCode code) {
  return static_cast<sp_status>(static_cast<int>(code) + 1);
}

template <typename Fn>
sp_status guard(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return SP_OK;
  } catch (const surprisal::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return SP_ERR_INTERNAL;
}

sp_status null_arg(const char* what) {
  g_last_error = std::string(what) + " is NULL";
  return SP_ERR_INVALID_ARGUMENT;
}

// Hands complete lines to the callback.
class LineBuf : public std::streambuf {
 public:
  LineBuf(sp_log_fn fn, void* user) : fn_(fn), user_(user) {}
  ~LineBuf() override {
    if (!line_.empty()) fn_(line_.c_str(), user_);
  }

 protected:
  int_type overflow(int_type ch) override {
    if (ch == traits_type::eof()) return traits_type::not_eof(ch);
    if (ch == '\n') {
      fn_(line_.c_str(), user_);
      line_.clear();
    } else {
      line_ += static_cast<char>(ch);
    }
    return ch;
  }

 private:
  sp_log_fn fn_;
  void* user_;
  std::string line_;
};

std::vector<std::string> to_strings(const char* const* items, size_t n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    if (!items[i]) surprisal::fail(surprisal::ErrorCode::invalid_argument, "token " + std::to_string(i) + " is NULL");
    out.emplace_back(items[i]);
  }
  return out;
}

}  // namespace

extern "C" {

const char* sp_version(void) { return surprisal::pipeline::kToolVersion.data(); }

const char* sp_last_error(void) { return g_last_error.c_str(); }

const char* sp_status_name(sp_status status) {
  if (status == SP_OK) return "ok";
  if (status < SP_ERR_INVALID_ARGUMENT || status > SP_ERR_INTERNAL) return "unknown";
  return surprisal::to_string(static_cast<surprisal::ErrorCode>(status - 1)).data();
}

int sp_exit_code(sp_status status) {
  if (status == SP_OK) return 0;
  if (status == SP_ERR_CONFIG || status == SP_ERR_INVALID_ARGUMENT) return 2;
  return 1;
}

sp_status sp_config_new(sp_config** out) {
  if (!out) return null_arg("out");
  return guard([&] { *out = new sp_config(); });
}

void sp_config_free(sp_config* config) { delete config; }

sp_status sp_config_set(sp_config* config, const char* key, const char* value) {
  if (!config) return null_arg("config");
  if (!key || !value) return null_arg("key/value");
  return guard([&] { config->cfg.set(key, value); });
}

sp_status sp_config_load(sp_config* config, const char* path) {
  if (!config) return null_arg("config");
  if (!path) return null_arg("path");
  return guard([&] { surprisal::pipeline::load_config_file(config->cfg, path); });
}

sp_status sp_config_validate(const sp_config* config) {
  if (!config) return null_arg("config");
  return guard([&] { config->cfg.validate(); });
}

sp_status sp_config_resolved(const sp_config* config, char** out) {
  if (!config) return null_arg("config");
  if (!out) return null_arg("out");
  return guard([&] {
    const auto text = config->cfg.resolved();
    char* buf = new char[text.size() + 1];
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out = buf;
  });
}

void sp_string_free(char* text) { delete[] text; }

sp_status sp_run_stage(const sp_config* config, const char* stage, sp_log_fn log, void* user, int* skipped) {
  if (!config) return null_arg("config");
  if (!stage) return null_arg("stage");
  return guard([&] {
    const auto s = surprisal::pipeline::parse_stage(stage);
    if (!s) surprisal::fail(surprisal::ErrorCode::invalid_argument, "unknown stage '" + std::string(stage) + "'");
    std::vector<surprisal::pipeline::StageResult> results;
    if (log) {
      LineBuf buf(log, user);
      std::ostream os(&buf);
      results = surprisal::pipeline::run_stage(*s, config->cfg, &os);
    } else {
      results = surprisal::pipeline::run_stage(*s, config->cfg, nullptr);
    }
    if (skipped) {
      int n = 0;
      for (const auto& r : results) n += r.skipped ? 1 : 0;
      *skipped = n;
    }
  });
}

sp_status sp_model_train(const char* token_dump_path, int order, sp_model** out) {
  if (!token_dump_path) return null_arg("token_dump_path");
  if (!out) return null_arg("out");
  return guard([&] {
    const auto corpus = surprisal::textprep::load_token_dump(token_dump_path);
    *out = new sp_model{surprisal::lm::KneserNeyModel::train(corpus, order)};
  });
}

sp_status sp_model_load(const char* path, sp_model** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  return guard([&] { *out = new sp_model{surprisal::lm::KneserNeyModel::load(path)}; });
}

sp_status sp_model_save(const sp_model* model, const char* path) {
  if (!model) return null_arg("model");
  if (!path) return null_arg("path");
  return guard([&] { model->model.save(path); });
}

void sp_model_free(sp_model* model) { delete model; }

int sp_model_order(const sp_model* model) { return model ? model->model.order() : 0; }

sp_status sp_model_prob(const sp_model* model, const char* word, const char* const* context, size_t context_len,
                        double* out) {
  if (!model) return null_arg("model");
  if (!word || !out) return null_arg("word/out");
  if (context_len > 0 && !context) return null_arg("context");
  return guard([&] {
    const auto ctx = to_strings(context, context_len);
    *out = model->model.prob(word, ctx);
  });
}

sp_status sp_model_score(const sp_model* model, const char* const* tokens, size_t n, sp_score_mode mode,
                         double* out) {
  if (!model) return null_arg("model");
  if (!out) return null_arg("out");
  if (n > 0 && !tokens) return null_arg("tokens");
  return guard([&] {
    surprisal::TokenSequence seq;
    seq.tokens = to_strings(tokens, n);
    const auto m = mode == SP_MODE_LITERAL_UNIGRAM ? surprisal::lm::ScoreMode::literal_unigram
                                                   : surprisal::lm::ScoreMode::conditional_ngram;
    *out = model->model.score(seq, m).cross_entropy_bits_per_token;
  });
}

}  // extern "C"

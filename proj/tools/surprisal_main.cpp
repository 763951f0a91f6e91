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

// surprisal: command-line driver. Talks to the library only through the C API.

#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "surprisal/surprisal.h"

namespace {

struct ConfigDeleter {
  void operator()(sp_config* c) const { sp_config_free(c); }
};
using ConfigPtr = std::unique_ptr<sp_config, ConfigDeleter>;

void log_line(const char* line, void* quiet) {
  if (!*static_cast<bool*>(quiet)) std::fprintf(stderr, "%s\n", line);
}

int report(sp_status status) {
  // the message already starts with the error kind
  std::fprintf(stderr, "surprisal: %s\n", sp_last_error());
  return sp_exit_code(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Surprisal of issue descriptions: corpus, language model, metrics and hypothesis tests"};
  app.set_version_flag("--version", std::string(sp_version()));
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_file;
  std::map<std::string, std::string> flags;  // config key -> value
  std::vector<std::string> overrides;
  bool quiet = false;

  auto flag = [&](const std::string& name, const std::string& key, const std::string& help) {
    return app.add_option_function<std::string>(name, [&flags, key](const std::string& v) { flags[key] = v; },
                                                help);
  };
  app.add_option("--config", config_file, "Config file (key = value lines)")->check(CLI::ExistingFile);
  flag("--archive", "archive", "Archive directory");
  flag("-o,--output", "output_dir", "Output directory (default: out)");
  flag("--order", "order", "n-gram order, 1..10 (default: 3)");
  flag("--mode", "mode", "conditional_ngram or literal_unigram");
  flag("--alpha", "alpha", "Significance level (default: 0.05)");
  flag("--rate-limit", "rate_limit", "API calls per hour (default: 5000)");
  app.add_option("--set", overrides, "Extra setting, key=value (repeatable)");
  app.add_flag("-q,--quiet", quiet, "Only print errors");

  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"ingest", "Fetch repositories, issues and releases into the archive"},
      {"preprocess", "Turn issue text into the token dump"},
      {"train", "Train the Kneser-Ney model on the token dump"},
      {"score", "Surprisal (bits per token) of every issue"},
      {"metrics", "Difficulty and importance measures per issue"},
      {"analyze", "Hypothesis tests and report"},
      {"agreement", "Model vs human rating agreement grid"},
      {"run-all", "preprocess, train, score, metrics, analyze (and agreement when ratings are set)"},
  };
  for (const auto& s : subs) app.add_subcommand(s.name, s.help);

  // Stage-specific conveniences; they map onto config keys as well.
  auto* metrics = app.get_subcommand("metrics");
  metrics->add_option_function<std::string>(
      "--label-map", [&flags](const std::string& v) { flags["label_map"] = v; }, "Reviewed label map CSV");
  auto* agreement = app.get_subcommand("agreement");
  agreement->add_option_function<std::vector<std::string>>(
      "--ratings",
      [&flags](const std::vector<std::string>& v) {
        std::string joined;
        for (const auto& p : v) joined += (joined.empty() ? "" : ",") + p;
        flags["ratings"] = joined;
      },
      "Rating CSV files");
  agreement->add_option_function<std::string>(
      "--repository", [&flags](const std::string& v) { flags["agreement_repository"] = v; },
      "Repository whose issues were rated (owner/name)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  sp_config* raw = nullptr;
  if (sp_status st = sp_config_new(&raw); st != SP_OK) return report(st);
  ConfigPtr cfg(raw);
  if (!config_file.empty()) {
    if (sp_status st = sp_config_load(cfg.get(), config_file.c_str()); st != SP_OK) return report(st);
  }
  for (const auto& [key, value] : flags) {
    if (sp_status st = sp_config_set(cfg.get(), key.c_str(), value.c_str()); st != SP_OK) return report(st);
  }
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "surprisal: --set expects key=value, got '%s'\n", kv.c_str());
      return 2;
    }
    const auto key = kv.substr(0, eq), value = kv.substr(eq + 1);
    if (sp_status st = sp_config_set(cfg.get(), key.c_str(), value.c_str()); st != SP_OK) return report(st);
  }

  const std::string stage = app.get_subcommands().front()->get_name();
  int skipped = 0;
  if (sp_status st = sp_run_stage(cfg.get(), stage.c_str(), log_line, &quiet, &skipped); st != SP_OK) {
    return report(st);
  }
  return 0;
}

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

#ifndef SURPRISAL_TOKEN_SEQUENCE_HPP
#define SURPRISAL_TOKEN_SEQUENCE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "surprisal/records.hpp"

namespace surprisal {

/// Preprocessed text of one issue, w_1..w_T. Tokens are non-empty and free of
/// whitespace; special tokens look like "[BR]" or "[CODE]".
struct TokenSequence {
  std::vector<std::string> tokens;
  IssueKey source;
  IssueKind kind = IssueKind::issue;
  std::uint64_t config_fingerprint = 0;

  bool operator==(const TokenSequence&) const = default;
};

}  // namespace surprisal

#endif  // SURPRISAL_TOKEN_SEQUENCE_HPP

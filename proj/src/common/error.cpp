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

#include "surprisal/error.hpp"

namespace surprisal {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::config: return "ConfigError";
    case ErrorCode::io: return "IoError";
    case ErrorCode::schema: return "SchemaError";
    case ErrorCode::domain: return "DomainError";
    case ErrorCode::support: return "SupportError";
    case ErrorCode::empty_corpus: return "EmptyCorpus";
    case ErrorCode::empty_document: return "EmptyDocument";
    case ErrorCode::unknown_token: return "UnknownToken";
    case ErrorCode::sample_size: return "SampleSizeError";
    case ErrorCode::rank_deficient: return "RankDeficient";
    case ErrorCode::insufficient_ratings: return "InsufficientRatings";
    case ErrorCode::auth_failure: return "AuthFailure";
    case ErrorCode::rate_limited: return "RateLimited";
    case ErrorCode::network: return "NetworkError";
    case ErrorCode::partial_data: return "PartialData";
    case ErrorCode::internal: return "InternalError";
  }
  return "UnknownError";
}

void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(to_string(code)) + ": " + what);
}

}  // namespace surprisal

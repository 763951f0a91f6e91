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

#ifndef SURPRISAL_ERROR_HPP
#define SURPRISAL_ERROR_HPP

#include <chrono>
#include <stdexcept>
#include <string>
#include <string_view>

namespace surprisal {

enum class ErrorCode {
  invalid_argument,
  config,
  io,
  schema,
  domain,
  support,
  empty_corpus,
  empty_document,
  unknown_token,
  sample_size,
  rank_deficient,
  insufficient_ratings,
  auth_failure,
  rate_limited,
  network,
  partial_data,
  internal,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the core; the code is what callers branch on and
// what the C API maps to a status value.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class RateLimitedError : public Error {
 public:
  RateLimitedError(std::chrono::seconds retry_after, const std::string& what)
      : Error(ErrorCode::rate_limited, what), retry_after_(retry_after) {}

  std::chrono::seconds retry_after() const noexcept { return retry_after_; }

 private:
  std::chrono::seconds retry_after_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace surprisal

#endif  // SURPRISAL_ERROR_HPP

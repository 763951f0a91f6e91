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

#ifndef SURPRISAL_TIMESTAMP_HPP
#define SURPRISAL_TIMESTAMP_HPP

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace surprisal {

/// UTC instant with one-second resolution, serialized as ISO-8601
/// "YYYY-MM-DDTHH:MM:SSZ".
class Timestamp {
 public:
  using clock_point = std::chrono::sys_seconds;

  constexpr Timestamp() = default;
  constexpr explicit Timestamp(clock_point tp) : tp_(tp) {}

  static constexpr Timestamp from_unix(std::int64_t secs) {
    return Timestamp(clock_point(std::chrono::seconds(secs)));
  }
  static Timestamp now();

  // Accepts "YYYY-MM-DDTHH:MM:SS" followed by "Z", "+00:00" or nothing, and
  // an optional fractional second part, which is truncated.
  static std::optional<Timestamp> parse(std::string_view text);

  std::string iso8601() const;
  constexpr std::int64_t unix_seconds() const {
    return tp_.time_since_epoch().count();
  }
  constexpr clock_point time_point() const { return tp_; }

  friend constexpr auto operator<=>(const Timestamp&, const Timestamp&) = default;

 private:
  clock_point tp_{};
};

/// Signed difference b - a in seconds.
constexpr std::int64_t seconds_between(Timestamp a, Timestamp b) {
  return b.unix_seconds() - a.unix_seconds();
}

}  // namespace surprisal

#endif  // SURPRISAL_TIMESTAMP_HPP

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

// Kept in its own translation unit: httplib.h is large and only this file
// needs it.

#include <httplib.h>

#include <cctype>

#include "surprisal/error.hpp"
#include "surprisal/ingest.hpp"

namespace surprisal::ingest {

namespace {

class HttplibTransport final : public HttpTransport {
 public:
  explicit HttplibTransport(const std::string& base_url) : client_(base_url) {
    if (!client_.is_valid()) fail(ErrorCode::config, "unsupported API base URL: " + base_url);
    client_.set_connection_timeout(10);
    client_.set_read_timeout(60);
    client_.set_follow_location(true);
  }

  HttpResponse get(const std::string& target,
                   const std::map<std::string, std::string>& headers) override {
    httplib::Headers h(headers.begin(), headers.end());
    auto res = client_.Get(target, h);
    if (!res) fail(ErrorCode::network, "GET " + target + ": " + httplib::to_string(res.error()));
    HttpResponse out;
    out.status = res->status;
    out.body = std::move(res->body);
    for (const auto& [k, v] : res->headers) {
      std::string key = k;
      for (auto& c : key) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      out.headers[key] = v;
    }
    return out;
  }

 private:
  httplib::Client client_;
};

}  // namespace

std::unique_ptr<HttpTransport> make_http_transport(const std::string& base_url) {
  return std::make_unique<HttplibTransport>(base_url);
}

}  // namespace surprisal::ingest

// Copyright 2026 The Narrative Miner Authors.
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

#include "narrative/http.h"

#include <regex>

#include "httplib.h"
#include "narrative/error.h"

namespace narrative {

HttpResponse SendHttp(const HttpRequest& request) {
  static const std::regex kUrl("^(https?://[^/]+)(/.*)?$");
  std::smatch m;
  if (!std::regex_match(request.url, m, kUrl)) {
    throw Error(ErrorCode::kInvalidArgument, "bad URL: " + request.url);
  }
  const std::string base = m[1].str();
  const std::string path = m[2].matched ? m[2].str() : "/";

  httplib::Client client(base);
  const auto seconds =
      std::chrono::duration_cast<std::chrono::seconds>(request.timeout);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(
      request.timeout - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());
  client.set_follow_location(true);

  httplib::Headers headers;
  for (const auto& [k, v] : request.headers) headers.emplace(k, v);

  httplib::Result result;
  if (request.method == "GET") {
    result = client.Get(path, headers);
  } else if (request.method == "POST") {
    result = client.Post(path, headers, request.body, request.content_type);
  } else {
    throw Error(ErrorCode::kInvalidArgument,
                "unsupported method " + request.method);
  }
  if (!result) {
    throw Error(ErrorCode::kBackendUnavailable,
                request.url + ": " + httplib::to_string(result.error()));
  }
  return {result->status, result->body};
}

std::string UrlEncode(std::string_view value) {
  static const char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : value) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 15];
    }
  }
  return out;
}

}  // namespace narrative

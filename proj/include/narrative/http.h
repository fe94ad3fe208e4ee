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

#ifndef NARRATIVE_HTTP_H_
#define NARRATIVE_HTTP_H_

#include <chrono>
#include <string>
#include <utility>
#include <vector>

#include "narrative/error.h"

namespace narrative {

struct HttpRequest {
  std::string method = "GET";
  // Absolute http:// or https:// URL, query string included.
  std::string url;
  std::string body;
  std::string content_type = "application/json";
  std::vector<std::pair<std::string, std::string>> headers;
  std::chrono::milliseconds timeout{30000};
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

// Throws BackendUnavailable when the connection fails; HTTP error statuses
// are returned to the caller.
HttpResponse SendHttp(const HttpRequest& request);

// Percent-encodes a query parameter value.
std::string UrlEncode(std::string_view value);

// Calls `fn` up to 1 + max_retries times while it throws a backend failure,
// rethrowing the last one.
template <typename Fn>
auto WithRetries(int max_retries, Fn&& fn) -> decltype(fn()) {
  for (int attempt = 0;; ++attempt) {
    try {
      return fn();
    } catch (const Error& e) {
      if (!IsBackendFailure(e.code()) || attempt >= max_retries) throw;
    }
  }
}

}  // namespace narrative

#endif  // NARRATIVE_HTTP_H_

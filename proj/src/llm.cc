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

#include "narrative/llm.h"

#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "narrative/error.h"
#include "narrative/http.h"
#include "narrative/prompts.h"
#include "narrative/text.h"

namespace narrative {
namespace {

using Json = nlohmann::json;

const std::map<std::string, std::string>& BuiltinDefaults() {
  static const std::map<std::string, std::string> kDefaults = {
      {kDetectEvent, "no"},        {kDetectSubevent, "no"},
      {kExtractTimeline, "none"},  {kLabelEvent, "$key"},
      {kVerifyEvent, "yes"},       {kSynthesizeLabel, "$first"},
      {kInferRelation, "none"},
  };
  return kDefaults;
}

std::string Expand(const std::string& answer, const std::string& key) {
  if (answer == "$key") return key;
  if (answer == "$first") return key.substr(0, key.find(" || "));
  if (answer == "$unavailable") {
    throw Error(ErrorCode::kBackendUnavailable, "scripted outage for " + key);
  }
  return answer;
}

}  // namespace

std::unique_ptr<MockBackend> MockBackend::FromJson(const std::string& json) {
  auto mock = std::make_unique<MockBackend>();
  try {
    const Json j = Json::parse(json);
    if (j.contains("model")) mock->model_ = j.at("model").get<std::string>();
    if (j.contains("responses")) {
      for (const auto& [tmpl, table] : j.at("responses").items()) {
        for (const auto& [key, answer] : table.items()) {
          mock->Script(tmpl, key, answer.get<std::string>());
        }
      }
    }
    if (j.contains("defaults")) {
      for (const auto& [tmpl, answer] : j.at("defaults").items()) {
        mock->SetDefault(tmpl, answer.get<std::string>());
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("mock script: ") + e.what());
  }
  return mock;
}

std::unique_ptr<MockBackend> MockBackend::FromFile(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFileUnreadable, path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return FromJson(text.str());
}

void MockBackend::Script(const std::string& template_name,
                         const std::string& key, const std::string& answer) {
  responses_[template_name][key] = answer;
}

void MockBackend::SetDefault(const std::string& template_name,
                             const std::string& answer) {
  defaults_[template_name] = answer;
}

std::string MockBackend::Complete(const CompletionRequest& request) {
  ++calls_;
  auto table = responses_.find(request.template_name);
  if (table != responses_.end()) {
    auto it = table->second.find(request.key);
    if (it != table->second.end()) return Expand(it->second, request.key);
  }
  {
    std::lock_guard lock(mutex_);
    unscripted_.emplace(request.template_name, request.key);
  }
  auto d = defaults_.find(request.template_name);
  if (d != defaults_.end()) return Expand(d->second, request.key);
  auto b = BuiltinDefaults().find(request.template_name);
  if (b != BuiltinDefaults().end()) return Expand(b->second, request.key);
  return "";
}

std::set<std::pair<std::string, std::string>> MockBackend::unscripted() const {
  std::lock_guard lock(mutex_);
  return unscripted_;
}

HttpCompletionBackend::HttpCompletionBackend(Options options)
    : options_(std::move(options)) {}

std::string HttpCompletionBackend::Complete(const CompletionRequest& request) {
  HttpRequest http;
  http.method = "POST";
  http.url = options_.endpoint;
  http.timeout = options_.timeout;
  http.body = Json{{"messages", {{{"content", request.prompt}, {"role", "user"}}}},
                   {"model", options_.model},
                   {"temperature", 0}}
                  .dump();
  if (options_.api_key) {
    http.headers.emplace_back("Authorization", "Bearer " + *options_.api_key);
  }
  return WithRetries(options_.max_retries, [&] {
    const HttpResponse response = SendHttp(http);
    if (response.status != 200) {
      throw Error(ErrorCode::kBackendUnavailable,
                  "completion endpoint returned HTTP " +
                      std::to_string(response.status));
    }
    try {
      return Json::parse(response.body)
          .at("choices")
          .at(0)
          .at("message")
          .at("content")
          .get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kBackendUnavailable,
                  std::string("malformed completion response: ") + e.what());
    }
  });
}

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::string ResponseCache::Key(const std::string& template_name,
                               const std::string& prompt,
                               const std::string& model) {
  std::string data = template_name;
  data += '\0';
  data += prompt;
  data += '\0';
  data += model;
  return Sha256Hex(data);
}

std::filesystem::path ResponseCache::PathFor(const std::string& key) const {
  return dir_ / (key + ".txt");
}

std::optional<std::string> ResponseCache::Get(const std::string& key) const {
  std::ifstream in(PathFor(key), std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void ResponseCache::Put(const std::string& key, const std::string& value) {
  std::ostringstream tid;
  tid << std::this_thread::get_id();
  const auto tmp = dir_ / (key + ".tmp." + tid.str());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kFileUnreadable, tmp.string());
    out << value;
  }
  std::lock_guard lock(mutex_);
  std::filesystem::rename(tmp, PathFor(key));
}

CacheStats ResponseCache::Stats() const {
  CacheStats stats;
  std::lock_guard lock(mutex_);
  if (!std::filesystem::exists(dir_)) return stats;
  for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
    if (entry.path().extension() != ".txt") continue;
    ++stats.entries;
    stats.bytes += entry.file_size();
  }
  return stats;
}

size_t ResponseCache::Clear() {
  std::lock_guard lock(mutex_);
  size_t removed = 0;
  if (!std::filesystem::exists(dir_)) return removed;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
    const std::string ext = entry.path().extension().string();
    if (ext == ".txt") files.push_back(entry.path());
  }
  for (const auto& f : files) removed += std::filesystem::remove(f) ? 1 : 0;
  return removed;
}

std::string CachingBackend::Complete(const CompletionRequest& request) {
  const std::string key =
      ResponseCache::Key(request.template_name, request.prompt, inner_.model());
  if (auto hit = cache_.Get(key)) {
    ++hits_;
    return *hit;
  }
  ++misses_;
  std::string answer = inner_.Complete(request);
  cache_.Put(key, answer);
  return answer;
}

}  // namespace narrative

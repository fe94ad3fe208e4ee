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

#ifndef NARRATIVE_LLM_H_
#define NARRATIVE_LLM_H_

#include <atomic>
#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace narrative {

struct CompletionRequest {
  std::string template_name;
  std::string prompt;
  // Short stable key naming the task input (document URL and event, a
  // sentence, ...). Only scripted backends look at it.
  std::string key;
};

class CompletionBackend {
 public:
  virtual ~CompletionBackend() = default;
  virtual std::string model() const = 0;
  // Raw answer text. Throws BackendUnavailable.
  virtual std::string Complete(const CompletionRequest& request) = 0;
};

// Answers from a JSON script:
//   {"model": "...",
//    "responses": {template: {key: answer}},
//    "defaults": {template: answer}}
// Unscripted requests fall back to the template default, then to a built-in
// one (detect: "no", verify: "yes", label: the key, synthesize: "$first",
// relation: "none", extraction: "none"). In an answer, "$key" expands to the
// request key and "$first" to the part of the key before the first " || ".
// An answer of "$unavailable" throws BackendUnavailable.
class MockBackend : public CompletionBackend {
 public:
  MockBackend() = default;
  static std::unique_ptr<MockBackend> FromFile(const std::filesystem::path& path);
  static std::unique_ptr<MockBackend> FromJson(const std::string& json);

  void Script(const std::string& template_name, const std::string& key,
              const std::string& answer);
  void SetDefault(const std::string& template_name, const std::string& answer);

  std::string model() const override { return model_; }
  std::string Complete(const CompletionRequest& request) override;

  // (template, key) pairs answered by a fallback, sorted.
  std::set<std::pair<std::string, std::string>> unscripted() const;
  size_t calls() const { return calls_; }

 private:
  std::string model_ = "mock";
  std::map<std::string, std::map<std::string, std::string>> responses_;
  std::map<std::string, std::string> defaults_;
  mutable std::mutex mutex_;
  std::set<std::pair<std::string, std::string>> unscripted_;
  std::atomic<size_t> calls_{0};
};

// OpenAI-style chat completion: POST {"model", "messages": [{"role": "user",
// "content": prompt}], "temperature": 0} and read choices[0].message.content.
class HttpCompletionBackend : public CompletionBackend {
 public:
  struct Options {
    std::string endpoint;
    std::string model;
    std::chrono::milliseconds timeout{120000};
    int max_retries = 2;
    std::optional<std::string> api_key;
  };
  explicit HttpCompletionBackend(Options options);
  std::string model() const override { return options_.model; }
  std::string Complete(const CompletionRequest& request) override;

 private:
  Options options_;
};

struct CacheStats {
  size_t entries = 0;
  size_t bytes = 0;
};

// Content-addressed directory of raw responses, one file per
// sha256(template NUL prompt NUL model). Safe for concurrent use; writes go
// through a temporary file and a rename.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir);

  static std::string Key(const std::string& template_name,
                         const std::string& prompt, const std::string& model);

  std::optional<std::string> Get(const std::string& key) const;
  void Put(const std::string& key, const std::string& value);
  CacheStats Stats() const;
  // Removes every cached response; returns how many.
  size_t Clear();

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path PathFor(const std::string& key) const;

  std::filesystem::path dir_;
  mutable std::mutex mutex_;
};

// Serves repeated requests from the cache without touching the backend.
class CachingBackend : public CompletionBackend {
 public:
  CachingBackend(CompletionBackend& inner, ResponseCache& cache)
      : inner_(inner), cache_(cache) {}
  std::string model() const override { return inner_.model(); }
  std::string Complete(const CompletionRequest& request) override;

  size_t hits() const { return hits_; }
  size_t misses() const { return misses_; }

 private:
  CompletionBackend& inner_;
  ResponseCache& cache_;
  std::atomic<size_t> hits_{0};
  std::atomic<size_t> misses_{0};
};

}  // namespace narrative

#endif  // NARRATIVE_LLM_H_

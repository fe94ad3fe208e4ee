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

#include "narrative/embedding.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "narrative/error.h"
#include "narrative/http.h"
#include "narrative/text.h"

namespace narrative {
namespace {

void CheckSameSize(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
}

// FNV-1a, stable across platforms (std::hash is not).
uint64_t Fnv1a(std::string_view s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

double Euclidean(const Vector& a, const Vector& b) {
  CheckSameSize(a, b);
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

double Cosine(const Vector& a, const Vector& b) {
  CheckSameSize(a, b);
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw Error(ErrorCode::kZeroVector, "cosine");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

std::vector<Vector> Embed(EmbeddingBackend& backend,
                          const std::vector<std::string>& texts) {
  for (const std::string& t : texts) {
    if (Trim(t).empty()) {
      throw Error(ErrorCode::kInvalidArgument, "cannot embed an empty text");
    }
  }
  if (texts.empty()) return {};
  std::vector<Vector> out = backend.EmbedBatch(texts);
  if (out.size() != texts.size()) {
    throw Error(ErrorCode::kBackendUnavailable,
                "embedding backend returned " + std::to_string(out.size()) +
                    " vectors for " + std::to_string(texts.size()) + " texts");
  }
  for (const Vector& v : out) {
    if (v.size() != backend.dimension()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "expected " + std::to_string(backend.dimension()) +
                      ", got " + std::to_string(v.size()));
    }
    for (double x : v) {
      if (!std::isfinite(x)) {
        throw Error(ErrorCode::kInvalidArgument, "non-finite embedding");
      }
    }
  }
  return out;
}

HashingEmbeddingBackend::HashingEmbeddingBackend(size_t dimension)
    : dimension_(dimension) {
  if (dimension_ == 0) {
    throw Error(ErrorCode::kInvalidArgument, "dimension must be positive");
  }
}

std::vector<Vector> HashingEmbeddingBackend::EmbedBatch(
    const std::vector<std::string>& texts) {
  std::vector<Vector> out;
  for (const std::string& text : texts) {
    Vector v(dimension_, 0.0);
    auto add = [&](std::string_view feature, double weight) {
      const uint64_t h = Fnv1a(feature);
      const double sign = (h >> 63) ? -1.0 : 1.0;
      v[h % dimension_] += sign * weight;
    };
    const std::string lower = ToLower(text);
    std::string word;
    for (char c : lower + " ") {
      if (std::isalnum(static_cast<unsigned char>(c))) {
        word += c;
      } else if (!word.empty()) {
        add("w:" + word, 1.0);
        const std::string padded = "#" + word + "#";
        for (size_t i = 0; i + 3 <= padded.size(); ++i) {
          add("t:" + padded.substr(i, 3), 0.5);
        }
        word.clear();
      }
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    if (norm == 0.0) {
      v[0] = 1.0;
    } else {
      norm = std::sqrt(norm);
      for (double& x : v) x /= norm;
    }
    out.push_back(std::move(v));
  }
  return out;
}

FixtureEmbeddingBackend::FixtureEmbeddingBackend(
    std::map<std::string, Vector> table,
    std::unique_ptr<EmbeddingBackend> fallback)
    : table_(std::move(table)), fallback_(std::move(fallback)) {
  for (const auto& [text, v] : table_) {
    if (dimension_ == 0) dimension_ = v.size();
    if (v.size() != dimension_ || v.empty()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "fixture vector for '" + text + "'");
    }
  }
  if (fallback_) {
    if (dimension_ == 0) dimension_ = fallback_->dimension();
    if (fallback_->dimension() != dimension_) {
      throw Error(ErrorCode::kDimensionMismatch, "fixture fallback dimension");
    }
  }
  if (dimension_ == 0) {
    throw Error(ErrorCode::kInvalidArgument, "empty embedding table");
  }
}

std::unique_ptr<FixtureEmbeddingBackend> FixtureEmbeddingBackend::FromFile(
    const std::string& path, std::unique_ptr<EmbeddingBackend> fallback) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFileUnreadable, path);
  std::map<std::string, Vector> table;
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    for (const auto& [text, v] : j.items()) {
      table[text] = v.get<Vector>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, path + ": " + e.what());
  }
  return std::make_unique<FixtureEmbeddingBackend>(std::move(table),
                                                   std::move(fallback));
}

std::vector<Vector> FixtureEmbeddingBackend::EmbedBatch(
    const std::vector<std::string>& texts) {
  std::vector<Vector> out;
  for (const std::string& text : texts) {
    auto it = table_.find(text);
    if (it != table_.end()) {
      out.push_back(it->second);
      continue;
    }
    if (std::find(misses_.begin(), misses_.end(), text) == misses_.end()) {
      misses_.push_back(text);
    }
    if (!fallback_) {
      throw Error(ErrorCode::kInvalidArgument,
                  "text not in embedding table: " + text);
    }
    out.push_back(fallback_->EmbedBatch({text})[0]);
  }
  return out;
}

HttpEmbeddingBackend::HttpEmbeddingBackend(Options options)
    : options_(std::move(options)) {}

std::vector<Vector> HttpEmbeddingBackend::EmbedBatch(
    const std::vector<std::string>& texts) {
  HttpRequest request;
  request.method = "POST";
  request.url = options_.endpoint;
  request.timeout = options_.timeout;
  request.body = nlohmann::json{{"texts", texts}}.dump();
  if (options_.api_key) {
    request.headers.emplace_back("Authorization", "Bearer " + *options_.api_key);
  }
  return WithRetries(options_.max_retries, [&] {
    const HttpResponse response = SendHttp(request);
    if (response.status != 200) {
      throw Error(ErrorCode::kBackendUnavailable,
                  "embedding endpoint returned HTTP " +
                      std::to_string(response.status));
    }
    try {
      auto vectors = nlohmann::json::parse(response.body)
                         .at("vectors")
                         .get<std::vector<Vector>>();
      if (options_.dimension == 0 && !vectors.empty()) {
        options_.dimension = vectors[0].size();
      }
      return vectors;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kBackendUnavailable,
                  std::string("malformed embedding response: ") + e.what());
    }
  });
}

}  // namespace narrative

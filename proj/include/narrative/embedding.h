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

#ifndef NARRATIVE_EMBEDDING_H_
#define NARRATIVE_EMBEDDING_H_

#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace narrative {

using Vector = std::vector<double>;

// Throws DimensionMismatch for vectors of different size.
double Euclidean(const Vector& a, const Vector& b);
// Additionally throws ZeroVector when either input has zero norm.
double Cosine(const Vector& a, const Vector& b);

class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;
  virtual size_t dimension() const = 0;
  // One vector per text, in order. Callers should go through Embed().
  virtual std::vector<Vector> EmbedBatch(const std::vector<std::string>& texts) = 0;
};

// Validates the inputs (non-empty texts) and outputs (count, dimension,
// finiteness) around backend.EmbedBatch.
std::vector<Vector> Embed(EmbeddingBackend& backend,
                          const std::vector<std::string>& texts);

// Deterministic bag of words and character trigrams, feature-hashed into
// `dimension` buckets and L2-normalized. Texts with no features map to a
// fixed unit vector.
class HashingEmbeddingBackend : public EmbeddingBackend {
 public:
  explicit HashingEmbeddingBackend(size_t dimension = 64);
  size_t dimension() const override { return dimension_; }
  std::vector<Vector> EmbedBatch(const std::vector<std::string>& texts) override;

 private:
  size_t dimension_;
};

// Table lookup from a JSON object {text: [numbers]}. Texts missing from the
// table go to the fallback when one is set (its dimension must match) and
// throw InvalidArgument otherwise.
class FixtureEmbeddingBackend : public EmbeddingBackend {
 public:
  FixtureEmbeddingBackend(std::map<std::string, Vector> table,
                          std::unique_ptr<EmbeddingBackend> fallback = nullptr);
  static std::unique_ptr<FixtureEmbeddingBackend> FromFile(
      const std::string& path,
      std::unique_ptr<EmbeddingBackend> fallback = nullptr);

  size_t dimension() const override { return dimension_; }
  std::vector<Vector> EmbedBatch(const std::vector<std::string>& texts) override;

  // Texts that were not in the table, in first-request order.
  const std::vector<std::string>& misses() const { return misses_; }

 private:
  std::map<std::string, Vector> table_;
  std::unique_ptr<EmbeddingBackend> fallback_;
  size_t dimension_ = 0;
  std::vector<std::string> misses_;
};

// POST {"texts": [...]} -> {"vectors": [[...], ...]}.
class HttpEmbeddingBackend : public EmbeddingBackend {
 public:
  struct Options {
    std::string endpoint;
    size_t dimension = 0;
    std::chrono::milliseconds timeout{30000};
    int max_retries = 2;
    std::optional<std::string> api_key;
  };
  explicit HttpEmbeddingBackend(Options options);
  size_t dimension() const override { return options_.dimension; }
  std::vector<Vector> EmbedBatch(const std::vector<std::string>& texts) override;

 private:
  Options options_;
};

}  // namespace narrative

#endif  // NARRATIVE_EMBEDDING_H_

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

#include "narrative/cluster_merge.h"

#include <algorithm>
#include <cmath>

#include "narrative/error.h"

namespace narrative {

Vector Centroid(const std::vector<size_t>& members,
                const std::vector<Vector>& vectors) {
  if (members.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "centroid of an empty cluster");
  }
  Vector c(vectors.at(members[0]).size(), 0.0);
  for (size_t m : members) {
    const Vector& v = vectors.at(m);
    if (v.size() != c.size()) {
      throw Error(ErrorCode::kDimensionMismatch, "centroid");
    }
    for (size_t i = 0; i < c.size(); ++i) c[i] += v[i];
  }
  for (double& x : c) x /= static_cast<double>(members.size());
  return c;
}

MergeResult MergeClusters(std::vector<std::vector<size_t>> clusters,
                          const std::vector<Vector>& vectors,
                          double threshold) {
  if (!(threshold >= -1.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidThreshold,
                "merge threshold must lie in [-1, 1]");
  }
  for (auto& c : clusters) std::sort(c.begin(), c.end());
  std::sort(clusters.begin(), clusters.end());

  MergeResult result;
  std::vector<Vector> centroids;
  for (const auto& c : clusters) centroids.push_back(Centroid(c, vectors));

  auto similarity = [&](size_t i, size_t j) {
    try {
      return Cosine(centroids[i], centroids[j]);
    } catch (const Error& e) {
      // A zero centroid is similar to nothing.
      if (e.code() == ErrorCode::kZeroVector) return -2.0;
      throw;
    }
  };

  while (clusters.size() > 1) {
    double best = -3.0;
    size_t bi = 0, bj = 0;
    for (size_t i = 0; i < clusters.size(); ++i) {
      for (size_t j = i + 1; j < clusters.size(); ++j) {
        const double s = similarity(i, j);
        if (s > best) {
          best = s;
          bi = i;
          bj = j;
        }
      }
    }
    if (best < threshold) break;
    result.log.push_back({bi, bj, best});
    clusters[bi].insert(clusters[bi].end(), clusters[bj].begin(),
                        clusters[bj].end());
    std::sort(clusters[bi].begin(), clusters[bi].end());
    clusters.erase(clusters.begin() + bj);
    centroids.erase(centroids.begin() + bj);
    centroids[bi] = Centroid(clusters[bi], vectors);
  }
  result.clusters = std::move(clusters);
  return result;
}

}  // namespace narrative

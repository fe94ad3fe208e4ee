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

#ifndef NARRATIVE_CLUSTER_MERGE_H_
#define NARRATIVE_CLUSTER_MERGE_H_

#include <cstddef>
#include <vector>

#include "narrative/embedding.h"

namespace narrative {

struct MergeStep {
  // Positions in the cluster list at the time of the merge; `kept` absorbs
  // `absorbed`, which is removed.
  size_t kept = 0;
  size_t absorbed = 0;
  double similarity = 0.0;
};

struct MergeResult {
  // Member point indices per cluster, ascending; clusters ordered by their
  // smallest member.
  std::vector<std::vector<size_t>> clusters;
  std::vector<MergeStep> log;
};

// Mean of the member vectors.
Vector Centroid(const std::vector<size_t>& members,
                const std::vector<Vector>& vectors);

// Repeatedly merges the pair of clusters whose centroids have the highest
// cosine similarity, as long as it is >= threshold. Ties go to the
// lexicographically smallest (i, j) pair of positions. Input clusters are
// first put in canonical order. Throws InvalidThreshold outside [-1, 1].
MergeResult MergeClusters(std::vector<std::vector<size_t>> clusters,
                          const std::vector<Vector>& vectors,
                          double threshold);

}  // namespace narrative

#endif  // NARRATIVE_CLUSTER_MERGE_H_

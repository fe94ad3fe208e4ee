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

#ifndef NARRATIVE_HDBSCAN_H_
#define NARRATIVE_HDBSCAN_H_

#include <cstddef>
#include <map>
#include <set>
#include <vector>

#include "narrative/embedding.h"

namespace narrative {

struct HdbscanParams {
  size_t min_cluster_size = 10;
  // Neighbourhood size for the core distance, counting the point itself.
  size_t min_samples = 2;
  // Clusters born below this distance are merged up into their ancestor.
  double epsilon = 0.1;
  // Lets the root of the condensed tree be selected, so one dense blob (or a
  // set of identical points) forms a cluster instead of all noise.
  bool allow_single_cluster = true;
};

struct ClusterResult {
  // Cluster index per input point, -1 for noise.
  std::vector<int> assignments;
  // Member indices per cluster, ascending. Clusters are numbered by their
  // smallest member.
  std::vector<std::vector<size_t>> clusters;

  size_t noise_count() const;
};

// Euclidean HDBSCAN with excess-of-mass selection. Throws InvalidParams for
// an empty input, min_cluster_size < 2, min_samples < 1 or a negative or
// non-finite epsilon, and DimensionMismatch for ragged input.
//
// Points are processed in lexicographic order, and every tie (equal edge
// weights, equal stabilities) is broken by that order, so the partition does
// not depend on input order.
ClusterResult Hdbscan(const std::vector<Vector>& points,
                      const HdbscanParams& params);

// The pipeline stages, exposed for testing. Points are taken in the given
// order.
namespace hdbscan_internal {

// Lambda assigned to a zero distance. Finite so stabilities stay comparable.
inline constexpr double kLambdaMax = 1e300;
double LambdaOf(double distance);

// Distance to the min_samples-th nearest neighbour, the point itself being
// the first; 0 when min_samples is 1.
std::vector<double> CoreDistances(const std::vector<Vector>& points,
                                  size_t min_samples);

// Dense matrix of max(core_a, core_b, d(a, b)), zero on the diagonal.
std::vector<std::vector<double>> MutualReachability(
    const std::vector<Vector>& points, const std::vector<double>& core);

struct Edge {
  size_t a = 0;  // a < b
  size_t b = 0;
  double weight = 0.0;
};

// Edges compare by (weight, a, b), which makes the minimum spanning tree
// unique.
bool EdgeLess(const Edge& x, const Edge& y);

// Prim's algorithm over a dense symmetric weight matrix.
std::vector<Edge> MinimumSpanningTree(
    const std::vector<std::vector<double>>& weights);

// Row i merges clusters `left` and `right` into cluster n + i. Leaves are
// points 0..n-1.
struct LinkageRow {
  size_t left = 0;
  size_t right = 0;
  double distance = 0.0;
  size_t size = 0;
};
std::vector<LinkageRow> SingleLinkage(std::vector<Edge> mst, size_t n);

// Root cluster is n; children are points (< n) falling out or clusters.
struct CondensedRow {
  size_t parent = 0;
  size_t child = 0;
  double lambda = 0.0;
  size_t child_size = 0;
};
std::vector<CondensedRow> CondenseTree(const std::vector<LinkageRow>& linkage,
                                       size_t n, size_t min_cluster_size);

std::map<size_t, double> Stabilities(const std::vector<CondensedRow>& tree,
                                     size_t n);

std::set<size_t> SelectClusters(const std::vector<CondensedRow>& tree,
                                size_t n, const HdbscanParams& params);

// Raw labels: -1 or the selected cluster id each point falls under.
std::vector<long> LabelPoints(const std::vector<CondensedRow>& tree, size_t n,
                              const std::set<size_t>& selected,
                              const HdbscanParams& params);

}  // namespace hdbscan_internal
}  // namespace narrative

#endif  // NARRATIVE_HDBSCAN_H_

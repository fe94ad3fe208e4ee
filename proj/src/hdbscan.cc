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

#include "narrative/hdbscan.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include "narrative/error.h"

namespace narrative {

size_t ClusterResult::noise_count() const {
  return std::count(assignments.begin(), assignments.end(), -1);
}

namespace hdbscan_internal {

double LambdaOf(double distance) {
  if (distance <= 0.0) return kLambdaMax;
  return std::min(1.0 / distance, kLambdaMax);
}

std::vector<double> CoreDistances(const std::vector<Vector>& points,
                                  size_t min_samples) {
  const size_t n = points.size();
  std::vector<double> core(n, 0.0);
  if (min_samples <= 1) return core;
  std::vector<double> row(n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) row[j] = Euclidean(points[i], points[j]);
    // row includes the point itself at distance 0.
    const size_t k = std::min(min_samples, n) - 1;
    std::nth_element(row.begin(), row.begin() + k, row.end());
    core[i] = row[k];
  }
  return core;
}

std::vector<std::vector<double>> MutualReachability(
    const std::vector<Vector>& points, const std::vector<double>& core) {
  const size_t n = points.size();
  std::vector<std::vector<double>> mr(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const double d =
          std::max({core[i], core[j], Euclidean(points[i], points[j])});
      mr[i][j] = mr[j][i] = d;
    }
  }
  return mr;
}

bool EdgeLess(const Edge& x, const Edge& y) {
  return std::tie(x.weight, x.a, x.b) < std::tie(y.weight, y.a, y.b);
}

std::vector<Edge> MinimumSpanningTree(
    const std::vector<std::vector<double>>& weights) {
  const size_t n = weights.size();
  std::vector<Edge> tree;
  if (n < 2) return tree;
  std::vector<bool> in_tree(n, false);
  std::vector<Edge> best(n);
  std::vector<bool> has_best(n, false);
  size_t current = 0;
  in_tree[0] = true;
  for (size_t step = 1; step < n; ++step) {
    for (size_t v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      Edge candidate{std::min(current, v), std::max(current, v),
                     weights[current][v]};
      if (!has_best[v] || EdgeLess(candidate, best[v])) {
        best[v] = candidate;
        has_best[v] = true;
      }
    }
    size_t next = n;
    for (size_t v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      if (next == n || EdgeLess(best[v], best[next])) next = v;
    }
    in_tree[next] = true;
    tree.push_back(best[next]);
    current = next;
  }
  return tree;
}

std::vector<LinkageRow> SingleLinkage(std::vector<Edge> mst, size_t n) {
  std::sort(mst.begin(), mst.end(), EdgeLess);
  // Union-find over 2n - 1 cluster ids; each new cluster becomes the parent
  // of the two roots it merges.
  std::vector<size_t> parent(2 * n, 0);
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<size_t> size(2 * n, 1);
  auto find = [&](size_t x) {
    size_t root = x;
    while (parent[root] != root) root = parent[root];
    while (parent[x] != root) {
      const size_t next = parent[x];
      parent[x] = root;
      x = next;
    }
    return root;
  };
  std::vector<LinkageRow> rows;
  size_t next_label = n;
  for (const Edge& e : mst) {
    const size_t ra = find(e.a);
    const size_t rb = find(e.b);
    rows.push_back({ra, rb, e.weight, size[ra] + size[rb]});
    parent[ra] = parent[rb] = next_label;
    size[next_label] = size[ra] + size[rb];
    ++next_label;
  }
  return rows;
}

namespace {

// Level-order walk of the single-linkage tree below `root`.
std::vector<size_t> BfsFromHierarchy(const std::vector<LinkageRow>& linkage,
                                     size_t n, size_t root) {
  std::vector<size_t> result;
  std::vector<size_t> level{root};
  while (!level.empty()) {
    result.insert(result.end(), level.begin(), level.end());
    std::vector<size_t> next;
    for (size_t x : level) {
      if (x < n) continue;
      next.push_back(linkage[x - n].left);
      next.push_back(linkage[x - n].right);
    }
    level = std::move(next);
  }
  return result;
}

struct ClusterTree {
  std::map<size_t, std::vector<size_t>> children;
  std::map<size_t, size_t> parent;
  std::map<size_t, double> birth_lambda;
};

ClusterTree BuildClusterTree(const std::vector<CondensedRow>& tree, size_t n) {
  ClusterTree ct;
  for (const CondensedRow& r : tree) {
    if (r.child < n) continue;
    ct.children[r.parent].push_back(r.child);
    ct.parent[r.child] = r.parent;
    ct.birth_lambda[r.child] = r.lambda;
  }
  return ct;
}

std::vector<size_t> Descendants(const ClusterTree& ct, size_t root) {
  std::vector<size_t> out;
  std::vector<size_t> stack{root};
  while (!stack.empty()) {
    const size_t c = stack.back();
    stack.pop_back();
    auto it = ct.children.find(c);
    if (it == ct.children.end()) continue;
    for (size_t child : it->second) {
      out.push_back(child);
      stack.push_back(child);
    }
  }
  return out;
}

size_t TraverseUpwards(const ClusterTree& ct, size_t root, double epsilon,
                       size_t leaf, bool allow_single_cluster) {
  while (true) {
    const size_t parent = ct.parent.at(leaf);
    if (parent == root) return allow_single_cluster ? parent : leaf;
    if (1.0 / ct.birth_lambda.at(parent) > epsilon) return parent;
    leaf = parent;
  }
}

}  // namespace

std::vector<CondensedRow> CondenseTree(const std::vector<LinkageRow>& linkage,
                                       size_t n, size_t min_cluster_size) {
  std::vector<CondensedRow> result;
  if (n < 2) {
    for (size_t p = 0; p < n; ++p) result.push_back({n, p, kLambdaMax, 1});
    return result;
  }
  const size_t root = 2 * n - 2;
  const std::vector<size_t> order = BfsFromHierarchy(linkage, n, root);
  std::vector<size_t> relabel(root + 1, 0);
  relabel[root] = n;
  size_t next_label = n + 1;
  std::vector<bool> ignore(root + 1, false);

  auto size_of = [&](size_t node) {
    return node >= n ? linkage[node - n].size : size_t{1};
  };
  auto fall_out = [&](size_t subtree, size_t cluster, double lambda) {
    for (size_t sub : BfsFromHierarchy(linkage, n, subtree)) {
      if (sub < n) result.push_back({cluster, sub, lambda, 1});
      ignore[sub] = true;
    }
  };

  for (size_t node : order) {
    if (ignore[node] || node < n) continue;
    const LinkageRow& row = linkage[node - n];
    const double lambda = LambdaOf(row.distance);
    const size_t left_count = size_of(row.left);
    const size_t right_count = size_of(row.right);
    const size_t cluster = relabel[node];
    if (left_count >= min_cluster_size && right_count >= min_cluster_size) {
      relabel[row.left] = next_label++;
      result.push_back({cluster, relabel[row.left], lambda, left_count});
      relabel[row.right] = next_label++;
      result.push_back({cluster, relabel[row.right], lambda, right_count});
    } else if (left_count < min_cluster_size &&
               right_count < min_cluster_size) {
      fall_out(row.left, cluster, lambda);
      fall_out(row.right, cluster, lambda);
    } else if (left_count < min_cluster_size) {
      relabel[row.right] = cluster;
      fall_out(row.left, cluster, lambda);
    } else {
      relabel[row.left] = cluster;
      fall_out(row.right, cluster, lambda);
    }
  }
  return result;
}

std::map<size_t, double> Stabilities(const std::vector<CondensedRow>& tree,
                                     size_t n) {
  std::map<size_t, double> births{{n, 0.0}};
  std::map<size_t, double> stability{{n, 0.0}};
  for (const CondensedRow& r : tree) {
    if (r.child >= n) {
      births[r.child] = r.lambda;
      stability.emplace(r.child, 0.0);
    }
  }
  for (const CondensedRow& r : tree) {
    stability[r.parent] +=
        (r.lambda - births.at(r.parent)) * static_cast<double>(r.child_size);
  }
  return stability;
}

std::set<size_t> SelectClusters(const std::vector<CondensedRow>& tree,
                                size_t n, const HdbscanParams& params) {
  std::map<size_t, double> stability = Stabilities(tree, n);
  const ClusterTree ct = BuildClusterTree(tree, n);

  std::vector<size_t> nodes;
  for (const auto& [id, s] : stability) {
    if (id != n || params.allow_single_cluster) nodes.push_back(id);
  }
  std::map<size_t, bool> is_cluster;
  for (size_t id : nodes) is_cluster[id] = true;
  // Children always carry larger ids than their parent: bottom-up.
  for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) {
    const size_t node = *it;
    double child_selection = 0.0;
    auto children = ct.children.find(node);
    if (children != ct.children.end()) {
      for (size_t c : children->second) child_selection += stability[c];
    }
    if (child_selection > stability[node]) {
      is_cluster[node] = false;
      stability[node] = child_selection;
    } else {
      for (size_t sub : Descendants(ct, node)) is_cluster[sub] = false;
    }
  }

  std::set<size_t> selected;
  for (const auto& [id, chosen] : is_cluster) {
    if (chosen) selected.insert(id);
  }
  if (params.epsilon == 0.0 || ct.parent.empty()) return selected;

  std::set<size_t> eps_selected;
  std::set<size_t> processed;
  for (size_t leaf : selected) {
    if (leaf == n) {
      eps_selected.insert(leaf);
      continue;
    }
    const double eps_child = 1.0 / ct.birth_lambda.at(leaf);
    if (eps_child < params.epsilon) {
      if (processed.count(leaf)) continue;
      const size_t up = TraverseUpwards(ct, n, params.epsilon, leaf,
                                        params.allow_single_cluster);
      eps_selected.insert(up);
      for (size_t sub : Descendants(ct, up)) processed.insert(sub);
    } else {
      eps_selected.insert(leaf);
    }
  }
  return eps_selected;
}

std::vector<long> LabelPoints(const std::vector<CondensedRow>& tree, size_t n,
                              const std::set<size_t>& selected,
                              const HdbscanParams& params) {
  std::map<size_t, size_t> parent;
  std::vector<double> point_lambda(n, 0.0);
  double root_max_lambda = 0.0;
  for (const CondensedRow& r : tree) {
    parent[r.child] = r.parent;
    if (r.child < n) point_lambda[r.child] = r.lambda;
    if (r.parent == n) root_max_lambda = std::max(root_max_lambda, r.lambda);
  }
  std::vector<long> labels(n, -1);
  for (size_t p = 0; p < n; ++p) {
    auto it = parent.find(p);
    if (it == parent.end()) continue;
    size_t cluster = it->second;
    while (!selected.count(cluster) && cluster != n) cluster = parent.at(cluster);
    if (!selected.count(cluster)) continue;
    if (cluster != n) {
      labels[p] = static_cast<long>(cluster);
      continue;
    }
    // Root selected: only points that stayed dense enough belong to it.
    if (selected.size() != 1 || !params.allow_single_cluster) continue;
    const double threshold =
        params.epsilon != 0.0 ? 1.0 / params.epsilon : root_max_lambda;
    if (point_lambda[p] >= threshold) labels[p] = static_cast<long>(n);
  }
  return labels;
}

}  // namespace hdbscan_internal

ClusterResult Hdbscan(const std::vector<Vector>& points,
                      const HdbscanParams& params) {
  using namespace hdbscan_internal;
  if (points.empty()) throw Error(ErrorCode::kInvalidParams, "no points");
  if (params.min_cluster_size < 2) {
    throw Error(ErrorCode::kInvalidParams, "min_cluster_size must be >= 2");
  }
  if (params.min_samples < 1) {
    throw Error(ErrorCode::kInvalidParams, "min_samples must be >= 1");
  }
  if (!(params.epsilon >= 0.0) || !std::isfinite(params.epsilon)) {
    throw Error(ErrorCode::kInvalidParams, "epsilon must be finite and >= 0");
  }
  const size_t n = points.size();
  for (const Vector& p : points) {
    if (p.size() != points[0].size()) {
      throw Error(ErrorCode::kDimensionMismatch, "ragged point set");
    }
    for (double x : p) {
      if (!std::isfinite(x)) {
        throw Error(ErrorCode::kInvalidParams, "non-finite coordinate");
      }
    }
  }

  // Canonical order: lexicographic by coordinates, input index breaking ties.
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return points[a] < points[b];
  });
  std::vector<Vector> sorted;
  sorted.reserve(n);
  for (size_t i : order) sorted.push_back(points[i]);

  std::vector<long> raw(n, -1);
  if (n >= params.min_cluster_size) {
    const auto core = CoreDistances(sorted, params.min_samples);
    const auto mst = MinimumSpanningTree(MutualReachability(sorted, core));
    const auto tree =
        CondenseTree(SingleLinkage(mst, n), n, params.min_cluster_size);
    raw = LabelPoints(tree, n, SelectClusters(tree, n, params), params);
  }

  std::map<long, std::vector<size_t>> groups;
  for (size_t k = 0; k < n; ++k) {
    if (raw[k] >= 0) groups[raw[k]].push_back(order[k]);
  }
  ClusterResult result;
  result.assignments.assign(n, -1);
  for (auto& [label, members] : groups) {
    // Only a selected root can fall short of the minimum size.
    if (members.size() < params.min_cluster_size) continue;
    std::sort(members.begin(), members.end());
    result.clusters.push_back(members);
  }
  std::sort(result.clusters.begin(), result.clusters.end());
  for (size_t c = 0; c < result.clusters.size(); ++c) {
    for (size_t p : result.clusters[c]) {
      result.assignments[p] = static_cast<int>(c);
    }
  }
  return result;
}

}  // namespace narrative

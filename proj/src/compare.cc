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

#include "narrative/compare.h"

#include <algorithm>
#include <numeric>
#include <set>

#include "narrative/error.h"
#include "narrative/serialization.h"

namespace narrative {
namespace {

using LabelVectors = std::map<std::string, Vector>;

LabelVectors EmbedLabels(const NarrativeStore& store,
                         const std::vector<std::vector<std::string>>& event_lists,
                         EmbeddingBackend& embedder) {
  std::set<std::string> labels;
  for (const auto& events : event_lists) {
    for (const std::string& e : events) labels.insert(store.event(e).label);
  }
  const std::vector<std::string> texts(labels.begin(), labels.end());
  LabelVectors out;
  if (texts.empty()) return out;
  const std::vector<Vector> vectors = Embed(embedder, texts);
  for (size_t i = 0; i < texts.size(); ++i) out[texts[i]] = vectors[i];
  return out;
}

double LabelCosine(const LabelVectors& vectors, const std::string& a,
                   const std::string& b) {
  try {
    return Cosine(vectors.at(a), vectors.at(b));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kZeroVector) return 0.0;
    throw;
  }
}

std::optional<std::string> BoundId(const EventNode& e) {
  if (!e.binding || e.binding->kind == BindingKind::kNone) return std::nullopt;
  return e.binding->kg_id;
}

EventAlignment Align(const NarrativeStore& store,
                     const std::vector<std::string>& first,
                     const std::vector<std::string>& second,
                     const LabelVectors& vectors, double threshold) {
  EventAlignment out;
  std::set<std::string> used1, used2;
  auto take = [&](const std::string& a, const std::string& b,
                  AlignmentBasis basis, double score) {
    used1.insert(a);
    used2.insert(b);
    out.pairs.push_back({a, b, basis, score});
  };

  // The same node in both narratives.
  const std::set<std::string> in_second(second.begin(), second.end());
  for (const std::string& e : first) {
    if (in_second.count(e) && !used1.count(e)) {
      take(e, e, AlignmentBasis::kSharedBinding, 1.0);
    }
  }

  // Same graph entity; several events bound to one entity pair up in id
  // order on both sides.
  std::map<std::string, std::pair<std::set<std::string>, std::set<std::string>>>
      by_kg;
  for (const std::string& e : first) {
    if (used1.count(e)) continue;
    if (auto kg = BoundId(store.event(e))) by_kg[*kg].first.insert(e);
  }
  for (const std::string& e : second) {
    if (used2.count(e)) continue;
    if (auto kg = BoundId(store.event(e))) by_kg[*kg].second.insert(e);
  }
  for (const auto& [kg, sides] : by_kg) {
    auto a = sides.first.begin();
    auto b = sides.second.begin();
    for (; a != sides.first.end() && b != sides.second.end(); ++a, ++b) {
      take(*a, *b, AlignmentBasis::kSharedBinding, 1.0);
    }
  }

  struct Candidate {
    double score;
    std::string a, b;
    std::string low, high;
  };
  std::vector<Candidate> candidates;
  for (const std::string& a : first) {
    if (used1.count(a)) continue;
    for (const std::string& b : second) {
      if (used2.count(b)) continue;
      const double s =
          LabelCosine(vectors, store.event(a).label, store.event(b).label);
      if (s >= threshold) {
        candidates.push_back({s, a, b, std::min(a, b), std::max(a, b)});
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& x, const Candidate& y) {
              if (x.score != y.score) return x.score > y.score;
              if (x.low != y.low) return x.low < y.low;
              return x.high < y.high;
            });
  for (const Candidate& c : candidates) {
    if (used1.count(c.a) || used2.count(c.b)) continue;
    take(c.a, c.b, AlignmentBasis::kSimilarity, c.score);
  }
  std::sort(out.pairs.begin(), out.pairs.end(),
            [](const AlignedPair& x, const AlignedPair& y) {
              return x.first < y.first;
            });
  return out;
}

NarrativeDifferences Unaligned(const NarrativeStore& store,
                               const std::string& n1,
                               const std::vector<std::string>& first,
                               const std::string& n2,
                               const std::vector<std::string>& second,
                               const EventAlignment& alignment) {
  std::set<std::string> covered1, covered2;
  for (const AlignedPair& p : alignment.pairs) {
    covered1.insert(p.first);
    covered2.insert(p.second);
  }
  NarrativeDifferences out;
  const std::string& vp1 = store.narrative(n1).narrator;
  const std::string& vp2 = store.narrative(n2).narrator;
  for (const std::string& e : first) {
    if (!covered1.count(e)) out.unique_to_first.push_back({e, store.event(e).label, vp1});
  }
  for (const std::string& e : second) {
    if (!covered2.count(e)) out.unique_to_second.push_back({e, store.event(e).label, vp2});
  }
  return out;
}

void RequireNarrative(const NarrativeStore& store, const std::string& id) {
  if (!store.HasNarrative(id)) throw Error(ErrorCode::kMissingNarrative, id);
}

std::vector<std::string> Deduplicated(const std::vector<std::string>& ids) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const std::string& id : ids) {
    if (seen.insert(id).second) out.push_back(id);
  }
  return out;
}

class UnionFind {
 public:
  explicit UnionFind(size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  size_t Find(size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void Union(size_t a, size_t b) {
    a = Find(a);
    b = Find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<size_t> parent_;
};

std::vector<EventGroup> CommonGroups(
    const NarrativeStore& store, const std::vector<std::string>& narratives,
    const std::vector<std::vector<std::string>>& events,
    const std::map<std::pair<size_t, size_t>, EventAlignment>& alignments) {
  // Node per (narrative, event).
  std::vector<GroupMember> nodes;
  std::map<std::pair<size_t, std::string>, size_t> index;
  std::vector<size_t> owner;
  for (size_t i = 0; i < narratives.size(); ++i) {
    for (const std::string& e : events[i]) {
      index[{i, e}] = nodes.size();
      nodes.push_back({narratives[i], e, store.event(e).label});
      owner.push_back(i);
    }
  }
  UnionFind uf(nodes.size());
  for (const auto& [ij, alignment] : alignments) {
    for (const AlignedPair& p : alignment.pairs) {
      uf.Union(index.at({ij.first, p.first}), index.at({ij.second, p.second}));
    }
  }
  std::map<size_t, std::vector<size_t>> groups;
  for (size_t k = 0; k < nodes.size(); ++k) groups[uf.Find(k)].push_back(k);
  std::vector<EventGroup> out;
  for (const auto& [root, members] : groups) {
    std::set<size_t> covered;
    for (size_t k : members) covered.insert(owner[k]);
    if (covered.size() != narratives.size()) continue;
    EventGroup g;
    for (size_t k : members) g.push_back(nodes[k]);
    std::sort(g.begin(), g.end());
    out.push_back(std::move(g));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Json MemberJson(const GroupMember& m) {
  return {{"event", m.event_id}, {"label", m.label}, {"narrative", m.narrative_id}};
}

Json UniqueJson(const UniqueEvent& u) {
  return {{"event", u.event_id}, {"label", u.label}, {"viewpoint", u.viewpoint}};
}

}  // namespace

std::string_view AlignmentBasisName(AlignmentBasis basis) {
  return basis == AlignmentBasis::kSharedBinding ? "shared-binding" : "similarity";
}

void CompareOptions::Validate() const {
  if (!(sim_threshold >= 0.0 && sim_threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidThreshold, "similarity threshold");
  }
}

std::vector<std::string> ComparedEvents(const NarrativeStore& store,
                                        const std::string& narrative_id,
                                        bool flatten) {
  RequireNarrative(store, narrative_id);
  const Narrative& n = store.narrative(narrative_id);
  std::vector<std::string> out;
  for (const std::string& e : n.events) {
    out.push_back(e);
    if (!flatten) continue;
    auto child = n.eta.find(e);
    if (child == n.eta.end()) continue;
    for (const std::string& c : store.narrative(child->second).events) {
      out.push_back(c);
    }
  }
  return Deduplicated(out);
}

EventAlignment AlignEvents(const NarrativeStore& store, const std::string& n1,
                           const std::string& n2, EmbeddingBackend& embedder,
                           const CompareOptions& options) {
  options.Validate();
  const auto first = ComparedEvents(store, n1, options.flatten);
  const auto second = ComparedEvents(store, n2, options.flatten);
  const LabelVectors vectors = EmbedLabels(store, {first, second}, embedder);
  return Align(store, first, second, vectors, options.sim_threshold);
}

std::vector<EventGroup> Commonalities(const NarrativeStore& store,
                                      const std::vector<std::string>& narratives,
                                      EmbeddingBackend& embedder,
                                      const CompareOptions& options) {
  return CompareNarratives(store, narratives, embedder, options).commonalities;
}

NarrativeDifferences Differences(const NarrativeStore& store,
                                 const std::string& n1, const std::string& n2,
                                 EmbeddingBackend& embedder,
                                 const CompareOptions& options) {
  options.Validate();
  const auto first = ComparedEvents(store, n1, options.flatten);
  const auto second = ComparedEvents(store, n2, options.flatten);
  const LabelVectors vectors = EmbedLabels(store, {first, second}, embedder);
  const EventAlignment alignment =
      Align(store, first, second, vectors, options.sim_threshold);
  return Unaligned(store, n1, first, n2, second, alignment);
}

std::optional<std::string> NarrativeStart(const NarrativeStore& store,
                                          const std::string& narrative_id) {
  RequireNarrative(store, narrative_id);
  const Narrative& n = store.narrative(narrative_id);
  std::set<std::string> preceded;
  for (const NarrativeEdge& edge : n.narrative_edges) {
    const RelationPredicate* p = store.registry().FindPredicate(edge.predicate);
    if (p == nullptr) continue;
    if (p->direction == TemporalDirection::kSourceFirst) preceded.insert(edge.target);
    if (p->direction == TemporalDirection::kTargetFirst) preceded.insert(edge.source);
  }
  std::vector<std::string> sources;
  for (const std::string& e : n.events) {
    if (!preceded.count(e)) sources.push_back(e);
  }
  // Every event sits on a cycle: fall back to time alone.
  if (sources.empty()) sources = n.events;
  if (sources.size() == 1) return sources[0];

  std::vector<std::string> known;
  for (const std::string& e : sources) {
    if (store.event(e).time.known()) known.push_back(e);
  }
  if (known.empty()) return std::nullopt;
  std::stable_sort(known.begin(), known.end(),
                   [&](const std::string& a, const std::string& b) {
                     return EarlierThan(store.event(a).time, store.event(b).time);
                   });
  if (known.size() > 1 &&
      !EarlierThan(store.event(known[0]).time, store.event(known[1]).time)) {
    return std::nullopt;
  }
  return known[0];
}

ComparisonReport CompareNarratives(const NarrativeStore& store,
                                   const std::vector<std::string>& narratives,
                                   EmbeddingBackend& embedder,
                                   const CompareOptions& options) {
  options.Validate();
  if (narratives.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no narratives to compare");
  }
  ComparisonReport report;
  report.options = options;
  report.narratives = Deduplicated(narratives);
  // Sorted so the result does not depend on the order of the inputs.
  std::sort(report.narratives.begin(), report.narratives.end());
  const auto& ids = report.narratives;

  std::vector<std::vector<std::string>> events;
  for (const std::string& id : ids) {
    events.push_back(ComparedEvents(store, id, options.flatten));
  }
  const LabelVectors vectors = EmbedLabels(store, events, embedder);
  std::map<std::pair<size_t, size_t>, EventAlignment> alignments;
  for (size_t i = 0; i < ids.size(); ++i) {
    for (size_t j = i + 1; j < ids.size(); ++j) {
      EventAlignment a =
          Align(store, events[i], events[j], vectors, options.sim_threshold);
      report.pairwise.push_back(
          {ids[i], ids[j], a,
           Unaligned(store, ids[i], events[i], ids[j], events[j], a)});
      alignments[{i, j}] = std::move(a);
    }
  }
  report.commonalities = CommonGroups(store, ids, events, alignments);
  for (const std::string& id : ids) report.starts[id] = NarrativeStart(store, id);
  return report;
}

nlohmann::json ComparisonReport::ToJson(const NarrativeStore& store) const {
  Json pairs = Json::array();
  for (const Pairwise& p : pairwise) {
    Json aligned = Json::array();
    for (const AlignedPair& a : p.alignment.pairs) {
      aligned.push_back({{"basis", AlignmentBasisName(a.basis)},
                         {"first", a.first},
                         {"first_label", store.event(a.first).label},
                         {"score", a.score},
                         {"second", a.second},
                         {"second_label", store.event(a.second).label}});
    }
    Json u1 = Json::array(), u2 = Json::array();
    for (const UniqueEvent& u : p.differences.unique_to_first) u1.push_back(UniqueJson(u));
    for (const UniqueEvent& u : p.differences.unique_to_second) u2.push_back(UniqueJson(u));
    pairs.push_back({{"aligned", aligned},
                     {"first", p.first},
                     {"second", p.second},
                     {"unique_to_first", u1},
                     {"unique_to_second", u2}});
  }
  Json groups = Json::array();
  for (const EventGroup& g : commonalities) {
    Json members = Json::array();
    for (const GroupMember& m : g) members.push_back(MemberJson(m));
    groups.push_back(members);
  }
  Json start_json = Json::object();
  for (const auto& [id, start] : starts) {
    if (start) {
      start_json[id] = {{"event", *start}, {"label", store.event(*start).label}};
    } else {
      start_json[id] = nullptr;
    }
  }
  return {{"commonalities", groups},
          {"flatten", options.flatten},
          {"narratives", narratives},
          {"pairwise", pairs},
          {"sim_threshold", options.sim_threshold},
          {"starts", start_json}};
}

}  // namespace narrative

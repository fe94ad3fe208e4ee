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

#ifndef NARRATIVE_MODEL_H_
#define NARRATIVE_MODEL_H_

#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "narrative/time_spec.h"

namespace narrative {

// ---------------------------------------------------------------------------
// Relation vocabulary.

enum class RelationCategory { kTemporal, kContingency, kAssociation };

std::string_view RelationCategoryName(RelationCategory category);
std::optional<RelationCategory> ParseRelationCategory(std::string_view name);

// Categories strictly implied by `category`: a causal link is also temporal
// and associative, a temporal link is associative, and nothing implies
// contingency.
std::set<RelationCategory> CategoryImplications(RelationCategory category);

// Which endpoint of a narrative edge happened first, when the predicate says.
enum class TemporalDirection { kNone, kSourceFirst, kTargetFirst };

std::string_view TemporalDirectionName(TemporalDirection direction);
std::optional<TemporalDirection> ParseTemporalDirection(std::string_view name);

struct RelationPredicate {
  std::string label;
  RelationCategory category = RelationCategory::kAssociation;
  TemporalDirection direction = TemporalDirection::kNone;

  bool operator==(const RelationPredicate&) const = default;
};

// Narrative predicates (event -> event, categorized) and factual relation
// labels (roles and properties on event/entity -> entity/literal edges).
class RelationRegistry {
 public:
  // before/after/during, caused by/lead to/has effect, associated with,
  // association, happened after; plus a small set of factual role labels.
  static RelationRegistry Default();

  // Re-registering an identical predicate is a no-op; a conflicting
  // definition throws DuplicateId.
  void AddNarrativePredicate(const RelationPredicate& predicate);
  void AddFactualRelation(const std::string& label);

  const RelationPredicate* FindPredicate(std::string_view label) const;
  bool IsFactualRelation(std::string_view label) const;

  const std::map<std::string, RelationPredicate, std::less<>>& predicates()
      const {
    return predicates_;
  }
  const std::set<std::string, std::less<>>& factual_relations() const {
    return factual_;
  }

  bool operator==(const RelationRegistry&) const = default;

 private:
  std::map<std::string, RelationPredicate, std::less<>> predicates_;
  std::set<std::string, std::less<>> factual_;
};

// ---------------------------------------------------------------------------
// Nodes.

struct EntityRef {
  std::string id;
  std::string label;
  std::optional<std::string> kg_id;

  bool operator==(const EntityRef&) const = default;
};

struct DateLiteral {
  Date date;
  Granularity granularity = Granularity::kDay;

  bool operator==(const DateLiteral&) const = default;
};

struct Literal {
  std::string id;
  std::variant<std::string, double, DateLiteral> value;

  bool operator==(const Literal&) const = default;
};

struct Participant {
  std::string entity_id;
  std::string role;

  bool operator==(const Participant&) const = default;
};

// Where an event was read: a document and the byte span of the source
// sentence in its body, when it could be located.
struct Provenance {
  std::string document_id;
  std::optional<size_t> begin;
  std::optional<size_t> end;

  auto operator<=>(const Provenance&) const = default;
  bool operator==(const Provenance&) const = default;
};

// ---------------------------------------------------------------------------
// Bindings to an event-centric knowledge graph.

enum class BindingKind { kDirect, kIndirect, kNone };

std::string_view BindingKindName(BindingKind kind);
std::optional<BindingKind> ParseBindingKind(std::string_view name);

struct KgCandidate {
  std::string kg_id;
  std::string kg_label;
  std::string description;
  TimeSpec time;
  double score = 0.0;
  // The label, alias or section title that produced the score.
  std::string matched_text;

  bool operator==(const KgCandidate&) const = default;
};

struct KgTriple {
  std::string subject;
  std::string predicate;
  std::string object;
  // Viewpoint that asserts the triple, for attributions.
  std::optional<std::string> attribution;

  bool operator==(const KgTriple&) const = default;
};

// Local stand-in for an event that has no counterpart in the graph. Never
// exported to the graph.
struct VirtualSubgraph {
  std::string label;
  TimeSpec time;
  std::string inferred_type;
  std::vector<Participant> participants;
  std::vector<std::string> member_events;
  bool exportable = false;

  bool operator==(const VirtualSubgraph&) const = default;
};

struct BindingResult {
  BindingKind kind = BindingKind::kNone;
  std::optional<std::string> kg_id;
  std::string note;
  std::optional<VirtualSubgraph> virtual_subgraph;
  double confidence = 0.0;
  std::vector<KgCandidate> candidates;
  std::vector<KgTriple> imported;

  bool operator==(const BindingResult&) const = default;
};

struct EventNode {
  std::string id;
  std::string label;
  TimeSpec time;
  std::optional<std::string> event_type;
  std::vector<Participant> participants;
  // Entity or literal id.
  std::optional<std::string> location;
  std::vector<Provenance> provenance;
  std::optional<BindingResult> binding;

  bool operator==(const EventNode&) const = default;
};

// ---------------------------------------------------------------------------
// Narratives and viewpoints.

struct FactualEdge {
  std::string source;
  std::string relation;
  std::string target;

  bool operator==(const FactualEdge&) const = default;
};

struct NarrativeEdge {
  std::string source;
  std::string predicate;
  std::string target;

  bool operator==(const NarrativeEdge&) const = default;
};

struct Narrative {
  std::string id;
  std::string narrator;
  // Member node ids in insertion order.
  std::vector<std::string> events;
  std::vector<std::string> entities;
  std::vector<std::string> literals;
  std::vector<FactualEdge> factual_edges;
  std::vector<NarrativeEdge> narrative_edges;
  // Recursive nodes: event id -> child narrative id.
  std::map<std::string, std::string> eta;

  bool HasEvent(std::string_view event_id) const;
  bool operator==(const Narrative&) const = default;
};

enum class Stance { kValid, kInvalid };
enum class StanceOutcome { kValid, kInvalid, kUndetermined };

std::string_view StanceName(Stance stance);
std::optional<Stance> ParseStance(std::string_view name);
std::string_view StanceOutcomeName(StanceOutcome outcome);

struct Viewpoint {
  std::string id;
  std::set<std::string> members;
  std::optional<std::string> parent;
  std::map<std::string, Stance> stances;

  bool operator==(const Viewpoint&) const = default;
};

enum class NodeKind { kEvent, kEntity, kLiteral };

struct Violation {
  enum class Severity { kError, kWarning };

  Severity severity = Severity::kError;
  std::string code;
  std::string message;
  std::vector<std::string> subjects;

  bool operator==(const Violation&) const = default;
};

// Owns every narrative, node, viewpoint and the relation vocabulary. Node
// tables are store-wide so one event may belong to several narratives.
class NarrativeStore {
 public:
  NarrativeStore();
  explicit NarrativeStore(RelationRegistry registry);

  RelationRegistry& registry() { return registry_; }
  const RelationRegistry& registry() const { return registry_; }

  // Viewpoints ---------------------------------------------------------------
  // Parent, when given, must already exist, which keeps the hierarchy a
  // forest.
  void AddViewpoint(Viewpoint viewpoint);
  void SetStance(const std::string& viewpoint_id, const std::string& claim_id,
                 Stance stance);
  bool HasViewpoint(std::string_view id) const;
  const Viewpoint& viewpoint(std::string_view id) const;
  const std::map<std::string, Viewpoint, std::less<>>& viewpoints() const {
    return viewpoints_;
  }

  // True iff the two viewpoints share an ancestor (inclusive) in the group
  // hierarchy.
  bool ViewpointCompatible(std::string_view a, std::string_view b) const;
  // Strict majority of the stances the given viewpoints hold on `claim_id`.
  StanceOutcome AggregateStance(const std::vector<std::string>& group,
                                std::string_view claim_id) const;

  // Narratives ---------------------------------------------------------------
  // Creates an empty narrative told by `narrator`. `id_hint` is made unique
  // by suffixing; with `exact` set, a taken id throws DuplicateId instead.
  std::string CreateNarrative(const std::string& narrator,
                              const std::string& id_hint, bool exact = false);
  bool HasNarrative(std::string_view id) const;
  const Narrative& narrative(std::string_view id) const;
  const std::map<std::string, Narrative, std::less<>>& narratives() const {
    return narratives_;
  }

  // Nodes --------------------------------------------------------------------
  // Adds the node to the store and to the narrative. An empty id is replaced
  // by a generated one. Re-adding an existing id with identical content
  // shares the node; different content throws DuplicateId.
  std::string AddEvent(std::string_view narrative_id, EventNode event);
  std::string AddEntity(std::string_view narrative_id, EntityRef entity);
  std::string AddLiteral(std::string_view narrative_id, Literal literal);

  std::optional<NodeKind> KindOf(std::string_view node_id) const;
  const EventNode& event(std::string_view id) const;
  const EntityRef& entity(std::string_view id) const;
  const Literal& literal(std::string_view id) const;
  const std::map<std::string, EventNode, std::less<>>& events() const {
    return events_;
  }
  const std::map<std::string, EntityRef, std::less<>>& entities() const {
    return entities_;
  }
  const std::map<std::string, Literal, std::less<>>& literals() const {
    return literals_;
  }

  // Replaces the binding annotation; the only mutation allowed on an event
  // after insertion.
  void SetBinding(std::string_view event_id,
                  std::optional<BindingResult> binding);

  // Edges --------------------------------------------------------------------
  void AddNarrativeEdge(std::string_view narrative_id, std::string_view source,
                        std::string_view predicate, std::string_view target);
  void AddFactualEdge(std::string_view narrative_id, std::string_view source,
                      std::string_view relation, std::string_view target);

  // Recursion ----------------------------------------------------------------
  void SetEta(std::string_view narrative_id, std::string_view event_id,
              std::string_view child_narrative_id);
  // Child narrative of a recursive node, nullptr for a leaf.
  const Narrative* Eta(std::string_view event_id,
                       std::string_view narrative_id) const;
  // True if `to` is reachable from `from` by following eta (including
  // from == to).
  bool EtaReaches(std::string_view from, std::string_view to) const;
  // `root` followed by every narrative reachable through eta, each once, in
  // depth-first preorder.
  std::vector<std::string> EtaClosure(std::string_view root) const;

  // Validation ---------------------------------------------------------------
  std::vector<Violation> ValidateNarrative(std::string_view narrative_id) const;
  // Checks a narrative graph against this store's nodes and vocabulary
  // without requiring it to be a member; used for imported or hand-built
  // graphs before they are committed.
  std::vector<Violation> ValidateGraph(const Narrative& narrative) const;
  // All narratives plus store-wide cross references and eta acyclicity.
  std::vector<Violation> ValidateStore() const;

  friend bool operator==(const NarrativeStore& a, const NarrativeStore& b);

 private:
  Narrative& MutableNarrative(std::string_view id);
  std::string NewEventId(const Narrative& narrative) const;
  std::string NewNodeId(const Narrative& narrative, std::string_view tag,
                        size_t base) const;
  void CheckNewNodeId(std::string_view id) const;

  RelationRegistry registry_;
  std::map<std::string, Viewpoint, std::less<>> viewpoints_;
  std::map<std::string, Narrative, std::less<>> narratives_;
  std::map<std::string, EventNode, std::less<>> events_;
  std::map<std::string, EntityRef, std::less<>> entities_;
  std::map<std::string, Literal, std::less<>> literals_;
};

// Many readers, one writer. Callers pass a function that receives the store.
class SharedStore {
 public:
  SharedStore() = default;
  explicit SharedStore(NarrativeStore store) : store_(std::move(store)) {}

  template <typename Fn>
  auto Read(Fn&& fn) const {
    std::shared_lock lock(mutex_);
    return fn(static_cast<const NarrativeStore&>(store_));
  }

  template <typename Fn>
  auto Write(Fn&& fn) {
    std::unique_lock lock(mutex_);
    return fn(store_);
  }

 private:
  mutable std::shared_mutex mutex_;
  NarrativeStore store_;
};

}  // namespace narrative

#endif  // NARRATIVE_MODEL_H_

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

#include "narrative/model.h"

#include <algorithm>
#include <cmath>
#include <functional>

#include "narrative/error.h"

namespace narrative {
namespace {

template <typename Map>
const typename Map::mapped_type* Find(const Map& map, std::string_view key) {
  auto it = map.find(key);
  return it == map.end() ? nullptr : &it->second;
}

Violation MakeError(std::string code, std::string message,
                    std::vector<std::string> subjects) {
  return {Violation::Severity::kError, std::move(code), std::move(message),
          std::move(subjects)};
}

}  // namespace

// ---------------------------------------------------------------------------
// Vocabulary.

std::string_view RelationCategoryName(RelationCategory category) {
  switch (category) {
    case RelationCategory::kTemporal: return "Temporal";
    case RelationCategory::kContingency: return "Contingency";
    case RelationCategory::kAssociation: return "Association";
  }
  return "Association";
}

std::optional<RelationCategory> ParseRelationCategory(std::string_view name) {
  for (auto c : {RelationCategory::kTemporal, RelationCategory::kContingency,
                 RelationCategory::kAssociation}) {
    if (RelationCategoryName(c) == name) return c;
  }
  return std::nullopt;
}

std::set<RelationCategory> CategoryImplications(RelationCategory category) {
  switch (category) {
    case RelationCategory::kContingency:
      return {RelationCategory::kTemporal, RelationCategory::kAssociation};
    case RelationCategory::kTemporal:
      return {RelationCategory::kAssociation};
    case RelationCategory::kAssociation:
      return {};
  }
  return {};
}

std::string_view TemporalDirectionName(TemporalDirection direction) {
  switch (direction) {
    case TemporalDirection::kNone: return "none";
    case TemporalDirection::kSourceFirst: return "source-first";
    case TemporalDirection::kTargetFirst: return "target-first";
  }
  return "none";
}

std::optional<TemporalDirection> ParseTemporalDirection(std::string_view name) {
  for (auto d : {TemporalDirection::kNone, TemporalDirection::kSourceFirst,
                 TemporalDirection::kTargetFirst}) {
    if (TemporalDirectionName(d) == name) return d;
  }
  return std::nullopt;
}

RelationRegistry RelationRegistry::Default() {
  using C = RelationCategory;
  using D = TemporalDirection;
  RelationRegistry registry;
  const RelationPredicate defaults[] = {
      {"before", C::kTemporal, D::kSourceFirst},
      {"after", C::kTemporal, D::kTargetFirst},
      {"during", C::kTemporal, D::kNone},
      {"happened after", C::kTemporal, D::kTargetFirst},
      {"caused by", C::kContingency, D::kTargetFirst},
      {"lead to", C::kContingency, D::kSourceFirst},
      {"has effect", C::kContingency, D::kSourceFirst},
      {"associated with", C::kAssociation, D::kNone},
      {"association", C::kAssociation, D::kNone},
  };
  for (const auto& p : defaults) registry.AddNarrativePredicate(p);
  for (const char* label : {"participant", "agent", "target", "location",
                            "point in time", "has type", "label"}) {
    registry.AddFactualRelation(label);
  }
  return registry;
}

void RelationRegistry::AddNarrativePredicate(
    const RelationPredicate& predicate) {
  if (predicate.label.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty predicate label");
  }
  if (factual_.count(predicate.label) > 0) {
    throw Error(ErrorCode::kDuplicateId,
                "label already registered as factual: " + predicate.label);
  }
  auto [it, inserted] = predicates_.emplace(predicate.label, predicate);
  if (!inserted && !(it->second == predicate)) {
    throw Error(ErrorCode::kDuplicateId,
                "predicate registered with a different definition: " +
                    predicate.label);
  }
}

void RelationRegistry::AddFactualRelation(const std::string& label) {
  if (label.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty relation label");
  }
  if (predicates_.count(label) > 0) {
    throw Error(ErrorCode::kDuplicateId,
                "label already registered as narrative predicate: " + label);
  }
  factual_.insert(label);
}

const RelationPredicate* RelationRegistry::FindPredicate(
    std::string_view label) const {
  return Find(predicates_, label);
}

bool RelationRegistry::IsFactualRelation(std::string_view label) const {
  return factual_.find(label) != factual_.end();
}

// ---------------------------------------------------------------------------
// Small enums.

std::string_view BindingKindName(BindingKind kind) {
  switch (kind) {
    case BindingKind::kDirect: return "direct";
    case BindingKind::kIndirect: return "indirect";
    case BindingKind::kNone: return "none";
  }
  return "none";
}

std::optional<BindingKind> ParseBindingKind(std::string_view name) {
  for (auto k : {BindingKind::kDirect, BindingKind::kIndirect,
                 BindingKind::kNone}) {
    if (BindingKindName(k) == name) return k;
  }
  return std::nullopt;
}

std::string_view StanceName(Stance stance) {
  return stance == Stance::kValid ? "valid" : "invalid";
}

std::optional<Stance> ParseStance(std::string_view name) {
  if (name == "valid") return Stance::kValid;
  if (name == "invalid") return Stance::kInvalid;
  return std::nullopt;
}

std::string_view StanceOutcomeName(StanceOutcome outcome) {
  switch (outcome) {
    case StanceOutcome::kValid: return "valid";
    case StanceOutcome::kInvalid: return "invalid";
    case StanceOutcome::kUndetermined: return "undetermined";
  }
  return "undetermined";
}

bool Narrative::HasEvent(std::string_view event_id) const {
  return std::find(events.begin(), events.end(), event_id) != events.end();
}

// ---------------------------------------------------------------------------
// Store.

NarrativeStore::NarrativeStore() : registry_(RelationRegistry::Default()) {}

NarrativeStore::NarrativeStore(RelationRegistry registry)
    : registry_(std::move(registry)) {}

void NarrativeStore::AddViewpoint(Viewpoint viewpoint) {
  if (viewpoint.id.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty viewpoint id");
  }
  if (viewpoints_.count(viewpoint.id) > 0) {
    throw Error(ErrorCode::kDuplicateId, "viewpoint exists: " + viewpoint.id);
  }
  if (viewpoint.parent && !HasViewpoint(*viewpoint.parent)) {
    throw Error(ErrorCode::kUnknownViewpoint,
                "parent viewpoint not found: " + *viewpoint.parent);
  }
  const std::string id = viewpoint.id;
  viewpoints_.emplace(id, std::move(viewpoint));
}

void NarrativeStore::SetStance(const std::string& viewpoint_id,
                               const std::string& claim_id, Stance stance) {
  auto it = viewpoints_.find(viewpoint_id);
  if (it == viewpoints_.end()) {
    throw Error(ErrorCode::kUnknownViewpoint, viewpoint_id);
  }
  it->second.stances[claim_id] = stance;
}

bool NarrativeStore::HasViewpoint(std::string_view id) const {
  return viewpoints_.find(id) != viewpoints_.end();
}

const Viewpoint& NarrativeStore::viewpoint(std::string_view id) const {
  const Viewpoint* v = Find(viewpoints_, id);
  if (v == nullptr) throw Error(ErrorCode::kUnknownViewpoint, std::string(id));
  return *v;
}

bool NarrativeStore::ViewpointCompatible(std::string_view a,
                                         std::string_view b) const {
  std::set<std::string, std::less<>> ancestors;
  for (const Viewpoint* v = &viewpoint(a); v != nullptr;
       v = v->parent ? &viewpoint(*v->parent) : nullptr) {
    ancestors.insert(v->id);
  }
  for (const Viewpoint* v = &viewpoint(b); v != nullptr;
       v = v->parent ? &viewpoint(*v->parent) : nullptr) {
    if (ancestors.count(v->id) > 0) return true;
  }
  return false;
}

StanceOutcome NarrativeStore::AggregateStance(
    const std::vector<std::string>& group, std::string_view claim_id) const {
  int valid = 0;
  int invalid = 0;
  for (const std::string& id : group) {
    const Viewpoint& v = viewpoint(id);
    auto it = v.stances.find(std::string(claim_id));
    if (it == v.stances.end()) continue;
    (it->second == Stance::kValid ? valid : invalid) += 1;
  }
  if (valid > invalid) return StanceOutcome::kValid;
  if (invalid > valid) return StanceOutcome::kInvalid;
  return StanceOutcome::kUndetermined;
}

std::string NarrativeStore::CreateNarrative(const std::string& narrator,
                                            const std::string& id_hint,
                                            bool exact) {
  if (!HasViewpoint(narrator)) {
    throw Error(ErrorCode::kUnknownViewpoint, "narrator " + narrator);
  }
  const std::string base = id_hint.empty() ? "narrative" : id_hint;
  std::string id = base;
  if (HasNarrative(id)) {
    if (exact) throw Error(ErrorCode::kDuplicateId, "narrative " + id);
    for (int suffix = 2; HasNarrative(id); ++suffix) {
      id = base + "-" + std::to_string(suffix);
    }
  }
  Narrative n;
  n.id = id;
  n.narrator = narrator;
  narratives_.emplace(id, std::move(n));
  return id;
}

bool NarrativeStore::HasNarrative(std::string_view id) const {
  return narratives_.find(id) != narratives_.end();
}

const Narrative& NarrativeStore::narrative(std::string_view id) const {
  const Narrative* n = Find(narratives_, id);
  if (n == nullptr) throw Error(ErrorCode::kMissingNarrative, std::string(id));
  return *n;
}

Narrative& NarrativeStore::MutableNarrative(std::string_view id) {
  auto it = narratives_.find(id);
  if (it == narratives_.end()) {
    throw Error(ErrorCode::kMissingNarrative, std::string(id));
  }
  return it->second;
}

std::string NarrativeStore::NewNodeId(const Narrative& narrative,
                                      std::string_view tag,
                                      size_t base) const {
  for (size_t k = base + 1;; ++k) {
    std::string id = narrative.id + "/" + std::string(tag) + std::to_string(k);
    if (!KindOf(id)) return id;
  }
}

std::string NarrativeStore::NewEventId(const Narrative& narrative) const {
  return NewNodeId(narrative, "e", narrative.events.size());
}

void NarrativeStore::CheckNewNodeId(std::string_view id) const {
  if (KindOf(id)) {
    throw Error(ErrorCode::kDuplicateId, "node id in use: " + std::string(id));
  }
}

std::optional<NodeKind> NarrativeStore::KindOf(std::string_view node_id) const {
  if (events_.find(node_id) != events_.end()) return NodeKind::kEvent;
  if (entities_.find(node_id) != entities_.end()) return NodeKind::kEntity;
  if (literals_.find(node_id) != literals_.end()) return NodeKind::kLiteral;
  return std::nullopt;
}

std::string NarrativeStore::AddEvent(std::string_view narrative_id,
                                     EventNode event) {
  Narrative& n = MutableNarrative(narrative_id);
  if (event.label.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "event label is empty");
  }
  for (const Participant& p : event.participants) {
    if (!registry_.IsFactualRelation(p.role)) {
      throw Error(ErrorCode::kUnknownPredicate, "participant role " + p.role);
    }
    if (entities_.find(p.entity_id) == entities_.end()) {
      throw Error(ErrorCode::kMissingNode, "participant " + p.entity_id);
    }
  }
  if (event.location) {
    const auto kind = KindOf(*event.location);
    if (kind != NodeKind::kEntity && kind != NodeKind::kLiteral) {
      throw Error(ErrorCode::kMissingNode, "location " + *event.location);
    }
  }
  if (event.id.empty()) event.id = NewEventId(n);
  if (const EventNode* existing = Find(events_, event.id)) {
    if (!(*existing == event)) {
      throw Error(ErrorCode::kDuplicateId, "event id in use: " + event.id);
    }
  } else {
    CheckNewNodeId(event.id);
    events_.emplace(event.id, event);
  }
  if (!n.HasEvent(event.id)) n.events.push_back(event.id);
  return event.id;
}

std::string NarrativeStore::AddEntity(std::string_view narrative_id,
                                      EntityRef entity) {
  Narrative& n = MutableNarrative(narrative_id);
  if (entity.id.empty()) entity.id = NewNodeId(n, "p", n.entities.size());
  if (const EntityRef* existing = Find(entities_, entity.id)) {
    if (!(*existing == entity)) {
      throw Error(ErrorCode::kDuplicateId, "entity id in use: " + entity.id);
    }
  } else {
    CheckNewNodeId(entity.id);
    entities_.emplace(entity.id, entity);
  }
  if (std::find(n.entities.begin(), n.entities.end(), entity.id) ==
      n.entities.end()) {
    n.entities.push_back(entity.id);
  }
  return entity.id;
}

std::string NarrativeStore::AddLiteral(std::string_view narrative_id,
                                       Literal literal) {
  Narrative& n = MutableNarrative(narrative_id);
  if (const auto* d = std::get_if<double>(&literal.value);
      d != nullptr && !std::isfinite(*d)) {
    throw Error(ErrorCode::kInvalidArgument, "number literal is not finite");
  }
  if (literal.id.empty()) literal.id = NewNodeId(n, "l", n.literals.size());
  if (const Literal* existing = Find(literals_, literal.id)) {
    if (!(*existing == literal)) {
      throw Error(ErrorCode::kDuplicateId, "literal id in use: " + literal.id);
    }
  } else {
    CheckNewNodeId(literal.id);
    literals_.emplace(literal.id, literal);
  }
  if (std::find(n.literals.begin(), n.literals.end(), literal.id) ==
      n.literals.end()) {
    n.literals.push_back(literal.id);
  }
  return literal.id;
}

const EventNode& NarrativeStore::event(std::string_view id) const {
  const EventNode* e = Find(events_, id);
  if (e == nullptr) throw Error(ErrorCode::kMissingNode, std::string(id));
  return *e;
}

const EntityRef& NarrativeStore::entity(std::string_view id) const {
  const EntityRef* e = Find(entities_, id);
  if (e == nullptr) throw Error(ErrorCode::kMissingNode, std::string(id));
  return *e;
}

const Literal& NarrativeStore::literal(std::string_view id) const {
  const Literal* l = Find(literals_, id);
  if (l == nullptr) throw Error(ErrorCode::kMissingNode, std::string(id));
  return *l;
}

void NarrativeStore::SetBinding(std::string_view event_id,
                                std::optional<BindingResult> binding) {
  auto it = events_.find(event_id);
  if (it == events_.end()) {
    throw Error(ErrorCode::kMissingNode, std::string(event_id));
  }
  it->second.binding = std::move(binding);
}

void NarrativeStore::AddNarrativeEdge(std::string_view narrative_id,
                                      std::string_view source,
                                      std::string_view predicate,
                                      std::string_view target) {
  Narrative& n = MutableNarrative(narrative_id);
  if (registry_.FindPredicate(predicate) == nullptr) {
    throw Error(ErrorCode::kUnknownPredicate, std::string(predicate));
  }
  for (std::string_view endpoint : {source, target}) {
    const auto kind = KindOf(endpoint);
    const bool member =
        kind == NodeKind::kEvent ? n.HasEvent(endpoint) :
        kind == NodeKind::kEntity
            ? std::find(n.entities.begin(), n.entities.end(), endpoint) !=
                  n.entities.end()
            : std::find(n.literals.begin(), n.literals.end(), endpoint) !=
                  n.literals.end();
    if (!kind || !member) {
      throw Error(ErrorCode::kMissingNode, std::string(endpoint));
    }
    if (kind != NodeKind::kEvent) {
      throw Error(ErrorCode::kEndpointNotEvent, std::string(endpoint));
    }
  }
  if (source == target) {
    throw Error(ErrorCode::kSelfLoopRejected, std::string(source));
  }
  n.narrative_edges.push_back(
      {std::string(source), std::string(predicate), std::string(target)});
}

void NarrativeStore::AddFactualEdge(std::string_view narrative_id,
                                    std::string_view source,
                                    std::string_view relation,
                                    std::string_view target) {
  Narrative& n = MutableNarrative(narrative_id);
  if (!registry_.IsFactualRelation(relation)) {
    throw Error(ErrorCode::kUnknownPredicate, std::string(relation));
  }
  auto in_narrative = [&](std::string_view id, NodeKind kind) {
    switch (kind) {
      case NodeKind::kEvent: return n.HasEvent(id);
      case NodeKind::kEntity:
        return std::find(n.entities.begin(), n.entities.end(), id) !=
               n.entities.end();
      case NodeKind::kLiteral:
        return std::find(n.literals.begin(), n.literals.end(), id) !=
               n.literals.end();
    }
    return false;
  };
  const auto source_kind = KindOf(source);
  const auto target_kind = KindOf(target);
  if (!source_kind || !in_narrative(source, *source_kind)) {
    throw Error(ErrorCode::kMissingNode, std::string(source));
  }
  if (!target_kind || !in_narrative(target, *target_kind)) {
    throw Error(ErrorCode::kMissingNode, std::string(target));
  }
  if (*source_kind == NodeKind::kLiteral) {
    throw Error(ErrorCode::kInvalidArgument,
                "factual edge cannot start at a literal");
  }
  if (*target_kind == NodeKind::kEvent) {
    throw Error(ErrorCode::kInvalidArgument,
                "factual edge cannot target an event");
  }
  n.factual_edges.push_back(
      {std::string(source), std::string(relation), std::string(target)});
}

void NarrativeStore::SetEta(std::string_view narrative_id,
                            std::string_view event_id,
                            std::string_view child_narrative_id) {
  Narrative& n = MutableNarrative(narrative_id);
  if (!n.HasEvent(event_id)) {
    throw Error(ErrorCode::kMissingNode,
                std::string(event_id) + " in " + std::string(narrative_id));
  }
  if (!HasNarrative(child_narrative_id)) {
    throw Error(ErrorCode::kMissingNarrative, std::string(child_narrative_id));
  }
  if (EtaReaches(child_narrative_id, narrative_id)) {
    throw Error(ErrorCode::kCycleDetected,
                std::string(child_narrative_id) + " reaches " +
                    std::string(narrative_id));
  }
  n.eta[std::string(event_id)] = std::string(child_narrative_id);
}

const Narrative* NarrativeStore::Eta(std::string_view event_id,
                                     std::string_view narrative_id) const {
  const Narrative& n = narrative(narrative_id);
  if (!n.HasEvent(event_id)) {
    throw Error(ErrorCode::kMissingNode,
                std::string(event_id) + " in " + std::string(narrative_id));
  }
  auto it = n.eta.find(std::string(event_id));
  if (it == n.eta.end()) return nullptr;
  return &narrative(it->second);
}

bool NarrativeStore::EtaReaches(std::string_view from,
                                std::string_view to) const {
  std::set<std::string, std::less<>> seen;
  std::vector<std::string> stack{std::string(from)};
  while (!stack.empty()) {
    std::string current = std::move(stack.back());
    stack.pop_back();
    if (current == to) return true;
    if (!seen.insert(current).second) continue;
    const Narrative* n = Find(narratives_, current);
    if (n == nullptr) continue;
    for (const auto& [event, child] : n->eta) stack.push_back(child);
  }
  return false;
}

std::vector<std::string> NarrativeStore::EtaClosure(
    std::string_view root) const {
  narrative(root);
  std::vector<std::string> order;
  std::set<std::string, std::less<>> seen;
  std::function<void(const std::string&)> visit = [&](const std::string& id) {
    if (!seen.insert(id).second) return;
    order.push_back(id);
    const Narrative& n = narrative(id);
    // Children in event order so the walk follows the narrative.
    for (const std::string& event : n.events) {
      auto it = n.eta.find(event);
      if (it != n.eta.end()) visit(it->second);
    }
  };
  visit(std::string(root));
  return order;
}

std::vector<Violation> NarrativeStore::ValidateNarrative(
    std::string_view narrative_id) const {
  return ValidateGraph(narrative(narrative_id));
}

std::vector<Violation> NarrativeStore::ValidateGraph(const Narrative& n) const {
  std::vector<Violation> out;

  if (!HasViewpoint(n.narrator)) {
    out.push_back(MakeError("unknown-narrator",
                            "narrator viewpoint does not exist", {n.narrator}));
  }
  for (const std::string& id : n.events) {
    const EventNode* e = Find(events_, id);
    if (e == nullptr) {
      out.push_back(MakeError("missing-node", "event not in store", {id}));
      continue;
    }
    if (e->label.empty()) {
      out.push_back(MakeError("empty-label", "event label is empty", {id}));
    }
    for (const std::string& problem : e->time.Validate()) {
      out.push_back(MakeError("time-invalid", problem, {id}));
    }
    for (const Participant& p : e->participants) {
      if (!registry_.IsFactualRelation(p.role)) {
        out.push_back(MakeError("participant-role",
                                "role not a factual relation: " + p.role,
                                {id, p.entity_id}));
      }
    }
  }
  for (const NarrativeEdge& edge : n.narrative_edges) {
    if (registry_.FindPredicate(edge.predicate) == nullptr) {
      out.push_back(MakeError("unknown-predicate",
                              "narrative predicate not registered: " +
                                  edge.predicate,
                              {edge.source, edge.target}));
    }
    for (const std::string& end : {edge.source, edge.target}) {
      if (KindOf(end) != NodeKind::kEvent || !n.HasEvent(end)) {
        out.push_back(MakeError("R_N-endpoint",
                                "narrative edge endpoint is not an event of "
                                "this narrative",
                                {end}));
      }
    }
  }
  for (const FactualEdge& edge : n.factual_edges) {
    if (!registry_.IsFactualRelation(edge.relation)) {
      out.push_back(MakeError("unknown-relation",
                              "factual relation not registered: " +
                                  edge.relation,
                              {edge.source, edge.target}));
    }
    const auto source_kind = KindOf(edge.source);
    const auto target_kind = KindOf(edge.target);
    if (!source_kind || !target_kind ||
        *source_kind == NodeKind::kLiteral ||
        *target_kind == NodeKind::kEvent) {
      out.push_back(MakeError("R_F-endpoint",
                              "factual edge must connect an event or entity "
                              "to an entity or literal",
                              {edge.source, edge.target}));
    }
  }
  for (const auto& [event_id, child_id] : n.eta) {
    if (!n.HasEvent(event_id)) {
      out.push_back(MakeError("eta-key", "recursive node not in narrative",
                              {event_id}));
    }
    const Narrative* child = Find(narratives_, child_id);
    if (child == nullptr) {
      out.push_back(MakeError("eta-target", "child narrative does not exist",
                              {event_id, child_id}));
      continue;
    }
    const EventNode* parent = Find(events_, event_id);
    if (parent == nullptr ||
        (parent->time.kind != TimeKind::kInterval &&
         parent->time.kind != TimeKind::kYear) ||
        !parent->time.Range()) {
      continue;
    }
    for (const std::string& sub_id : child->events) {
      const EventNode* sub = Find(events_, sub_id);
      if (sub == nullptr || !sub->time.Range()) continue;
      if (!Contains(parent->time, sub->time)) {
        out.push_back({Violation::Severity::kWarning, "time-containment",
                       "sub-event " + FormatTimeSpec(sub->time) +
                           " lies outside " + FormatTimeSpec(parent->time),
                       {event_id, sub_id}});
      }
    }
  }
  return out;
}

std::vector<Violation> NarrativeStore::ValidateStore() const {
  std::vector<Violation> out;
  for (const auto& [id, v] : viewpoints_) {
    if (v.parent && !HasViewpoint(*v.parent)) {
      out.push_back(MakeError("viewpoint-parent", "parent does not exist",
                              {id, *v.parent}));
    }
  }
  // Parent links form a forest: walking up never revisits a node.
  for (const auto& [id, v] : viewpoints_) {
    std::set<std::string> seen;
    const Viewpoint* cur = &v;
    while (cur != nullptr && cur->parent) {
      if (!seen.insert(cur->id).second) {
        out.push_back(MakeError("viewpoint-cycle", "hierarchy has a cycle",
                                {id}));
        break;
      }
      cur = Find(viewpoints_, *cur->parent);
    }
  }
  for (const auto& [id, n] : narratives_) {
    auto violations = ValidateNarrative(id);
    out.insert(out.end(), violations.begin(), violations.end());
  }
  // Eta acyclicity by colored DFS.
  std::map<std::string, int, std::less<>> color;
  std::function<bool(const std::string&)> has_back_edge =
      [&](const std::string& id) {
        color[id] = 1;
        const Narrative* n = Find(narratives_, id);
        if (n != nullptr) {
          for (const auto& [event, child] : n->eta) {
            const int c = color[child];
            if (c == 1) return true;
            if (c == 0 && has_back_edge(child)) return true;
          }
        }
        color[id] = 2;
        return false;
      };
  for (const auto& [id, n] : narratives_) {
    if (color[id] == 0 && has_back_edge(id)) {
      out.push_back(MakeError("eta-cycle", "eta graph has a cycle", {id}));
      break;
    }
  }
  return out;
}

bool operator==(const NarrativeStore& a, const NarrativeStore& b) {
  return a.registry_ == b.registry_ && a.viewpoints_ == b.viewpoints_ &&
         a.narratives_ == b.narratives_ && a.events_ == b.events_ &&
         a.entities_ == b.entities_ && a.literals_ == b.literals_;
}

}  // namespace narrative

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

#include "narrative/serialization.h"

#include <algorithm>
#include <set>

#include "narrative/error.h"

namespace narrative {
namespace {

Json OptionalString(const std::optional<std::string>& value) {
  return value ? Json(*value) : Json(nullptr);
}

std::optional<std::string> ReadOptionalString(const Json& json,
                                              const char* key) {
  const Json& v = json.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<std::string>();
}

Json OptionalSize(const std::optional<size_t>& value) {
  return value ? Json(*value) : Json(nullptr);
}

std::optional<size_t> ReadOptionalSize(const Json& json, const char* key) {
  const Json& v = json.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<size_t>();
}

Json ParticipantsToJson(const std::vector<Participant>& participants) {
  Json out = Json::array();
  for (const Participant& p : participants) {
    out.push_back({{"entity", p.entity_id}, {"role", p.role}});
  }
  return out;
}

std::vector<Participant> ParticipantsFromJson(const Json& json) {
  std::vector<Participant> out;
  for (const Json& p : json) {
    out.push_back({p.at("entity").get<std::string>(),
                   p.at("role").get<std::string>()});
  }
  return out;
}

Json EntityToJson(const EntityRef& entity) {
  return {{"id", entity.id},
          {"kg_id", OptionalString(entity.kg_id)},
          {"label", entity.label}};
}

EntityRef EntityFromJson(const Json& json) {
  return {json.at("id").get<std::string>(), json.at("label").get<std::string>(),
          ReadOptionalString(json, "kg_id")};
}

Json LiteralToJson(const Literal& literal) {
  Json out = {{"id", literal.id}};
  if (const auto* s = std::get_if<std::string>(&literal.value)) {
    out["type"] = "string";
    out["value"] = *s;
  } else if (const auto* d = std::get_if<double>(&literal.value)) {
    out["type"] = "number";
    out["value"] = *d;
  } else {
    const auto& date = std::get<DateLiteral>(literal.value);
    out["type"] = "date";
    out["value"] = FormatIsoDate(date.date, date.granularity);
    out["granularity"] = GranularityName(date.granularity);
  }
  return out;
}

Literal LiteralFromJson(const Json& json) {
  Literal literal;
  literal.id = json.at("id").get<std::string>();
  const std::string type = json.at("type").get<std::string>();
  if (type == "string") {
    literal.value = json.at("value").get<std::string>();
  } else if (type == "number") {
    literal.value = json.at("value").get<double>();
  } else if (type == "date") {
    const auto parsed = ParseIsoDate(json.at("value").get<std::string>());
    const auto granularity =
        ParseGranularity(json.at("granularity").get<std::string>());
    if (!parsed || !granularity) {
      throw Error(ErrorCode::kParseError, "bad date literal " + literal.id);
    }
    literal.value = DateLiteral{parsed->first, *granularity};
  } else {
    throw Error(ErrorCode::kParseError, "unknown literal type " + type);
  }
  return literal;
}

Json TripleToJson(const KgTriple& t) {
  return {{"attribution", OptionalString(t.attribution)},
          {"object", t.object},
          {"predicate", t.predicate},
          {"subject", t.subject}};
}

KgTriple TripleFromJson(const Json& json) {
  return {json.at("subject").get<std::string>(),
          json.at("predicate").get<std::string>(),
          json.at("object").get<std::string>(),
          ReadOptionalString(json, "attribution")};
}

Json VirtualToJson(const VirtualSubgraph& v) {
  return {{"exportable", v.exportable},
          {"inferred_type", v.inferred_type},
          {"label", v.label},
          {"member_events", v.member_events},
          {"participants", ParticipantsToJson(v.participants)},
          {"time", TimeSpecToJson(v.time)}};
}

VirtualSubgraph VirtualFromJson(const Json& json) {
  VirtualSubgraph v;
  v.exportable = json.at("exportable").get<bool>();
  v.inferred_type = json.at("inferred_type").get<std::string>();
  v.label = json.at("label").get<std::string>();
  v.member_events = json.at("member_events").get<std::vector<std::string>>();
  v.participants = ParticipantsFromJson(json.at("participants"));
  v.time = TimeSpecFromJson(json.at("time"));
  return v;
}

Json NarrativeToJson(const NarrativeStore& store, const Narrative& n) {
  Json events = Json::array();
  for (const std::string& id : n.events) events.push_back(EventToJson(store.event(id)));
  Json entities = Json::array();
  for (const std::string& id : n.entities) {
    entities.push_back(EntityToJson(store.entity(id)));
  }
  Json literals = Json::array();
  for (const std::string& id : n.literals) {
    literals.push_back(LiteralToJson(store.literal(id)));
  }
  Json factual = Json::array();
  for (const FactualEdge& e : n.factual_edges) {
    factual.push_back(
        {{"relation", e.relation}, {"source", e.source}, {"target", e.target}});
  }
  Json narrative_edges = Json::array();
  for (const NarrativeEdge& e : n.narrative_edges) {
    const RelationPredicate* p = store.registry().FindPredicate(e.predicate);
    narrative_edges.push_back(
        {{"category",
          p ? Json(RelationCategoryName(p->category)) : Json(nullptr)},
         {"predicate", e.predicate},
         {"source", e.source},
         {"target", e.target}});
  }
  Json eta = Json::object();
  for (const auto& [event, child] : n.eta) eta[event] = child;
  return {{"entities", entities},
          {"eta", eta},
          {"events", events},
          {"factual_edges", factual},
          {"id", n.id},
          {"literals", literals},
          {"narrative_edges", narrative_edges},
          {"narrator", n.narrator}};
}

Json RelationsToJson(const RelationRegistry& registry) {
  Json out = Json::array();
  for (const auto& label : registry.factual_relations()) {
    out.push_back({{"kind", "factual"}, {"label", label}});
  }
  for (const auto& [label, p] : registry.predicates()) {
    out.push_back({{"category", RelationCategoryName(p.category)},
                   {"direction", TemporalDirectionName(p.direction)},
                   {"kind", "narrative"},
                   {"label", label}});
  }
  return out;
}

Json ViewpointToJson(const Viewpoint& v) {
  Json stances = Json::object();
  for (const auto& [claim, stance] : v.stances) {
    stances[claim] = StanceName(stance);
  }
  return {{"id", v.id},
          {"members", v.members},
          {"parent", OptionalString(v.parent)},
          {"stances", stances}};
}

Json StoreSubsetToJson(const NarrativeStore& store,
                       const std::set<std::string>& narrative_ids) {
  Json narratives = Json::array();
  for (const std::string& id : narrative_ids) {
    narratives.push_back(NarrativeToJson(store, store.narrative(id)));
  }
  Json viewpoints = Json::array();
  for (const auto& [id, v] : store.viewpoints()) {
    viewpoints.push_back(ViewpointToJson(v));
  }
  return {{"narratives", narratives},
          {"relations", RelationsToJson(store.registry())},
          {"viewpoints", viewpoints}};
}

}  // namespace

Json TimeSpecToJson(const TimeSpec& time) {
  auto date = [&](const std::optional<Date>& d) {
    return d ? Json(FormatIsoDate(*d, time.granularity)) : Json(nullptr);
  };
  return {{"end", date(time.end)},
          {"granularity", GranularityName(time.granularity)},
          {"kind", TimeKindName(time.kind)},
          {"start", date(time.start)}};
}

TimeSpec TimeSpecFromJson(const Json& json) {
  TimeSpec time;
  const auto kind = ParseTimeKind(json.at("kind").get<std::string>());
  const auto granularity =
      ParseGranularity(json.at("granularity").get<std::string>());
  if (!kind || !granularity) {
    throw Error(ErrorCode::kParseError, "bad time spec " + json.dump());
  }
  time.kind = *kind;
  time.granularity = *granularity;
  auto date = [&](const char* key) -> std::optional<Date> {
    const Json& v = json.at(key);
    if (v.is_null()) return std::nullopt;
    const auto parsed = ParseIsoDate(v.get<std::string>());
    if (!parsed) throw Error(ErrorCode::kParseError, "bad date " + v.dump());
    return parsed->first;
  };
  time.start = date("start");
  time.end = date("end");
  return time;
}

Json CandidateToJson(const KgCandidate& c) {
  return {{"description", c.description},
          {"kg_id", c.kg_id},
          {"kg_label", c.kg_label},
          {"matched_text", c.matched_text},
          {"score", c.score},
          {"time", TimeSpecToJson(c.time)}};
}

KgCandidate CandidateFromJson(const Json& json) {
  KgCandidate c;
  c.description = json.at("description").get<std::string>();
  c.kg_id = json.at("kg_id").get<std::string>();
  c.kg_label = json.at("kg_label").get<std::string>();
  c.matched_text = json.at("matched_text").get<std::string>();
  c.score = json.at("score").get<double>();
  c.time = TimeSpecFromJson(json.at("time"));
  return c;
}

Json BindingToJson(const BindingResult& b) {
  Json candidates = Json::array();
  for (const KgCandidate& c : b.candidates) candidates.push_back(CandidateToJson(c));
  Json imported = Json::array();
  for (const KgTriple& t : b.imported) imported.push_back(TripleToJson(t));
  return {{"candidates", candidates},
          {"confidence", b.confidence},
          {"imported", imported},
          {"kg_id", OptionalString(b.kg_id)},
          {"kind", BindingKindName(b.kind)},
          {"note", b.note},
          {"virtual_subgraph", b.virtual_subgraph
                                   ? VirtualToJson(*b.virtual_subgraph)
                                   : Json(nullptr)}};
}

BindingResult BindingFromJson(const Json& json) {
  BindingResult b;
  const auto kind = ParseBindingKind(json.at("kind").get<std::string>());
  if (!kind) throw Error(ErrorCode::kParseError, "bad binding kind");
  b.kind = *kind;
  b.kg_id = ReadOptionalString(json, "kg_id");
  b.note = json.at("note").get<std::string>();
  b.confidence = json.at("confidence").get<double>();
  for (const Json& c : json.at("candidates")) {
    b.candidates.push_back(CandidateFromJson(c));
  }
  for (const Json& t : json.at("imported")) {
    b.imported.push_back(TripleFromJson(t));
  }
  if (!json.at("virtual_subgraph").is_null()) {
    b.virtual_subgraph = VirtualFromJson(json.at("virtual_subgraph"));
  }
  return b;
}

Json EventToJson(const EventNode& e) {
  Json provenance = Json::array();
  for (const Provenance& p : e.provenance) {
    provenance.push_back({{"begin", OptionalSize(p.begin)},
                          {"document", p.document_id},
                          {"end", OptionalSize(p.end)}});
  }
  return {{"binding", e.binding ? BindingToJson(*e.binding) : Json(nullptr)},
          {"event_type", OptionalString(e.event_type)},
          {"id", e.id},
          {"label", e.label},
          {"location", OptionalString(e.location)},
          {"participants", ParticipantsToJson(e.participants)},
          {"provenance", provenance},
          {"time", TimeSpecToJson(e.time)}};
}

EventNode EventFromJson(const Json& json) {
  EventNode e;
  e.id = json.at("id").get<std::string>();
  e.label = json.at("label").get<std::string>();
  e.time = TimeSpecFromJson(json.at("time"));
  e.event_type = ReadOptionalString(json, "event_type");
  e.participants = ParticipantsFromJson(json.at("participants"));
  e.location = ReadOptionalString(json, "location");
  for (const Json& p : json.at("provenance")) {
    e.provenance.push_back({p.at("document").get<std::string>(),
                            ReadOptionalSize(p, "begin"),
                            ReadOptionalSize(p, "end")});
  }
  if (!json.at("binding").is_null()) {
    e.binding = BindingFromJson(json.at("binding"));
  }
  return e;
}

Json ViolationToJson(const Violation& v) {
  return {{"code", v.code},
          {"message", v.message},
          {"severity",
           v.severity == Violation::Severity::kError ? "error" : "warning"},
          {"subjects", v.subjects}};
}

Json StoreToJson(const NarrativeStore& store) {
  std::set<std::string> ids;
  for (const auto& [id, n] : store.narratives()) ids.insert(id);
  return StoreSubsetToJson(store, ids);
}

NarrativeStore WithoutNarratives(const NarrativeStore& store,
                                 const std::set<std::string>& removed) {
  std::set<std::string> kept;
  for (const auto& [id, n] : store.narratives()) {
    if (!removed.count(id)) kept.insert(id);
  }
  return StoreFromJson(StoreSubsetToJson(store, kept));
}

Json NarrativesToJson(const NarrativeStore& store,
                      const std::vector<std::string>& roots) {
  std::set<std::string> ids;
  for (const std::string& root : roots) {
    for (const std::string& id : store.EtaClosure(root)) ids.insert(id);
  }
  return StoreSubsetToJson(store, ids);
}

NarrativeStore StoreFromJson(const Json& json) try {
  RelationRegistry registry;
  for (const Json& r : json.at("relations")) {
    const std::string kind = r.at("kind").get<std::string>();
    const std::string label = r.at("label").get<std::string>();
    if (kind == "factual") {
      registry.AddFactualRelation(label);
    } else if (kind == "narrative") {
      const auto category =
          ParseRelationCategory(r.at("category").get<std::string>());
      const auto direction =
          ParseTemporalDirection(r.at("direction").get<std::string>());
      if (!category || !direction) {
        throw Error(ErrorCode::kParseError, "bad relation " + label);
      }
      registry.AddNarrativePredicate({label, *category, *direction});
    } else {
      throw Error(ErrorCode::kParseError, "unknown relation kind " + kind);
    }
  }
  NarrativeStore store(std::move(registry));

  // Parents before children.
  std::vector<Viewpoint> pending;
  for (const Json& v : json.at("viewpoints")) {
    Viewpoint vp;
    vp.id = v.at("id").get<std::string>();
    vp.members = v.at("members").get<std::set<std::string>>();
    vp.parent = ReadOptionalString(v, "parent");
    for (const auto& [claim, stance] : v.at("stances").items()) {
      const auto s = ParseStance(stance.get<std::string>());
      if (!s) throw Error(ErrorCode::kParseError, "bad stance " + claim);
      vp.stances[claim] = *s;
    }
    pending.push_back(std::move(vp));
  }
  while (!pending.empty()) {
    const size_t before = pending.size();
    for (auto it = pending.begin(); it != pending.end();) {
      if (!it->parent || store.HasViewpoint(*it->parent)) {
        store.AddViewpoint(std::move(*it));
        it = pending.erase(it);
      } else {
        ++it;
      }
    }
    if (pending.size() == before) {
      throw Error(ErrorCode::kParseError,
                  "viewpoint hierarchy has a cycle or a missing parent");
    }
  }

  const Json& narratives = json.at("narratives");
  for (const Json& n : narratives) {
    store.CreateNarrative(n.at("narrator").get<std::string>(),
                          n.at("id").get<std::string>(), /*exact=*/true);
  }
  for (const Json& n : narratives) {
    const std::string id = n.at("id").get<std::string>();
    for (const Json& e : n.at("entities")) store.AddEntity(id, EntityFromJson(e));
    for (const Json& l : n.at("literals")) store.AddLiteral(id, LiteralFromJson(l));
  }
  for (const Json& n : narratives) {
    const std::string id = n.at("id").get<std::string>();
    for (const Json& e : n.at("events")) store.AddEvent(id, EventFromJson(e));
  }
  for (const Json& n : narratives) {
    const std::string id = n.at("id").get<std::string>();
    for (const Json& e : n.at("factual_edges")) {
      store.AddFactualEdge(id, e.at("source").get<std::string>(),
                           e.at("relation").get<std::string>(),
                           e.at("target").get<std::string>());
    }
    for (const Json& e : n.at("narrative_edges")) {
      store.AddNarrativeEdge(id, e.at("source").get<std::string>(),
                             e.at("predicate").get<std::string>(),
                             e.at("target").get<std::string>());
    }
  }
  for (const Json& n : narratives) {
    const std::string id = n.at("id").get<std::string>();
    for (const auto& [event, child] : n.at("eta").items()) {
      store.SetEta(id, event, child.get<std::string>());
    }
  }
  return store;
} catch (const Json::exception& e) {
  throw Error(ErrorCode::kParseError, e.what());
}

std::string CanonicalDump(const Json& json) { return json.dump(2) + "\n"; }

std::string SerializeStore(const NarrativeStore& store) {
  return CanonicalDump(StoreToJson(store));
}

NarrativeStore DeserializeStore(std::string_view text) {
  Json json;
  try {
    json = Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  return StoreFromJson(json);
}

std::string SerializeNarratives(const NarrativeStore& store,
                                const std::vector<std::string>& roots) {
  return CanonicalDump(NarrativesToJson(store, roots));
}

}  // namespace narrative

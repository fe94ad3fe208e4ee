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

#include "narrative/binder.h"

#include <gtest/gtest.h>
#include <httplib.h>

#include <deque>
#include <set>
#include <thread>

#include "narrative/error.h"
#include "narrative/serialization.h"
#include "support/kremlin_fixture.h"
#include "support/random_store.h"
#include "support/test_paths.h"

namespace narrative {
namespace {

using testing::BuildKremlinNarrative;
using testing::DataPath;
using testing::KremlinExpectedBindings;

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

struct KremlinKg {
  std::unique_ptr<SnapshotSource> source =
      SnapshotSource::FromFile(DataPath("kremlin/kg_snapshot.json"));
  std::unique_ptr<FixtureEmbeddingBackend> embedder =
      FixtureEmbeddingBackend::FromFile(DataPath("kremlin/embeddings.json"));
};

KgCandidate Cand(const std::string& id, double score) {
  return {id, id + " label", "", TimeSpec::Unknown(), score, id + " label"};
}

TEST(BindingThresholdsTest, Validate) {
  BindingThresholds ok;
  EXPECT_NO_THROW(ok.Validate());
  BindingThresholds inverted;
  inverted.indirect = 0.95;
  EXPECT_EQ(CodeOf([&] { inverted.Validate(); }), ErrorCode::kInvalidThreshold);
  BindingThresholds floor_high;
  floor_high.candidate_floor = 0.7;
  EXPECT_EQ(CodeOf([&] { floor_high.Validate(); }), ErrorCode::kInvalidThreshold);
  BindingThresholds negative_gap;
  negative_gap.gap = -0.01;
  EXPECT_EQ(CodeOf([&] { negative_gap.Validate(); }),
            ErrorCode::kInvalidThreshold);
}

TEST(ClassifyBindingTest, DirectNeedsScoreAndGap) {
  const BindingThresholds th;
  const auto r = ClassifyBinding("x", TimeSpec::Unknown(),
                                 {Cand("Q1", 0.95), Cand("Q2", 0.70)}, th);
  EXPECT_EQ(r.kind, BindingKind::kDirect);
  EXPECT_EQ(r.kg_id, "Q1");
  EXPECT_DOUBLE_EQ(r.confidence, 0.95);
  EXPECT_TRUE(r.note.empty());

  const auto close = ClassifyBinding("x", TimeSpec::Unknown(),
                                     {Cand("Q1", 0.95), Cand("Q2", 0.93)}, th);
  EXPECT_EQ(close.kind, BindingKind::kIndirect);
  EXPECT_EQ(close.kg_id, "Q1");
  EXPECT_NE(close.note.find("ambiguous"), std::string::npos);
  EXPECT_NE(close.note.find("Q2"), std::string::npos);
}

TEST(ClassifyBindingTest, IndirectBand) {
  const BindingThresholds th;
  const auto r = ClassifyBinding("x", TimeSpec::Unknown(), {Cand("Q1", 0.75)}, th);
  EXPECT_EQ(r.kind, BindingKind::kIndirect);
  EXPECT_EQ(r.kg_id, "Q1");
  EXPECT_FALSE(r.note.empty());
  EXPECT_FALSE(r.virtual_subgraph.has_value());
  // Exactly at the threshold counts.
  EXPECT_EQ(ClassifyBinding("x", TimeSpec::Unknown(), {Cand("Q1", 0.60)}, th).kind,
            BindingKind::kIndirect);
  EXPECT_EQ(ClassifyBinding("x", TimeSpec::Unknown(), {Cand("Q1", 0.90)}, th).kind,
            BindingKind::kDirect);
}

TEST(ClassifyBindingTest, NoneCarriesVirtualSubgraph) {
  const BindingThresholds th;
  const auto r = ClassifyBinding("Redivision", TimeSpec::Year(2000),
                                 {Cand("Q1", 0.59)}, th);
  EXPECT_EQ(r.kind, BindingKind::kNone);
  EXPECT_FALSE(r.kg_id.has_value());
  ASSERT_TRUE(r.virtual_subgraph.has_value());
  EXPECT_EQ(r.virtual_subgraph->label, "Redivision");
  EXPECT_EQ(r.virtual_subgraph->time, TimeSpec::Year(2000));
  EXPECT_FALSE(r.virtual_subgraph->exportable);
  EXPECT_EQ(r.candidates.size(), 1u);

  const auto empty = ClassifyBinding("y", TimeSpec::Unknown(), {}, th);
  EXPECT_EQ(empty.kind, BindingKind::kNone);
  EXPECT_DOUBLE_EQ(empty.confidence, 1.0);
}

TEST(SearchCandidatesTest, ScoresLabelAliasAndTime) {
  KremlinKg kg;
  const BindingThresholds th;
  // Alias match; the label ties with it and comes first. The time bonus
  // is clamped away.
  auto c = SearchCandidates(*kg.source, "Invasion of Iraq", TimeSpec::Month(2003, 3),
                            kg.embedder.get(), th);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].kg_id, "Q107802");
  EXPECT_EQ(c[0].matched_text, "2003 invasion of Iraq");
  EXPECT_DOUBLE_EQ(c[0].score, 1.0);

  // 0.75 cosine, plus the bonus only when the times overlap.
  c = SearchCandidates(*kg.source, "Belgrade Invasion", TimeSpec::Year(1999),
                       kg.embedder.get(), th);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_NEAR(c[0].score, 0.80, 1e-5);
  c = SearchCandidates(*kg.source, "Belgrade Invasion", TimeSpec::Year(2005),
                       kg.embedder.get(), th);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_NEAR(c[0].score, 0.75, 1e-5);
  c = SearchCandidates(*kg.source, "Belgrade Invasion", TimeSpec::Unknown(),
                       kg.embedder.get(), th);
  EXPECT_NEAR(c[0].score, 0.75, 1e-5);
}

TEST(SearchCandidatesTest, FloorSortAndLimit) {
  KremlinKg kg;
  BindingThresholds th;
  // Leans 0.4 on two entities: 0.45 each with the bonus, tie broken by id.
  auto c = SearchCandidates(*kg.source, "Special Military Operation in Ukraine",
                            TimeSpec::Day(2022, 2, 24), kg.embedder.get(), th);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].kg_id, "Q111012552");
  EXPECT_EQ(c[1].kg_id, "Q111013915");
  EXPECT_NEAR(c[0].score, 0.45, 1e-5);
  th.max_candidates = 1;
  c = SearchCandidates(*kg.source, "Special Military Operation in Ukraine",
                       TimeSpec::Day(2022, 2, 24), kg.embedder.get(), th);
  EXPECT_EQ(c.size(), 1u);
  th = BindingThresholds{};
  th.candidate_floor = 0.5;
  c = SearchCandidates(*kg.source, "Special Military Operation in Ukraine",
                       TimeSpec::Day(2022, 2, 24), kg.embedder.get(), th);
  EXPECT_TRUE(c.empty());
}

TEST(SearchCandidatesTest, GibberishFindsNothing) {
  KremlinKg kg;
  EXPECT_TRUE(SearchCandidates(*kg.source, "Xyzzy Frobnicate Quux",
                               TimeSpec::Unknown(), kg.embedder.get(), {})
                  .empty());
  EXPECT_EQ(CodeOf([&] {
              SearchCandidates(*kg.source, "  ", TimeSpec::Unknown(),
                               kg.embedder.get(), {});
            }),
            ErrorCode::kInvalidArgument);
}

TEST(SearchCandidatesTest, SectionTitlesAreDiscounted) {
  std::map<std::string, KgEntity> entities;
  entities["Q1"] = {"Q1", "Operation Allied Force", {}, "", TimeSpec::Unknown(),
                    {}, {}, {"Bombing of Belgrade"}, {}};
  SnapshotSource source(std::move(entities));
  // Edit similarity path: exact section title scores 1.0 * 0.85.
  const auto c = SearchCandidates(source, "Bombing of Belgrade",
                                  TimeSpec::Unknown(), nullptr, {});
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].matched_text, "Bombing of Belgrade");
  EXPECT_NEAR(c[0].score, 0.85, 1e-12);
  EXPECT_EQ(ClassifyBinding("Bombing of Belgrade", TimeSpec::Unknown(), c, {}).kind,
            BindingKind::kIndirect);
}

TEST(SearchCandidatesTest, EditSimilarityWithoutEmbedder) {
  KremlinKg kg;
  const auto c = SearchCandidates(*kg.source, "iraq war", TimeSpec::Unknown(),
                                  nullptr, {});
  ASSERT_FALSE(c.empty());
  EXPECT_EQ(c[0].kg_id, "Q545449");
  EXPECT_DOUBLE_EQ(c[0].score, 1.0);
  EXPECT_DOUBLE_EQ(LabelSimilarity("Iraq War", "IRAQ WAR", nullptr), 1.0);
  EXPECT_LT(LabelSimilarity("Iraq War", "Battle of Chernihiv", nullptr), 0.35);
}

TEST(SnapshotSourceTest, ParsesTimesAndLinks) {
  KremlinKg kg;
  EXPECT_EQ(kg.source->entities().size(), 8u);
  const auto war = kg.source->Entity("Q545449");
  ASSERT_TRUE(war.has_value());
  EXPECT_EQ(war->time, TimeSpec::FromRange({2003, 3, 20}, {2011, 12, 18}));
  EXPECT_EQ(war->has_parts, std::vector<std::string>{"Q107802"});
  EXPECT_EQ(kg.source->Entity("Q1639325")->time, TimeSpec::Day(2003, 2, 5));
  EXPECT_EQ(kg.source->Entity("Q112127201")->time,
            TimeSpec::FromRange({1999, 1, 1}, {2020, 12, 31}));
  EXPECT_FALSE(kg.source->Entity("Q42").has_value());
  EXPECT_EQ(CodeOf([] { SnapshotSource::FromJson("{\"entities\": 3}"); }),
            ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] {
              SnapshotSource::FromJson(
                  R"({"entities": {"Q1": {"label": "x", "time": "2003-13"}}})");
            }),
            ErrorCode::kParseError);
}

TEST(BindNarrativeTest, KremlinAgreement) {
  auto f = BuildKremlinNarrative();
  KremlinKg kg;
  const BindingReport report =
      BindNarrative(f.store, f.root, *kg.source, kg.embedder.get());
  const auto expected = KremlinExpectedBindings();
  ASSERT_EQ(report.bindings.size(), expected.size());
  for (const auto& [label, want] : expected) {
    SCOPED_TRACE(label);
    const std::string& eid = f.ids.at(label);
    const BindingResult& got = report.bindings.at(eid);
    EXPECT_EQ(got.kind, want.kind);
    if (want.kind == BindingKind::kNone) {
      EXPECT_FALSE(got.kg_id.has_value());
      EXPECT_TRUE(got.virtual_subgraph.has_value());
    } else {
      EXPECT_EQ(got.kg_id, want.kg_id);
    }
    ASSERT_TRUE(f.store.event(eid).binding.has_value());
    EXPECT_EQ(*f.store.event(eid).binding, got);
  }
  EXPECT_EQ(report.visited,
            (std::vector<std::string>{f.root, f.redivision, f.iraq_war}));
  EXPECT_FALSE(report.bindings.at(f.ids.at("Belgrade Invasion")).note.empty());
  EXPECT_TRUE(report.ambiguities.empty());
}

TEST(BindNarrativeTest, KremlinNoneNodesKeepTheirChildren) {
  auto f = BuildKremlinNarrative();
  KremlinKg kg;
  const auto report = BindNarrative(f.store, f.root, *kg.source, kg.embedder.get());
  const auto& v =
      report.bindings.at(f.ids.at("Redivision of the World")).virtual_subgraph;
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(v->member_events, f.store.narrative(f.redivision).events);
  EXPECT_EQ(v->member_events.size(), 3u);

  const VirtualSubgraph again =
      MaterializeVirtual(f.store, f.root, f.ids.at("Redivision of the World"));
  EXPECT_EQ(again, *v);
  EXPECT_EQ(MaterializeVirtual(f.store, f.root,
                               f.ids.at("Collapse of the Soviet Union"))
                .member_events.size(),
            0u);
  EXPECT_EQ(CodeOf([&] {
              MaterializeVirtual(f.store, f.redivision, f.ids.at("Iraq War"));
            }),
            ErrorCode::kAlreadyBound);
  EXPECT_EQ(CodeOf([&] {
              MaterializeVirtual(f.store, "nope", f.ids.at("Iraq War"));
            }),
            ErrorCode::kMissingNarrative);
}

TEST(BindNarrativeTest, OnlyBindingsChange) {
  auto f = BuildKremlinNarrative();
  const NarrativeStore before = f.store;
  KremlinKg kg;
  BindNarrative(f.store, f.root, *kg.source, kg.embedder.get());
  NarrativeStore stripped = f.store;
  for (const auto& [id, e] : f.store.events()) stripped.SetBinding(id, std::nullopt);
  EXPECT_TRUE(stripped == before);
  EXPECT_TRUE(f.store.ValidateStore().empty());
}

TEST(BindNarrativeTest, Idempotent) {
  auto f = BuildKremlinNarrative();
  KremlinKg kg;
  const auto first = BindNarrative(f.store, f.root, *kg.source, kg.embedder.get());
  const std::string once = SerializeStore(f.store);
  const auto second = BindNarrative(f.store, f.root, *kg.source, kg.embedder.get());
  EXPECT_EQ(SerializeStore(f.store), once);
  EXPECT_EQ(first.ToJson(), second.ToJson());
}

TEST(BindNarrativeTest, ImportsAreGatedByViewpoint) {
  auto f = BuildKremlinNarrative();
  KremlinKg kg;
  const auto report = BindNarrative(f.store, f.root, *kg.source, kg.embedder.get());
  const auto& imported = report.bindings.at(f.ids.at("Iraq War")).imported;
  std::set<std::string> objects;
  for (const KgTriple& t : imported) {
    EXPECT_EQ(t.subject, "Q545449");
    objects.insert(t.object);
  }
  EXPECT_TRUE(objects.count("Iraq War"));
  EXPECT_TRUE(objects.count("Q107802"));
  EXPECT_TRUE(objects.count("United States"));
  // RU is an ancestor of the narrator; US is not even in the store.
  EXPECT_TRUE(objects.count("war of aggression"));
  EXPECT_FALSE(objects.count("war of liberation"));

  auto g = BuildKremlinNarrative();
  BindOptions no_import;
  no_import.import_triples = false;
  const auto bare =
      BindNarrative(g.store, g.root, *kg.source, kg.embedder.get(), no_import);
  EXPECT_TRUE(bare.bindings.at(g.ids.at("Iraq War")).imported.empty());
  // None bindings never import.
  EXPECT_TRUE(report.bindings.at(f.ids.at("War in Libya")).imported.empty());
}

TEST(BindNarrativeTest, KremlinIraqWarChildrenStartBeforeTheWar) {
  // The Powell address precedes the entity's start date, so the node is
  // flagged; the entity has no enclosing parent to suggest.
  auto f = BuildKremlinNarrative();
  KremlinKg kg;
  const auto report = BindNarrative(f.store, f.root, *kg.source, kg.embedder.get());
  ASSERT_EQ(report.recursive_flags.size(), 1u);
  const RecursiveNodeFlag& flag = report.recursive_flags[0];
  EXPECT_EQ(flag.narrative_id, f.redivision);
  EXPECT_EQ(flag.event_id, f.ids.at("Iraq War"));
  EXPECT_EQ(flag.kg_id, "Q545449");
  EXPECT_FALSE(flag.suggested_kg_id.has_value());
}

TEST(BindNarrativeTest, RecursiveFlagSuggestsEnclosingEntity) {
  NarrativeStore s;
  s.AddViewpoint({"US", {}, std::nullopt, {}});
  const std::string root = s.CreateNarrative("US", "root");
  const std::string child = s.CreateNarrative("US", "invasion");
  EventNode inv;
  inv.label = "Invasion of Iraq";
  inv.time = TimeSpec::Year(2003);
  const std::string node = s.AddEvent(root, inv);
  for (int year : {2004, 2007}) {
    EventNode e;
    e.label = "Xyzzy Frobnicate Quux";
    e.time = TimeSpec::Year(year);
    s.AddEvent(child, e);
  }
  s.SetEta(root, node, child);
  KremlinKg kg;
  const auto report = BindNarrative(s, root, *kg.source, kg.embedder.get());
  EXPECT_EQ(report.bindings.at(node).kg_id, "Q107802");
  ASSERT_EQ(report.recursive_flags.size(), 1u);
  EXPECT_EQ(report.recursive_flags[0].suggested_kg_id, "Q545449");
  EXPECT_NE(report.recursive_flags[0].note.find("Q107802"), std::string::npos);
}

TEST(BindNarrativeTest, AmbiguousFallujah) {
  NarrativeStore s;
  s.AddViewpoint({"US", {}, std::nullopt, {}});
  const std::string nid = s.CreateNarrative("US", "fallujah");
  EventNode e;
  e.label = "US and Iraqi Forces Launch Offensives in Fallujah, 2004";
  e.time = TimeSpec::Year(2004);
  const std::string eid = s.AddEvent(nid, e);
  auto source = SnapshotSource::FromFile(DataPath("fallujah/kg_snapshot.json"));
  auto embedder =
      FixtureEmbeddingBackend::FromFile(DataPath("fallujah/embeddings.json"));
  const auto report = BindNarrative(s, nid, *source, embedder.get());
  const BindingResult& r = report.bindings.at(eid);
  EXPECT_EQ(r.kind, BindingKind::kIndirect);
  EXPECT_NE(r.note.find("ambiguous"), std::string::npos);
  ASSERT_EQ(report.ambiguities.size(), 1u);
  const AmbiguityEntry& a = report.ambiguities[0];
  EXPECT_EQ(a.event_id, eid);
  ASSERT_EQ(a.candidates.size(), 2u);
  EXPECT_EQ((std::set<std::string>{a.candidates[0].kg_id, a.candidates[1].kg_id}),
            (std::set<std::string>{"fixture:first-fallujah",
                                   "fixture:second-fallujah"}));
  // One year, no verbs on the left of "and": not a compound label.
  EXPECT_TRUE(report.compound_labels.empty());
}

TEST(CompoundLabelTest, Heuristic) {
  EXPECT_TRUE(CompoundLabelReason("Baghdad Falls in 2003 and Saddam Captured in 2003")
                  .has_value());
  EXPECT_TRUE(CompoundLabelReason("Invasion (2003) and Withdrawal (2011)").has_value());
  EXPECT_FALSE(
      CompoundLabelReason("Coalition launches offensive and insurgents seize Fallujah")
          .has_value());
  EXPECT_TRUE(
      CompoundLabelReason("Coalition launches offensive and insurgents take Fallujah")
          .has_value());
  EXPECT_FALSE(CompoundLabelReason("US and Iraqi Forces Launch Offensives").has_value());
  EXPECT_FALSE(CompoundLabelReason("Collapse of the Soviet Union").has_value());
  EXPECT_FALSE(CompoundLabelReason("Iraq War 2003 2003").has_value());
}

TEST(BindNarrativeTest, ReportsCompoundLabels) {
  NarrativeStore s;
  s.AddViewpoint({"US", {}, std::nullopt, {}});
  const std::string nid = s.CreateNarrative("US", "n");
  EventNode e;
  e.label = "Invasion (2003) and Withdrawal (2011)";
  const std::string eid = s.AddEvent(nid, e);
  KremlinKg kg;
  const auto report = BindNarrative(s, nid, *kg.source, nullptr);
  ASSERT_EQ(report.compound_labels.size(), 1u);
  EXPECT_EQ(report.compound_labels[0].event_id, eid);
  EXPECT_EQ(report.ToJson()["compound_labels"][0]["event"], eid);
}

TEST(BindNarrativeTest, Errors) {
  auto f = BuildKremlinNarrative();
  KremlinKg kg;
  EXPECT_EQ(CodeOf([&] { BindNarrative(f.store, "missing", *kg.source, nullptr); }),
            ErrorCode::kMissingNarrative);
  BindOptions bad;
  bad.thresholds.direct = 1.5;
  EXPECT_EQ(CodeOf([&] { BindNarrative(f.store, f.root, *kg.source, nullptr, bad); }),
            ErrorCode::kInvalidThreshold);
  // Embedding fixture without the label and no fallback.
  NarrativeStore s;
  s.AddViewpoint({"US", {}, std::nullopt, {}});
  const std::string nid = s.CreateNarrative("US", "n");
  EventNode e;
  e.label = "not in the table";
  s.AddEvent(nid, e);
  EXPECT_EQ(CodeOf([&] { BindNarrative(s, nid, *kg.source, kg.embedder.get()); }),
            ErrorCode::kInvalidArgument);
}

// Independent closure over the eta maps.
std::set<std::string> Reachable(const NarrativeStore& s, const std::string& root) {
  std::set<std::string> seen = {root};
  std::deque<std::string> queue = {root};
  while (!queue.empty()) {
    const std::string n = queue.front();
    queue.pop_front();
    for (const auto& [event, child] : s.narrative(n).eta) {
      if (seen.insert(child).second) queue.push_back(child);
    }
  }
  return seen;
}

TEST(BindNarrativeTest, RandomEtaStructuresVisitEachNarrativeOnce) {
  std::map<std::string, KgEntity> entities;
  entities["Q1"] = {"Q1", "event 0.0", {}, "", TimeSpec::Unknown(), {}, {}, {}, {}};
  int rejected = 0;
  for (uint64_t seed = 1; seed <= 60; ++seed) {
    SCOPED_TRACE(seed);
    const int n = 1 + static_cast<int>(seed % 50);
    auto r = testing::RandomEtaStructure(seed, n);
    rejected += r.rejected_cycles;
    SnapshotSource source(entities);
    for (const auto& [root, narrative] : r.store.narratives()) {
      const size_t before = source.queries();
      const auto report = BindNarrative(r.store, root, source, nullptr);
      const std::set<std::string> visited(report.visited.begin(),
                                          report.visited.end());
      EXPECT_EQ(visited.size(), report.visited.size());
      EXPECT_EQ(visited, Reachable(r.store, root));
      EXPECT_EQ(report.visited.front(), root);
      size_t events = 0;
      for (const std::string& v : visited) events += r.store.narrative(v).events.size();
      EXPECT_EQ(report.bindings.size(), events);
      // One search per event: no narrative is bound twice.
      EXPECT_EQ(source.queries() - before, events);
    }
  }
  EXPECT_GT(rejected, 0);
}

// --- Live source against a local stand-in for the two APIs -------------------

std::string WikidataTimeClaim(const std::string& time) {
  return R"([{"mainsnak": {"datavalue": {"value": {"time": ")" + time +
         R"(", "precision": 11}}}}])";
}

class FakeWiki {
 public:
  FakeWiki() {
    server_.Get("/w/api.php", [this](const httplib::Request& req,
                                     httplib::Response& res) {
      ++hits_;
      if (fail_) {
        res.status = 500;
        return;
      }
      const std::string action = req.get_param_value("action");
      if (req.has_param("list")) {
        EXPECT_EQ(req.get_param_value("srsearch"), "Iraq War");
        res.set_content(
            R"js({"query": {"search": [{"title": "Iraq War"},
                                     {"title": "Invasion of Iraq"},
                                     {"title": "Iraq War (disambiguation)"}]}})js",
            "application/json");
      } else if (req.has_param("prop") && req.get_param_value("prop") == "pageprops") {
        res.set_content(
            R"js({"query": {
                 "redirects": [{"from": "Invasion of Iraq",
                                "to": "2003 invasion of Iraq"}],
                 "pages": {
                   "1": {"title": "Iraq War",
                         "pageprops": {"wikibase_item": "Q545449"}},
                   "2": {"title": "2003 invasion of Iraq",
                         "pageprops": {"wikibase_item": "Q107802"}},
                   "3": {"title": "Iraq War (disambiguation)"}}}})js",
            "application/json");
      } else if (action == "parse") {
        if (req.get_param_value("page") == "Iraq War") {
          res.set_content(R"({"parse": {"sections": [{"line": "Background"},
                                                      {"line": "Insurgency"}]}})",
                          "application/json");
        } else {
          res.status = 404;
        }
      } else {
        res.status = 400;
      }
    });
    server_.Get(R"(/entity/(Q\d+)\.json)", [this](const httplib::Request& req,
                                                  httplib::Response& res) {
      ++hits_;
      const std::string q = req.matches[1];
      if (q == "Q545449") {
        res.set_content(R"({"entities": {"Q545449": {
            "labels": {"en": {"value": "Iraq War"}},
            "aliases": {"en": [{"value": "Second Gulf War"}]},
            "descriptions": {"en": {"value": "war"}},
            "claims": {"P580": )" + WikidataTimeClaim("+2003-03-20T00:00:00Z") +
                            R"(, "P582": )" +
                            WikidataTimeClaim("+2011-12-18T00:00:00Z") +
                            R"(, "P527": [{"mainsnak": {"datavalue": {"value": {"id": "Q107802"}}}}]
            }}}})",
                        "application/json");
      } else if (q == "Q107802") {
        res.set_content(R"({"entities": {"Q107802": {
            "labels": {"en": {"value": "2003 invasion of Iraq"}},
            "claims": {"P585": )" + WikidataTimeClaim("+2003-03-20T00:00:00Z") +
                            R"(, "P361": [{"mainsnak": {"datavalue": {"value": {"id": "Q545449"}}}}]
            }}}})",
                        "application/json");
      } else {
        res.status = 404;
      }
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeWiki() {
    server_.stop();
    thread_.join();
  }
  LiveSource::Options options() const {
    LiveSource::Options o;
    const std::string base = "http://127.0.0.1:" + std::to_string(port_);
    o.wikipedia_api = base + "/w/api.php";
    o.wikidata_entity = base + "/entity/";
    o.max_retries = 1;
    o.timeout = std::chrono::milliseconds(5000);
    return o;
  }
  int hits() const { return hits_; }
  void set_fail(bool fail) { fail_ = fail; }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::atomic<int> hits_{0};
  std::atomic<bool> fail_{false};
};

TEST(LiveSourceTest, SearchPagepropsEntityAndSections) {
  FakeWiki wiki;
  testing::TempDir dir;
  ResponseCache cache(dir.path());
  LiveSource source(wiki.options(), cache);
  const auto entities = source.Lookup("Iraq War");
  ASSERT_EQ(entities.size(), 2u);
  EXPECT_EQ(entities[0].id, "Q545449");
  EXPECT_EQ(entities[0].label, "Iraq War");
  EXPECT_EQ(entities[0].aliases, std::vector<std::string>{"Second Gulf War"});
  EXPECT_EQ(entities[0].time, TimeSpec::FromRange({2003, 3, 20}, {2011, 12, 18}));
  EXPECT_EQ(entities[0].has_parts, std::vector<std::string>{"Q107802"});
  EXPECT_EQ(entities[0].sections,
            (std::vector<std::string>{"Background", "Insurgency"}));
  EXPECT_EQ(entities[1].id, "Q107802");
  EXPECT_EQ(entities[1].time, TimeSpec::Day(2003, 3, 20));
  EXPECT_EQ(entities[1].part_of, std::vector<std::string>{"Q545449"});
  // The search title came through a redirect and becomes an alias.
  EXPECT_EQ(entities[1].aliases, std::vector<std::string>{"Invasion of Iraq"});
  EXPECT_FALSE(source.Entity("Q999").has_value());
  EXPECT_FALSE(source.Entity("not-a-qid").has_value());

  const auto candidates =
      SearchCandidates(source, "Iraq War", TimeSpec::YearSpan(2003, 2011), nullptr, {});
  ASSERT_FALSE(candidates.empty());
  EXPECT_EQ(candidates[0].kg_id, "Q545449");
}

TEST(LiveSourceTest, CachedResponsesAreNotRequestedAgain) {
  FakeWiki wiki;
  testing::TempDir dir;
  ResponseCache cache(dir.path());
  std::vector<KgEntity> first;
  {
    LiveSource source(wiki.options(), cache);
    first = source.Lookup("Iraq War");
    EXPECT_GT(source.http_requests(), 0u);
  }
  const int hits = wiki.hits();
  wiki.set_fail(true);
  LiveSource again(wiki.options(), cache);
  EXPECT_EQ(again.Lookup("Iraq War"), first);
  EXPECT_EQ(again.http_requests(), 0u);
  EXPECT_EQ(wiki.hits(), hits);
}

TEST(LiveSourceTest, FailuresRaiseSourceUnavailable) {
  FakeWiki wiki;
  wiki.set_fail(true);
  testing::TempDir dir;
  ResponseCache cache(dir.path());
  LiveSource source(wiki.options(), cache);
  EXPECT_EQ(CodeOf([&] { source.Lookup("Iraq War"); }),
            ErrorCode::kSourceUnavailable);
  // One try plus one retry.
  EXPECT_EQ(source.http_requests(), 2u);
  EXPECT_EQ(cache.Stats().entries, 0u);

  LiveSource::Options closed = wiki.options();
  closed.wikipedia_api = "http://127.0.0.1:1/w/api.php";
  LiveSource refused(closed, cache);
  EXPECT_EQ(CodeOf([&] { refused.Lookup("Iraq War"); }),
            ErrorCode::kSourceUnavailable);
}

TEST(ParseWikidataEntityTest, MalformedIsSourceUnavailable) {
  EXPECT_EQ(CodeOf([] { ParseWikidataEntity("{}", "Q1"); }),
            ErrorCode::kSourceUnavailable);
  const KgEntity bare = ParseWikidataEntity(R"({"entities": {"Q1": {}}})", "Q1");
  EXPECT_EQ(bare.id, "Q1");
  EXPECT_FALSE(bare.time.known());
}

}  // namespace
}  // namespace narrative

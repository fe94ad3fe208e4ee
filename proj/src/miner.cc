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

#include "narrative/miner.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <thread>

#include "narrative/cluster_merge.h"
#include "narrative/error.h"
#include "narrative/text.h"

namespace narrative {
namespace {

using Clock = std::chrono::steady_clock;

struct DocumentOutcome {
  bool detected = false;
  std::optional<Timeline> timeline;
  std::optional<SkippedDocument> skipped;
  std::exception_ptr backend_error;
  std::vector<std::string> warnings;
};

DocumentOutcome ProcessDocument(const MineConfig& config, const Document& doc,
                                LlmContext ctx,
                                const std::string& parent_event) {
  DocumentOutcome out;
  std::string stage = "detect";
  try {
    std::optional<std::string> parent;
    if (!parent_event.empty()) parent = parent_event;
    if (!DetectEvent(ctx, doc, config.event_name, config.timespan, parent)) {
      return out;
    }
    out.detected = true;
    stage = "extract";
    const std::vector<std::string> sentences =
        ExtractTimelineRaw(ctx, doc, config.event_name, &out.warnings);
    stage = "label";
    const std::vector<LabeledEvent> labeled =
        LabelEvents(ctx, sentences, &out.warnings);
    stage = "verify";
    Timeline timeline{doc.id,
                      VerifyTimeline(ctx, labeled, doc, config.timespan)};
    if (!timeline.events.empty()) out.timeline = std::move(timeline);
  } catch (const Error& e) {
    out.skipped = SkippedDocument{
        doc.id, stage,
        std::string(ErrorCodeName(e.code())) + ": " + e.what()};
    if (IsBackendFailure(e.code())) out.backend_error = std::current_exception();
  }
  for (std::string& w : out.warnings) w = doc.id + ": " + w;
  return out;
}

Provenance Locate(const Document& doc, const std::string& sentence) {
  Provenance p{doc.id, std::nullopt, std::nullopt};
  const size_t at = sentence.empty() ? std::string::npos : doc.body.find(sentence);
  if (at != std::string::npos) {
    p.begin = at;
    p.end = at + sentence.size();
  }
  return p;
}

bool LabelExcluded(const std::string& label,
                   const std::vector<std::string>& excluded) {
  return std::any_of(excluded.begin(), excluded.end(),
                     [&](const std::string& x) {
                       return EqualsIgnoreCase(Trim(label), Trim(x));
                     });
}

std::string NarrativeHint(const std::string& viewpoint,
                          const std::string& event_name) {
  std::string slug = Slugify(event_name);
  if (slug.empty()) slug = "narrative";
  return viewpoint + "/" + slug;
}

// Runs the pipeline for one event and commits a non-empty result. Returns
// the narrative id, or nothing when no event survived. With `force`, an
// empty narrative is still created.
std::optional<std::string> MineOne(const MineConfig& config,
                                   NarrativeStore& store,
                                   const std::vector<Document>& documents,
                                   MiningBackends backends,
                                   const std::string& parent_event, int depth,
                                   const std::vector<std::string>& ancestors,
                                   bool force, MiningReport& report) {
  const auto started = Clock::now();
  report.event_name = config.event_name;
  report.viewpoint = config.viewpoint;
  report.parent_event = parent_event;
  report.depth = depth;

  const std::vector<Timeline> timelines =
      ExtractTimelines(config, documents, backends, parent_event, report);
  if (report.documents_detected == 0) {
    throw Error(ErrorCode::kNoDocumentsDetected,
                "no document of " + config.viewpoint + " is about " +
                    config.event_name);
  }

  NarrativeFragment fragment;
  if (!timelines.empty()) {
    const MatchResult match = PairwiseMatch(timelines, backends.embedder,
                                            config.hdbscan, config.noise);
    report.cluster_sizes = match.cluster_sizes;
    report.noise = match.noise;
    std::vector<std::string> excluded;
    if (depth > 0) {
      excluded = ancestors;
      excluded.push_back(config.event_name);
    }
    fragment = Synthesize(match, timelines, documents, config, store.registry(),
                          backends, excluded, report);
  }
  if (fragment.events.empty()) {
    report.warnings.push_back("no events for " + config.event_name);
    if (!force) {
      report.seconds =
          std::chrono::duration<double>(Clock::now() - started).count();
      return std::nullopt;
    }
  }

  const std::string nid = store.CreateNarrative(
      config.viewpoint, NarrativeHint(config.viewpoint, config.event_name));
  report.narrative_id = nid;
  std::vector<std::string> ids;
  for (size_t k = 0; k < fragment.events.size(); ++k) {
    const FragmentEvent& f = fragment.events[k];
    EventNode node;
    node.id = nid + "/e" + std::to_string(k + 1);
    node.label = f.event.label;
    node.time = f.event.time;
    node.provenance = f.provenance;
    ids.push_back(store.AddEvent(nid, std::move(node)));
  }
  for (const FragmentEdge& e : fragment.edges) {
    store.AddNarrativeEdge(nid, ids[e.source], e.predicate, ids[e.target]);
  }

  if (depth < config.max_recursion_depth) {
    std::vector<std::string> chain = ancestors;
    chain.push_back(config.event_name);
    Recurse(nid, config, store, documents, backends, depth, chain, report);
  }
  report.seconds = std::chrono::duration<double>(Clock::now() - started).count();
  return nid;
}

}  // namespace

void MineConfig::Validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kInvalidArgument, what);
  };
  if (Trim(event_name).empty()) fail("event name is empty");
  if (timespan.kind != TimeKind::kInterval) {
    fail("timespan must be an interval");
  }
  if (!timespan.Validate().empty()) fail("timespan is malformed");
  if (Trim(viewpoint).empty()) fail("viewpoint is empty");
  if (max_recursion_depth < 0) fail("recursion depth is negative");
  if (concurrency == 0) fail("concurrency must be positive");
  if (!(merge_threshold >= -1.0 && merge_threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidThreshold, "merge threshold outside [-1, 1]");
  }
  if (relation_candidates.empty()) fail("no relation candidates");
}

nlohmann::json MiningReport::ToJson(bool with_timings) const {
  nlohmann::json skipped_json = nlohmann::json::array();
  for (const SkippedDocument& s : skipped) {
    skipped_json.push_back(
        {{"document", s.document_id}, {"error", s.error}, {"stage", s.stage}});
  }
  nlohmann::json children_json = nlohmann::json::array();
  for (const MiningReport& c : children) {
    children_json.push_back(c.ToJson(with_timings));
  }
  size_t clustered = 0;
  for (size_t s : cluster_sizes) clustered += s;
  nlohmann::json j = {
      {"event", event_name},
      {"viewpoint", viewpoint},
      {"narrative", narrative_id.empty() ? nlohmann::json(nullptr)
                                         : nlohmann::json(narrative_id)},
      {"parent_event", parent_event},
      {"depth", depth},
      {"counts",
       {{"documents", documents},
        {"documents_detected", documents_detected},
        {"timelines", timelines},
        {"timeline_events", timeline_events},
        {"clusters", cluster_sizes.size()},
        {"clustered_events", clustered},
        {"noise", noise},
        {"merges", merges},
        {"events", events},
        {"excluded_self_references", excluded_self_references},
        {"relations", relations},
        {"recursion_fan_out", RecursionFanOut()}}},
      {"cluster_sizes", cluster_sizes},
      {"skipped", skipped_json},
      {"warnings", warnings},
      {"children", children_json},
  };
  if (with_timings) j["seconds"] = seconds;
  return j;
}

size_t MiningReport::RecursionFanOut() const {
  size_t n = 0;
  for (const MiningReport& c : children) {
    if (!c.narrative_id.empty()) n += 1 + c.RecursionFanOut();
  }
  return n;
}

std::vector<Timeline> ExtractTimelines(const MineConfig& config,
                                       const std::vector<Document>& documents,
                                       MiningBackends backends,
                                       const std::string& parent_event,
                                       MiningReport& report) {
  std::vector<DocumentOutcome> outcomes(documents.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < documents.size(); i = next++) {
      outcomes[i] = ProcessDocument(config, documents[i],
                                    {backends.llm, backends.prompts},
                                    parent_event);
    }
  };
  const size_t n_threads = std::min(config.concurrency, documents.size());
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }

  std::vector<Timeline> timelines;
  std::exception_ptr first_backend_error;
  size_t backend_failures = 0;
  report.documents += documents.size();
  for (DocumentOutcome& o : outcomes) {
    if (o.detected) ++report.documents_detected;
    if (o.skipped) report.skipped.push_back(*o.skipped);
    if (o.backend_error) {
      ++backend_failures;
      if (!first_backend_error) first_backend_error = o.backend_error;
    }
    for (std::string& w : o.warnings) report.warnings.push_back(std::move(w));
    if (o.timeline) {
      report.timeline_events += o.timeline->events.size();
      timelines.push_back(std::move(*o.timeline));
    }
  }
  report.timelines += timelines.size();
  // A backend that fails for every document is an outage, not a per-document
  // problem.
  if (!documents.empty() && backend_failures == documents.size()) {
    std::rethrow_exception(first_backend_error);
  }
  return timelines;
}

MatchResult PairwiseMatch(const std::vector<Timeline>& timelines,
                          EmbeddingBackend& embedder,
                          const HdbscanParams& params, NoisePolicy noise) {
  if (timelines.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no timelines to match");
  }
  MatchResult match;
  std::vector<std::string> labels;
  for (size_t t = 0; t < timelines.size(); ++t) {
    for (size_t e = 0; e < timelines[t].events.size(); ++e) {
      match.pooled.emplace_back(t, e);
      labels.push_back(timelines[t].events[e].label);
    }
  }
  if (labels.empty()) return match;
  match.vectors = Embed(embedder, labels);
  const ClusterResult result = Hdbscan(match.vectors, params);
  for (const auto& members : result.clusters) {
    match.clusters.push_back(members);
    match.cluster_sizes.push_back(members.size());
  }
  match.noise = result.noise_count();
  if (noise == NoisePolicy::kSingleton) {
    for (size_t i = 0; i < result.assignments.size(); ++i) {
      if (result.assignments[i] < 0) match.clusters.push_back({i});
    }
  }
  return match;
}

NarrativeFragment Synthesize(const MatchResult& match,
                             const std::vector<Timeline>& timelines,
                             const std::vector<Document>& documents,
                             const MineConfig& config,
                             const RelationRegistry& registry,
                             MiningBackends backends,
                             const std::vector<std::string>& excluded_labels,
                             MiningReport& report) {
  NarrativeFragment fragment;
  if (match.clusters.empty()) return fragment;
  const MergeResult merged =
      MergeClusters(match.clusters, match.vectors, config.merge_threshold);
  report.merges += merged.log.size();

  std::map<std::string, const Document*> by_id;
  for (const Document& d : documents) by_id[d.id] = &d;
  const LlmContext ctx{backends.llm, backends.prompts};

  for (const std::vector<size_t>& cluster : merged.clusters) {
    std::vector<LabeledEvent> members;
    std::vector<Provenance> provenance;
    for (size_t p : cluster) {
      const auto [t, e] = match.pooled[p];
      const LabeledEvent& member = timelines[t].events[e];
      members.push_back(member);
      auto doc = by_id.find(timelines[t].document_id);
      if (doc != by_id.end()) {
        provenance.push_back(Locate(*doc->second, member.sentence));
      } else {
        provenance.push_back({timelines[t].document_id, {}, {}});
      }
    }
    std::sort(provenance.begin(), provenance.end());
    provenance.erase(std::unique(provenance.begin(), provenance.end()),
                     provenance.end());
    FragmentEvent f{SynthesizeLabel(ctx, members), std::move(provenance)};
    if (LabelExcluded(f.event.label, excluded_labels)) {
      ++report.excluded_self_references;
      continue;
    }
    fragment.events.push_back(std::move(f));
  }

  std::stable_sort(fragment.events.begin(), fragment.events.end(),
                   [](const FragmentEvent& a, const FragmentEvent& b) {
                     if (EarlierThan(a.event.time, b.event.time)) return true;
                     if (EarlierThan(b.event.time, a.event.time)) return false;
                     return a.event.label < b.event.label;
                   });
  report.events += fragment.events.size();

  // Neighbours in time order; the later event is asked about first so the
  // natural answer is "<later> happened after <earlier>".
  for (size_t i = 1; i < fragment.events.size(); ++i) {
    const LabeledEvent& later = fragment.events[i].event;
    const LabeledEvent& earlier = fragment.events[i - 1].event;
    try {
      const auto relation = InferRelation(
          ctx, registry, config.relation_candidates, later, earlier);
      if (!relation) {
        report.warnings.push_back("no relation between '" + later.label +
                                  "' and '" + earlier.label + "'");
        continue;
      }
      FragmentEdge edge{i, relation->predicate, i - 1};
      if (relation->reversed) std::swap(edge.source, edge.target);
      fragment.edges.push_back(std::move(edge));
      ++report.relations;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUnknownPredicate) throw;
      report.warnings.push_back("unknown predicate '" + std::string(e.what()) +
                                "' between '" + later.label + "' and '" +
                                earlier.label + "'");
    }
  }
  return fragment;
}

MiningReport Mine(const MineConfig& config, NarrativeStore& store,
                  const std::vector<Document>& corpus,
                  MiningBackends backends) {
  config.Validate();
  const std::vector<Document> dv =
      SelectViewpoint(corpus, config.viewpoint, store);
  if (dv.empty()) {
    throw Error(ErrorCode::kEmptyViewpointCollection,
                "no documents for viewpoint " + config.viewpoint);
  }
  MiningReport report;
  MineOne(config, store, dv, backends, "", 0, {}, true, report);
  return report;
}

void Recurse(const std::string& narrative_id, const MineConfig& config,
             NarrativeStore& store, const std::vector<Document>& documents,
             MiningBackends backends, int depth,
             const std::vector<std::string>& ancestors, MiningReport& report) {
  if (depth >= config.max_recursion_depth) return;
  // Copy: mining children adds narratives to the store.
  const std::vector<std::string> events = store.narrative(narrative_id).events;
  for (const std::string& event_id : events) {
    if (store.narrative(narrative_id).eta.count(event_id)) continue;
    MineConfig child_config = config;
    child_config.event_name = store.event(event_id).label;
    MiningReport child;
    try {
      const auto child_id =
          MineOne(child_config, store, documents, backends, config.event_name,
                  depth + 1, ancestors, false, child);
      if (child_id) store.SetEta(narrative_id, event_id, *child_id);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoDocumentsDetected) throw;
      child.event_name = child_config.event_name;
      child.viewpoint = config.viewpoint;
      child.parent_event = config.event_name;
      child.depth = depth + 1;
    }
    report.children.push_back(std::move(child));
  }
}

}  // namespace narrative

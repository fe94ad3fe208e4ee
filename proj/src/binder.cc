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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>

#include "narrative/error.h"
#include "narrative/http.h"
#include "narrative/serialization.h"
#include "narrative/text.h"

namespace narrative {
namespace {

std::string ReadText(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileUnreadable, path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// "2003", "2003-03", "2003-03-20", or "<date>/<date>" for a range; the full
// time-spec object is accepted too.
TimeSpec SnapshotTime(const Json& j) {
  if (j.is_null()) return TimeSpec::Unknown();
  if (j.is_object()) return TimeSpecFromJson(j);
  const std::string text = j.get<std::string>();
  const auto time = ParseIsoRange(text);
  if (!time) throw Error(ErrorCode::kParseError, "bad date " + text);
  return *time;
}

KgEntity EntityFromSnapshot(const std::string& id, const Json& j) {
  KgEntity e;
  e.id = id;
  e.label = j.at("label").get<std::string>();
  e.aliases = j.value("aliases", std::vector<std::string>{});
  e.description = j.value("description", std::string());
  if (j.contains("time")) e.time = SnapshotTime(j.at("time"));
  e.part_of = j.value("part_of", std::vector<std::string>{});
  e.has_parts = j.value("has_parts", std::vector<std::string>{});
  e.sections = j.value("sections", std::vector<std::string>{});
  if (j.contains("claims")) {
    for (const Json& c : j.at("claims")) {
      KgClaim claim{c.at("predicate").get<std::string>(),
                    c.at("object").get<std::string>(),
                    std::nullopt};
      if (c.contains("attribution") && !c.at("attribution").is_null()) {
        claim.attribution = c.at("attribution").get<std::string>();
      }
      e.claims.push_back(std::move(claim));
    }
  }
  return e;
}

// Wikidata time value: "+2003-03-20T00:00:00Z" with precision 9 (year),
// 10 (month) or 11 (day).
std::optional<std::pair<Date, Granularity>> WikidataTime(const Json& snak) {
  if (!snak.contains("datavalue")) return std::nullopt;
  const Json& v = snak.at("datavalue").at("value");
  const std::string t = v.at("time").get<std::string>();
  static const std::regex kTime("^([+-])(\\d{1,4})-(\\d\\d)-(\\d\\d)T");
  std::smatch m;
  if (!std::regex_search(t, m, kTime) || m[1] == "-") return std::nullopt;
  Date d{std::stoi(m[2]), std::max(1, std::stoi(m[3])),
         std::max(1, std::stoi(m[4]))};
  const int precision = v.value("precision", 11);
  if (precision < 9) return std::nullopt;
  Granularity g = precision == 9    ? Granularity::kYear
                  : precision == 10 ? Granularity::kMonth
                                    : Granularity::kDay;
  if (g != Granularity::kDay) d.day = 1;
  if (g == Granularity::kYear) d.month = 1;
  if (!IsValidDate(d)) return std::nullopt;
  return std::make_pair(d, g);
}

std::vector<std::string> ClaimValues(const Json& claims, const char* property) {
  std::vector<std::string> out;
  if (!claims.contains(property)) return out;
  for (const Json& c : claims.at(property)) {
    const Json& snak = c.at("mainsnak");
    if (snak.contains("datavalue")) {
      out.push_back(snak.at("datavalue").at("value").at("id").get<std::string>());
    }
  }
  return out;
}

TimeSpec SpecOf(const Date& d, Granularity g) {
  switch (g) {
    case Granularity::kYear:
      return TimeSpec::Year(d.year);
    case Granularity::kMonth:
      return TimeSpec::Month(d.year, d.month);
    case Granularity::kDay:
      break;
  }
  return TimeSpec::Day(d.year, d.month, d.day);
}

std::optional<std::pair<Date, Granularity>> FirstTime(const Json& claims,
                                                      const char* property) {
  if (!claims.contains(property)) return std::nullopt;
  for (const Json& c : claims.at(property)) {
    if (auto t = WikidataTime(c.at("mainsnak"))) return t;
  }
  return std::nullopt;
}

const std::set<std::string>& NewsVerbs() {
  static const std::set<std::string> kVerbs = {
      "announce", "approve", "arrest", "attack",  "begin",   "bomb",
      "call",     "capture", "claim",  "declare", "deploy",  "elect",
      "end",      "execute", "fall",   "find",    "hand",    "hold",
      "invade",   "kill",    "launch", "lead",    "leave",   "occupy",
      "open",     "order",   "pass",   "publish", "reject",  "release",
      "resign",   "rule",    "sign",   "start",   "take",    "vote",
      "win",      "withdraw", "issue", "report", "strike"};
  return kVerbs;
}

bool IsVerb(std::string token) {
  token = ToLower(token);
  static const std::set<std::string> kIrregular = {
      "began", "begun", "fell", "fallen", "found", "held", "led",  "left",
      "took",  "taken", "won",  "struck", "ran",   "was",  "were", "is",
      "are"};
  if (kIrregular.count(token)) return true;
  for (const std::string& verb : NewsVerbs()) {
    const std::string stem =
        verb.back() == 'e' ? verb.substr(0, verb.size() - 1) : verb;
    for (const std::string& form :
         {verb, verb + "s", verb + "es", stem + "ed", stem + "ing"}) {
      if (token == form) return true;
    }
  }
  return false;
}

bool HasVerb(const std::string& text) {
  static const std::regex kWord("[A-Za-z]+");
  for (auto it = std::sregex_iterator(text.begin(), text.end(), kWord);
       it != std::sregex_iterator(); ++it) {
    if (IsVerb(it->str())) return true;
  }
  return false;
}

VirtualSubgraph BuildVirtual(const NarrativeStore& store,
                             const std::string& narrative_id,
                             const std::string& event_id) {
  const EventNode& e = store.event(event_id);
  VirtualSubgraph v;
  v.label = e.label;
  v.time = e.time;
  v.inferred_type = e.event_type.value_or("event");
  v.participants = e.participants;
  if (const Narrative* child = store.Eta(event_id, narrative_id)) {
    v.member_events = child->events;
  }
  v.exportable = false;
  return v;
}

double Clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

SnapshotSource::SnapshotSource(std::map<std::string, KgEntity> entities)
    : entities_(std::move(entities)) {}

std::unique_ptr<SnapshotSource> SnapshotSource::FromJson(const std::string& json) {
  std::map<std::string, KgEntity> entities;
  try {
    const Json j = Json::parse(json);
    for (const auto& [id, e] : j.at("entities").items()) {
      entities[id] = EntityFromSnapshot(id, e);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("kg snapshot: ") + e.what());
  }
  return std::make_unique<SnapshotSource>(std::move(entities));
}

std::unique_ptr<SnapshotSource> SnapshotSource::FromFile(
    const std::filesystem::path& path) {
  return FromJson(ReadText(path));
}

std::vector<KgEntity> SnapshotSource::Lookup(const std::string&) {
  ++queries_;
  std::vector<KgEntity> out;
  for (const auto& [id, e] : entities_) out.push_back(e);
  return out;
}

std::optional<KgEntity> SnapshotSource::Entity(const std::string& kg_id) {
  auto it = entities_.find(kg_id);
  if (it == entities_.end()) return std::nullopt;
  return it->second;
}

KgEntity ParseWikidataEntity(const std::string& json, const std::string& kg_id) {
  try {
    const Json root = Json::parse(json);
    const Json& e = root.at("entities").at(kg_id);
    KgEntity out;
    out.id = kg_id;
    if (e.contains("labels") && e.at("labels").contains("en")) {
      out.label = e.at("labels").at("en").at("value").get<std::string>();
    }
    if (e.contains("aliases") && e.at("aliases").contains("en")) {
      for (const Json& a : e.at("aliases").at("en")) {
        out.aliases.push_back(a.at("value").get<std::string>());
      }
    }
    if (e.contains("descriptions") && e.at("descriptions").contains("en")) {
      out.description =
          e.at("descriptions").at("en").at("value").get<std::string>();
    }
    const Json claims = e.value("claims", Json::object());
    if (auto point = FirstTime(claims, "P585")) {
      out.time = SpecOf(point->first, point->second);
    } else if (auto start = FirstTime(claims, "P580")) {
      if (auto end = FirstTime(claims, "P582")) {
        const Date last = SpecOf(end->first, end->second).Range()->second;
        if (!(last < start->first)) {
          out.time = TimeSpec::FromRange(start->first, last);
        }
      } else {
        out.time = SpecOf(start->first, start->second);
      }
    }
    out.part_of = ClaimValues(claims, "P361");
    out.has_parts = ClaimValues(claims, "P527");
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSourceUnavailable,
                "malformed entity data for " + kg_id + ": " + e.what());
  }
}

LiveSource::LiveSource(Options options, ResponseCache& cache)
    : options_(std::move(options)), cache_(cache) {}

std::string LiveSource::Get(const std::string& url) {
  const std::string key = ResponseCache::Key("GET", url, "http");
  if (auto hit = cache_.Get(key)) return *hit;
  HttpRequest request;
  request.url = url;
  request.timeout = options_.timeout;
  request.headers.emplace_back("User-Agent",
                               "narrative-miner/1.0 (research prototype)");
  const std::string body = WithRetries(options_.max_retries, [&] {
    ++http_requests_;
    HttpResponse response;
    try {
      response = SendHttp(request);
    } catch (const Error& e) {
      throw Error(ErrorCode::kSourceUnavailable, e.what());
    }
    if (response.status == 404) return std::string();
    if (response.status != 200) {
      throw Error(ErrorCode::kSourceUnavailable,
                  url + " returned HTTP " + std::to_string(response.status));
    }
    return response.body;
  });
  cache_.Put(key, body);
  return body;
}

std::vector<KgEntity> LiveSource::Lookup(const std::string& label) {
  ++queries_;
  const std::string api = options_.wikipedia_api;
  std::vector<std::string> titles;
  try {
    const Json search = Json::parse(
        Get(api + "?action=query&list=search&format=json&srlimit=" +
            std::to_string(options_.search_limit) +
            "&srsearch=" + UrlEncode(label)));
    for (const Json& hit : search.at("query").at("search")) {
      titles.push_back(hit.at("title").get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSourceUnavailable,
                std::string("malformed search response: ") + e.what());
  }
  if (titles.empty()) return {};

  std::string joined;
  for (const std::string& t : titles) joined += (joined.empty() ? "" : "|") + t;
  std::map<std::string, std::string> qid_by_title;
  try {
    const Json props = Json::parse(
        Get(api + "?action=query&prop=pageprops&ppprop=wikibase_item&"
                  "redirects=1&format=json&titles=" +
            UrlEncode(joined)));
    // Map redirected titles back to what the search returned.
    std::map<std::string, std::string> redirected;
    if (props.at("query").contains("redirects")) {
      for (const Json& r : props.at("query").at("redirects")) {
        redirected[r.at("to").get<std::string>()] = r.at("from").get<std::string>();
      }
    }
    for (const auto& [page_id, page] : props.at("query").at("pages").items()) {
      if (!page.contains("pageprops")) continue;
      std::string title = page.at("title").get<std::string>();
      if (redirected.count(title)) title = redirected[title];
      qid_by_title[title] =
          page.at("pageprops").at("wikibase_item").get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSourceUnavailable,
                std::string("malformed pageprops response: ") + e.what());
  }

  std::vector<KgEntity> out;
  std::set<std::string> seen;
  for (const std::string& title : titles) {
    auto it = qid_by_title.find(title);
    if (it == qid_by_title.end() || !seen.insert(it->second).second) continue;
    std::optional<KgEntity> entity = Entity(it->second);
    if (!entity) continue;
    if (entity->label.empty()) entity->label = title;
    if (!EqualsIgnoreCase(entity->label, title)) entity->aliases.push_back(title);
    try {
      const std::string text = Get(api + "?action=parse&prop=sections&format=json&page=" +
                                   UrlEncode(title));
      if (!text.empty()) {
        const Json parsed = Json::parse(text);
        if (parsed.contains("parse")) {
          for (const Json& s : parsed.at("parse").at("sections")) {
            entity->sections.push_back(s.at("line").get<std::string>());
          }
        }
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kSourceUnavailable,
                  std::string("malformed sections response: ") + e.what());
    }
    out.push_back(std::move(*entity));
  }
  return out;
}

std::optional<KgEntity> LiveSource::Entity(const std::string& kg_id) {
  static const std::regex kQid("^Q[0-9]+$");
  if (!std::regex_match(kg_id, kQid)) return std::nullopt;
  const std::string body = Get(options_.wikidata_entity + kg_id + ".json");
  if (body.empty()) return std::nullopt;
  return ParseWikidataEntity(body, kg_id);
}

void BindingThresholds::Validate() const {
  const bool ok = candidate_floor >= 0 && candidate_floor <= indirect &&
                  indirect <= direct && direct <= 1.0 && gap >= 0 &&
                  time_bonus >= 0 && time_bonus <= 1 && section_factor >= 0 &&
                  section_factor <= 1 && max_candidates > 0;
  if (!ok) throw Error(ErrorCode::kInvalidThreshold, "binding thresholds");
}

double LabelSimilarity(const std::string& a, const std::string& b,
                       EmbeddingBackend* embedder) {
  if (embedder == nullptr) return NormalizedEditSimilarity(a, b);
  const std::vector<Vector> v = Embed(*embedder, {a, b});
  try {
    return Clamp01(Cosine(v[0], v[1]));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kZeroVector) return 0.0;
    throw;
  }
}

std::vector<KgCandidate> SearchCandidates(KgSource& source,
                                          const std::string& label,
                                          const TimeSpec& time,
                                          EmbeddingBackend* embedder,
                                          const BindingThresholds& thresholds) {
  if (Trim(label).empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty label");
  }
  const std::vector<KgEntity> entities = source.Lookup(label);

  // One embedding batch: the label, then every text of every entity.
  struct Text {
    size_t entity;
    std::string text;
    double factor;
  };
  std::vector<Text> texts;
  for (size_t i = 0; i < entities.size(); ++i) {
    const KgEntity& e = entities[i];
    if (!e.label.empty()) texts.push_back({i, e.label, 1.0});
    for (const std::string& a : e.aliases) {
      if (!Trim(a).empty()) texts.push_back({i, a, 1.0});
    }
    for (const std::string& s : e.sections) {
      if (!Trim(s).empty()) texts.push_back({i, s, thresholds.section_factor});
    }
  }
  std::vector<double> sims(texts.size());
  if (embedder != nullptr && !texts.empty()) {
    std::vector<std::string> batch = {label};
    for (const Text& t : texts) batch.push_back(t.text);
    const std::vector<Vector> v = Embed(*embedder, batch);
    for (size_t k = 0; k < texts.size(); ++k) {
      try {
        sims[k] = Clamp01(Cosine(v[0], v[k + 1]));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kZeroVector) throw;
        sims[k] = 0.0;
      }
    }
  } else {
    for (size_t k = 0; k < texts.size(); ++k) {
      sims[k] = NormalizedEditSimilarity(label, texts[k].text);
    }
  }

  std::vector<KgCandidate> out;
  for (size_t i = 0; i < entities.size(); ++i) {
    const KgEntity& e = entities[i];
    KgCandidate c{e.id, e.label, e.description, e.time, -1.0, ""};
    for (size_t k = 0; k < texts.size(); ++k) {
      if (texts[k].entity != i) continue;
      const double s = sims[k] * texts[k].factor;
      if (s > c.score) {
        c.score = s;
        c.matched_text = texts[k].text;
      }
    }
    if (c.score < 0) continue;
    if (time.known() && e.time.known() && Overlaps(time, e.time)) {
      c.score += thresholds.time_bonus;
    }
    c.score = Clamp01(c.score);
    if (c.score >= thresholds.candidate_floor) out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const KgCandidate& a, const KgCandidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.kg_id < b.kg_id;
  });
  if (out.size() > thresholds.max_candidates) out.resize(thresholds.max_candidates);
  return out;
}

BindingResult ClassifyBinding(const std::string& label, const TimeSpec& time,
                              const std::vector<KgCandidate>& candidates,
                              const BindingThresholds& thresholds) {
  BindingResult r;
  r.candidates = candidates;
  const double top = candidates.empty() ? 0.0 : candidates[0].score;
  if (candidates.empty() || top < thresholds.indirect) {
    r.kind = BindingKind::kNone;
    r.confidence = 1.0 - top;
    r.virtual_subgraph = VirtualSubgraph{label, time, "event", {}, {}, false};
    return r;
  }
  const KgCandidate& best = candidates[0];
  const double runner_up = candidates.size() > 1 ? candidates[1].score : 0.0;
  const double gap = top - runner_up;
  r.kg_id = best.kg_id;
  r.confidence = top;
  if (top >= thresholds.direct && gap >= thresholds.gap) {
    r.kind = BindingKind::kDirect;
    return r;
  }
  r.kind = BindingKind::kIndirect;
  std::ostringstream note;
  note.precision(3);
  if (gap < thresholds.gap) {
    note << "ambiguous: " << best.kg_id << " (" << best.kg_label << ") and "
         << candidates[1].kg_id << " (" << candidates[1].kg_label
         << ") score within " << thresholds.gap << "; not resolved";
  } else {
    note << "closest entity " << best.kg_id << " (" << best.kg_label
         << ") matched '" << best.matched_text << "' with score " << top
         << "; it may be broader or narrower than the narrated event";
  }
  r.note = note.str();
  return r;
}

std::optional<std::string> CompoundLabelReason(const std::string& label) {
  static const std::regex kYear("\\b(1[5-9]\\d\\d|20\\d\\d)\\b");
  std::set<std::string> years;
  for (auto it = std::sregex_iterator(label.begin(), label.end(), kYear);
       it != std::sregex_iterator(); ++it) {
    years.insert(it->str());
  }
  if (years.size() >= 2) {
    return "mentions the years " + *years.begin() + " and " + *years.rbegin();
  }
  static const std::regex kAnd("\\s+and\\s+", std::regex::icase);
  std::smatch m;
  if (std::regex_search(label, m, kAnd)) {
    const std::string left = m.prefix().str();
    const std::string right = m.suffix().str();
    if (HasVerb(left) && HasVerb(right)) {
      return "joins two clauses with verbs: '" + left + "' and '" + right + "'";
    }
  }
  return std::nullopt;
}

nlohmann::json BindingReport::ToJson() const {
  Json b = Json::object();
  for (const auto& [id, binding] : bindings) b[id] = BindingToJson(binding);
  Json amb = Json::array();
  for (const AmbiguityEntry& a : ambiguities) {
    Json cands = Json::array();
    for (const KgCandidate& c : a.candidates) cands.push_back(CandidateToJson(c));
    amb.push_back({{"candidates", cands}, {"event", a.event_id}, {"label", a.label}});
  }
  Json comp = Json::array();
  for (const CompoundLabelEntry& c : compound_labels) {
    comp.push_back({{"event", c.event_id}, {"label", c.label}, {"reason", c.reason}});
  }
  Json flags = Json::array();
  for (const RecursiveNodeFlag& f : recursive_flags) {
    flags.push_back({{"event", f.event_id},
                     {"kg_id", f.kg_id},
                     {"narrative", f.narrative_id},
                     {"note", f.note},
                     {"suggested_kg_id", f.suggested_kg_id
                                             ? Json(*f.suggested_kg_id)
                                             : Json(nullptr)}});
  }
  return {{"ambiguities", amb},
          {"bindings", b},
          {"compound_labels", comp},
          {"recursive_flags", flags},
          {"visited", visited}};
}

BindingReport BindNarrative(NarrativeStore& store,
                            const std::string& narrative_id, KgSource& source,
                            EmbeddingBackend* embedder,
                            const BindOptions& options) {
  options.thresholds.Validate();
  if (!store.HasNarrative(narrative_id)) {
    throw Error(ErrorCode::kMissingNarrative, narrative_id);
  }
  const BindingThresholds& th = options.thresholds;
  BindingReport report;
  report.visited = store.EtaClosure(narrative_id);

  for (const std::string& nid : report.visited) {
    const Narrative& n = store.narrative(nid);
    for (const std::string& eid : n.events) {
      if (report.bindings.count(eid)) continue;  // shared with a visited one
      const EventNode& e = store.event(eid);
      std::vector<KgCandidate> candidates =
          SearchCandidates(source, e.label, e.time, embedder, th);
      BindingResult r = ClassifyBinding(e.label, e.time, candidates, th);
      if (r.kind == BindingKind::kNone) {
        r.virtual_subgraph = BuildVirtual(store, nid, eid);
      } else if (options.import_triples) {
        if (auto entity = source.Entity(*r.kg_id)) {
          r.imported.push_back({entity->id, "label", entity->label, std::nullopt});
          if (entity->time.known()) {
            r.imported.push_back(
                {entity->id, "time", FormatTimeSpec(entity->time), std::nullopt});
          }
          for (const std::string& p : entity->part_of) {
            r.imported.push_back({entity->id, "part of", p, std::nullopt});
          }
          for (const std::string& p : entity->has_parts) {
            r.imported.push_back({entity->id, "has part", p, std::nullopt});
          }
          for (const KgClaim& c : entity->claims) {
            if (c.attribution &&
                !(store.HasViewpoint(*c.attribution) &&
                  store.ViewpointCompatible(n.narrator, *c.attribution))) {
              continue;
            }
            r.imported.push_back({entity->id, c.predicate, c.object, c.attribution});
          }
        }
      }
      if (candidates.size() >= 2 && candidates[0].score >= th.indirect &&
          candidates[0].score - candidates[1].score < th.gap) {
        AmbiguityEntry a{eid, e.label, {}};
        for (const KgCandidate& c : candidates) {
          if (candidates[0].score - c.score < th.gap) a.candidates.push_back(c);
        }
        report.ambiguities.push_back(std::move(a));
      }
      if (auto reason = CompoundLabelReason(e.label)) {
        report.compound_labels.push_back({eid, e.label, *reason});
      }
      report.bindings[eid] = std::move(r);
    }
  }

  // A bound recursive node whose children happen outside the bound entity
  // probably names something larger.
  for (const std::string& nid : report.visited) {
    for (const auto& [eid, child_id] : store.narrative(nid).eta) {
      const BindingResult& r = report.bindings.at(eid);
      if (r.kind == BindingKind::kNone) continue;
      const auto entity = source.Entity(*r.kg_id);
      if (!entity || !entity->time.known()) continue;
      std::vector<TimeSpec> times;
      for (const std::string& c : store.narrative(child_id).events) {
        times.push_back(store.event(c).time);
      }
      const TimeSpec hull = Hull(times);
      if (!hull.known() || Contains(entity->time, hull)) continue;
      RecursiveNodeFlag flag{nid, eid, *r.kg_id,
                             "child events span " + FormatTimeSpec(hull) +
                                 ", outside " + *r.kg_id + " (" +
                                 FormatTimeSpec(entity->time) + ")",
                             std::nullopt};
      for (const std::string& p : entity->part_of) {
        const auto parent = source.Entity(p);
        if (parent && Contains(parent->time, hull)) {
          flag.suggested_kg_id = p;
          break;
        }
      }
      report.recursive_flags.push_back(std::move(flag));
    }
  }

  for (const auto& [eid, r] : report.bindings) store.SetBinding(eid, r);
  return report;
}

VirtualSubgraph MaterializeVirtual(const NarrativeStore& store,
                                   const std::string& narrative_id,
                                   const std::string& event_id) {
  if (!store.HasNarrative(narrative_id)) {
    throw Error(ErrorCode::kMissingNarrative, narrative_id);
  }
  const EventNode& e = store.event(event_id);
  if (e.binding && e.binding->kind != BindingKind::kNone) {
    throw Error(ErrorCode::kAlreadyBound,
                event_id + " is bound to " + e.binding->kg_id.value_or("?"));
  }
  return BuildVirtual(store, narrative_id, event_id);
}

}  // namespace narrative

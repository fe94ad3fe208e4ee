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

#include "narrative/config.h"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "json.hpp"
#include "narrative/error.h"
#include "narrative/text.h"

namespace narrative {
namespace {

using Json = nlohmann::json;

// Drops a trailing comment, leaving '#' inside strings alone.
std::string_view StripComment(std::string_view line) {
  bool in_string = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\' && in_string) {
      ++i;
    } else if (line[i] == '"') {
      in_string = !in_string;
    } else if (line[i] == '#' && !in_string) {
      return line.substr(0, i);
    }
  }
  return line;
}

// "viewpoint.RU" or 'relation."lead up to"' -> {"viewpoint", "RU"}.
std::vector<std::string> SectionPath(std::string_view header) {
  static const std::regex kPart(R"re(\s*(?:"((?:[^"\\]|\\.)*)"|([A-Za-z0-9_-]+))\s*(\.|$))re");
  std::vector<std::string> parts;
  std::string h(header);
  auto it = std::sregex_iterator(h.begin(), h.end(), kPart);
  size_t consumed = 0;
  for (; it != std::sregex_iterator(); ++it) {
    if (static_cast<size_t>(it->position()) != consumed) return {};
    parts.push_back((*it)[1].matched ? (*it)[1].str() : (*it)[2].str());
    consumed += it->length();
    if ((*it)[3].length() == 0) break;
  }
  if (consumed != h.size()) return {};
  return parts;
}

struct Entry {
  Json value;
  int line;
};

// section path joined by '\x1f' -> key -> value.
using ConfigDoc = std::map<std::string, std::map<std::string, Entry>>;

[[noreturn]] void Fail(int line, const std::string& message) {
  throw Error(ErrorCode::kParseError,
              "config line " + std::to_string(line) + ": " + message);
}

ConfigDoc Tokenize(std::string_view text) {
  ConfigDoc doc;
  std::string section;
  doc[section];
  std::set<std::string> headers;
  int line_no = 0;
  for (const std::string& raw : SplitLines(text)) {
    ++line_no;
    const std::string line(Trim(StripComment(raw)));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') Fail(line_no, "unterminated section header");
      const auto path = SectionPath(line.substr(1, line.size() - 2));
      if (path.empty()) Fail(line_no, "bad section header " + line);
      section.clear();
      for (size_t i = 0; i < path.size(); ++i) {
        section += (i ? "\x1f" : "") + path[i];
      }
      if (!headers.insert(section).second) {
        Fail(line_no, "section repeated: " + line);
      }
      doc[section];
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos) Fail(line_no, "expected key = value");
    const std::string key(Trim(std::string_view(line).substr(0, eq)));
    static const std::regex kKey("[A-Za-z0-9_-]+");
    if (!std::regex_match(key, kKey)) Fail(line_no, "bad key '" + key + "'");
    Json value;
    try {
      value = Json::parse(Trim(std::string_view(line).substr(eq + 1)));
    } catch (const nlohmann::json::exception&) {
      Fail(line_no, "bad value for " + key);
    }
    if (value.is_object() || value.is_null()) Fail(line_no, "bad value for " + key);
    if (!doc[section].emplace(key, Entry{value, line_no}).second) {
      Fail(line_no, "key repeated: " + key);
    }
  }
  return doc;
}

// Typed access to one section; remembers which keys were read.
class Section {
 public:
  Section(const std::map<std::string, Entry>& entries, std::string name,
          const std::filesystem::path& base)
      : entries_(entries), name_(std::move(name)), base_(base) {}

  template <typename T>
  void Get(const std::string& key, T& out) {
    auto it = Find(key);
    if (it == entries_.end()) return;
    try {
      out = it->second.value.get<T>();
    } catch (const nlohmann::json::exception&) {
      Fail(it->second.line, "wrong type for " + name_ + key);
    }
  }
  void Path(const std::string& key, std::filesystem::path& out) {
    std::string s;
    Get(key, s);
    if (s.empty()) return;
    out = s;
    if (out.is_relative()) out = base_ / out;
  }
  void Check(bool ok, const std::string& key, const std::string& message) {
    if (ok) return;
    auto it = entries_.find(key);
    Fail(it == entries_.end() ? 0 : it->second.line, name_ + key + ": " + message);
  }
  void RejectUnknown() const {
    for (const auto& [key, entry] : entries_) {
      if (!read_.count(key)) Fail(entry.line, "unknown key " + name_ + key);
    }
  }

 private:
  std::map<std::string, Entry>::const_iterator Find(const std::string& key) {
    read_.insert(key);
    return entries_.find(key);
  }
  const std::map<std::string, Entry>& entries_;
  std::string name_;
  std::filesystem::path base_;
  std::set<std::string> read_;
};

std::string ReadConfigFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileUnreadable, path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

ProjectConfig ParseConfig(std::string_view text,
                          const std::filesystem::path& base_dir) {
  const ConfigDoc doc = Tokenize(text);
  ProjectConfig c;
  const std::map<std::string, Entry> none;
  auto section = [&](const std::string& name) {
    auto it = doc.find(name);
    return Section(it == doc.end() ? none : it->second,
                   name.empty() ? "" : name + ".", base_dir);
  };
  std::set<std::string> known = {"", "corpus", "llm", "embedding", "mining",
                                 "binding", "compare"};

  Section top = section("");
  top.RejectUnknown();

  Section corpus = section("corpus");
  corpus.Get("min_chars", c.ingest.min_chars);
  corpus.Get("max_chars", c.ingest.max_chars);
  corpus.Get("threads", c.ingest.threads);
  corpus.Check(c.ingest.min_chars < c.ingest.max_chars, "max_chars",
               "must exceed min_chars");
  corpus.RejectUnknown();

  Section llm = section("llm");
  llm.Get("backend", c.llm.backend);
  llm.Check(c.llm.backend == "mock" || c.llm.backend == "http", "backend",
            "expected mock or http");
  llm.Path("mock_script", c.llm.mock_script);
  llm.Get("endpoint", c.llm.endpoint);
  llm.Get("model", c.llm.model);
  llm.Path("prompts", c.llm.prompts);
  llm.Get("max_retries", c.llm.max_retries);
  llm.Get("timeout_ms", c.llm.timeout_ms);
  llm.Check(c.llm.backend != "mock" || !c.llm.mock_script.empty(), "mock_script",
            "required for the mock backend");
  llm.Check(c.llm.backend != "http" || !c.llm.endpoint.empty(), "endpoint",
            "required for the http backend");
  llm.RejectUnknown();

  Section emb = section("embedding");
  emb.Get("backend", c.embedding.backend);
  emb.Check(c.embedding.backend == "hashing" || c.embedding.backend == "fixture" ||
                c.embedding.backend == "http",
            "backend", "expected hashing, fixture or http");
  emb.Path("table", c.embedding.table);
  emb.Get("dimension", c.embedding.dimension);
  emb.Get("hashing_fallback", c.embedding.hashing_fallback);
  emb.Get("endpoint", c.embedding.endpoint);
  emb.Get("max_retries", c.embedding.max_retries);
  emb.Get("timeout_ms", c.embedding.timeout_ms);
  emb.Check(c.embedding.backend != "fixture" || !c.embedding.table.empty(), "table",
            "required for the fixture backend");
  emb.Check(c.embedding.dimension > 0, "dimension", "must be positive");
  emb.RejectUnknown();

  Section mining = section("mining");
  std::string timespan = "1900/2100";
  mining.Get("timespan", timespan);
  const auto span = ParseIsoRange(timespan);
  mining.Check(span.has_value() && span->kind == TimeKind::kInterval, "timespan",
               "expected <date>/<date>");
  c.mining.timespan = *span;
  mining.Get("max_recursion_depth", c.mining.max_recursion_depth);
  mining.Get("min_cluster_size", c.mining.hdbscan.min_cluster_size);
  mining.Get("min_samples", c.mining.hdbscan.min_samples);
  mining.Get("epsilon", c.mining.hdbscan.epsilon);
  mining.Get("allow_single_cluster", c.mining.hdbscan.allow_single_cluster);
  mining.Get("merge_threshold", c.mining.merge_threshold);
  mining.Get("concurrency", c.mining.concurrency);
  std::string noise = "singleton";
  mining.Get("noise", noise);
  mining.Check(noise == "singleton" || noise == "drop", "noise",
               "expected singleton or drop");
  c.mining.noise = noise == "drop" ? NoisePolicy::kDrop : NoisePolicy::kSingleton;
  mining.Get("relation_candidates", c.mining.relation_candidates);
  mining.RejectUnknown();

  Section binding = section("binding");
  binding.Get("source", c.binding.source);
  binding.Check(c.binding.source == "snapshot" || c.binding.source == "live",
                "source", "expected snapshot or live");
  binding.Path("snapshot", c.binding.snapshot);
  binding.Get("similarity", c.binding.similarity);
  binding.Check(c.binding.similarity == "embedding" || c.binding.similarity == "edit",
                "similarity", "expected embedding or edit");
  BindingThresholds& th = c.binding.options.thresholds;
  binding.Get("direct", th.direct);
  binding.Get("indirect", th.indirect);
  binding.Get("gap", th.gap);
  binding.Get("candidate_floor", th.candidate_floor);
  binding.Get("time_bonus", th.time_bonus);
  binding.Get("section_factor", th.section_factor);
  binding.Get("max_candidates", th.max_candidates);
  binding.Get("import_triples", c.binding.options.import_triples);
  binding.Get("wikipedia_api", c.binding.live.wikipedia_api);
  binding.Get("wikidata_entity", c.binding.live.wikidata_entity);
  binding.Get("search_limit", c.binding.live.search_limit);
  binding.Get("max_retries", c.binding.live.max_retries);
  int live_timeout = static_cast<int>(c.binding.live.timeout.count());
  binding.Get("timeout_ms", live_timeout);
  c.binding.live.timeout = std::chrono::milliseconds(live_timeout);
  binding.RejectUnknown();
  try {
    th.Validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("config: ") + e.what());
  }

  Section compare = section("compare");
  compare.Get("sim_threshold", c.compare.sim_threshold);
  compare.Get("flatten", c.compare.flatten);
  compare.RejectUnknown();

  for (const auto& [name, entries] : doc) {
    const std::vector<std::string> path = [&] {
      std::vector<std::string> out;
      std::string part;
      for (char ch : name) {
        if (ch == '\x1f') {
          out.push_back(part);
          part.clear();
        } else {
          part += ch;
        }
      }
      out.push_back(part);
      return out;
    }();
    if (path.size() == 2 && path[0] == "viewpoint") {
      Section s(entries, "viewpoint." + path[1] + ".", base_dir);
      Viewpoint v;
      v.id = path[1];
      std::vector<std::string> members;
      s.Get("members", members);
      v.members = {members.begin(), members.end()};
      std::string parent;
      s.Get("parent", parent);
      if (!parent.empty()) v.parent = parent;
      s.RejectUnknown();
      c.viewpoints.push_back(std::move(v));
    } else if (path.size() == 2 && path[0] == "relation") {
      Section s(entries, "relation." + path[1] + ".", base_dir);
      std::string category = "Association", direction = "none";
      s.Get("category", category);
      s.Get("direction", direction);
      const auto cat = ParseRelationCategory(category);
      const auto dir = ParseTemporalDirection(direction);
      s.Check(cat.has_value(), "category", "unknown category " + category);
      s.Check(dir.has_value(), "direction", "unknown direction " + direction);
      s.RejectUnknown();
      c.relations.push_back({path[1], *cat, *dir});
    } else if (!known.count(name)) {
      int line = entries.empty() ? 0 : entries.begin()->second.line;
      Fail(line, "unknown section [" + name + "]");
    }
  }
  return c;
}

ProjectConfig LoadConfig(const std::filesystem::path& path) {
  ProjectConfig c = ParseConfig(ReadConfigFile(path), path.parent_path());
  if (const char* key = std::getenv("NARRMINE_LLM_API_KEY")) c.llm.api_key = key;
  if (const char* key = std::getenv("NARRMINE_EMBEDDING_API_KEY")) {
    c.embedding.api_key = key;
  }
  return c;
}

void ApplyConfig(const ProjectConfig& config, NarrativeStore& store) {
  for (const RelationPredicate& p : config.relations) {
    store.registry().AddNarrativePredicate(p);
  }
  // A child may be listed before its parent; retry until no progress.
  std::vector<Viewpoint> pending;
  for (const Viewpoint& v : config.viewpoints) {
    if (!store.HasViewpoint(v.id)) pending.push_back(v);
  }
  while (!pending.empty()) {
    std::vector<Viewpoint> next;
    for (Viewpoint& v : pending) {
      if (v.parent && !store.HasViewpoint(*v.parent)) {
        next.push_back(std::move(v));
      } else {
        store.AddViewpoint(std::move(v));
      }
    }
    if (next.size() == pending.size()) {
      throw Error(ErrorCode::kUnknownViewpoint,
                  "parent of viewpoint " + next[0].id + " is not configured");
    }
    pending = std::move(next);
  }
}

NarrativeStore NewStore(const ProjectConfig& config) {
  NarrativeStore store;
  ApplyConfig(config, store);
  return store;
}

}  // namespace narrative

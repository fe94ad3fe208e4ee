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

#include "narrative/cli.h"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "narrative/binder.h"
#include "narrative/compare.h"
#include "narrative/config.h"
#include "narrative/corpus.h"
#include "narrative/dot.h"
#include "narrative/error.h"
#include "narrative/llm.h"
#include "narrative/miner.h"
#include "narrative/prompts.h"
#include "narrative/serialization.h"
#include "narrative/text.h"

namespace narrative {
namespace {

namespace fs = std::filesystem;

std::string ReadFileOrThrow(const fs::path& path, const std::string& hint = "") {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kFileUnreadable,
                path.string() + (hint.empty() ? "" : " (" + hint + ")"));
  }
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Write to a sibling temp file, then rename over the target.
void WriteAtomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kFileUnreadable, "cannot write " + tmp.string());
    out << content;
    if (!out) throw Error(ErrorCode::kFileUnreadable, "cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

class ProjectLock {
 public:
  explicit ProjectLock(const fs::path& path) : path_(path) {
    fd_ = ::open(path.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd_ < 0) {
      if (errno == EEXIST) {
        throw Error(ErrorCode::kLocked,
                    "another command holds " + path.string() +
                        "; remove it if no narrmine process is running");
      }
      throw Error(ErrorCode::kFileUnreadable,
                  path.string() + ": " + std::strerror(errno));
    }
    const std::string pid = std::to_string(::getpid()) + "\n";
    if (::write(fd_, pid.data(), pid.size()) < 0) {
      // The pid is informational only.
    }
  }
  ~ProjectLock() {
    ::close(fd_);
    std::error_code ec;
    fs::remove(path_, ec);
  }
  ProjectLock(const ProjectLock&) = delete;
  ProjectLock& operator=(const ProjectLock&) = delete;

 private:
  fs::path path_;
  int fd_ = -1;
};

fs::path Resolve(const ProjectLayout& layout, const std::string& p) {
  const fs::path path(p);
  return path.is_relative() ? layout.root / path : path;
}

std::string Relative(const ProjectLayout& layout, const fs::path& p) {
  std::error_code ec;
  const fs::path rel = fs::relative(p, layout.root, ec);
  if (ec || rel.empty() || *rel.begin() == "..") return p.string();
  return rel.generic_string();
}

NarrativeStore LoadStore(const ProjectLayout& layout, const ProjectConfig& config) {
  NarrativeStore store = fs::exists(layout.store())
                             ? DeserializeStore(ReadFileOrThrow(layout.store()))
                             : NewStore(config);
  ApplyConfig(config, store);
  return store;
}

void SaveStore(const ProjectLayout& layout, const NarrativeStore& store) {
  WriteAtomic(layout.store(), SerializeStore(store));
}

std::unique_ptr<EmbeddingBackend> MakeEmbedder(const ProjectConfig& config) {
  const auto& e = config.embedding;
  if (e.backend == "fixture") {
    std::unique_ptr<EmbeddingBackend> fallback;
    if (e.hashing_fallback) {
      fallback = std::make_unique<HashingEmbeddingBackend>(e.dimension);
    }
    return FixtureEmbeddingBackend::FromFile(e.table.string(), std::move(fallback));
  }
  if (e.backend == "http") {
    HttpEmbeddingBackend::Options o;
    o.endpoint = e.endpoint;
    o.dimension = e.dimension;
    o.max_retries = e.max_retries;
    o.timeout = std::chrono::milliseconds(e.timeout_ms);
    o.api_key = e.api_key;
    return std::make_unique<HttpEmbeddingBackend>(o);
  }
  return std::make_unique<HashingEmbeddingBackend>(e.dimension);
}

// The mock is not cached: its answers come from a script that is edited in
// place, and a stale cache would hide the edits.
struct LlmStack {
  std::unique_ptr<CompletionBackend> inner;
  std::unique_ptr<ResponseCache> cache;
  std::unique_ptr<CachingBackend> caching;
  CompletionBackend* backend = nullptr;
  PromptSet prompts;
};

LlmStack MakeLlm(const ProjectConfig& config, const ProjectLayout& layout) {
  LlmStack s;
  s.prompts = config.llm.prompts.empty() ? PromptSet::Defaults()
                                         : PromptSet::FromFile(config.llm.prompts);
  if (config.llm.backend == "mock") {
    s.inner = MockBackend::FromFile(config.llm.mock_script);
    s.backend = s.inner.get();
    return s;
  }
  HttpCompletionBackend::Options o;
  o.endpoint = config.llm.endpoint;
  o.model = config.llm.model;
  o.api_key = config.llm.api_key;
  o.max_retries = config.llm.max_retries;
  o.timeout = std::chrono::milliseconds(config.llm.timeout_ms);
  s.inner = std::make_unique<HttpCompletionBackend>(o);
  s.cache = std::make_unique<ResponseCache>(layout.llm_cache());
  s.caching = std::make_unique<CachingBackend>(*s.inner, *s.cache);
  s.backend = s.caching.get();
  return s;
}

Json RejectionsJson(const ProjectLayout& layout, const std::vector<Rejection>& list) {
  Json out = Json::array();
  for (const Rejection& r : list) {
    out.push_back({{"path", Relative(layout, r.path)}, {"reason", r.reason}, {"url", r.url}});
  }
  return out;
}

int Ingest(const ProjectLayout& layout, const ProjectConfig& config,
           const std::string& manifest_path, std::ostream& out) {
  NarrativeStore store = LoadStore(layout, config);
  const CorpusManifest manifest =
      CorpusManifest::FromFile(Resolve(layout, manifest_path));
  const IngestResult result = Ingest(manifest, config.ingest, &store);
  WriteAtomic(layout.documents(), DocumentsToJsonLines(result.documents));
  Json viewpoints = Json::object();
  for (const Document& d : result.documents) {
    viewpoints[d.viewpoint] = viewpoints.value(d.viewpoint, 0) + 1;
  }
  const Json report = {{"accepted", result.documents.size()},
                       {"per_viewpoint", viewpoints},
                       {"rejected", RejectionsJson(layout, result.rejected)},
                       {"unreadable", RejectionsJson(layout, result.unreadable)}};
  WriteAtomic(layout.reports() / "ingest.json", CanonicalDump(report));
  SaveStore(layout, store);
  out << "accepted " << result.documents.size() << ", rejected "
      << result.rejected.size() << ", unreadable " << result.unreadable.size()
      << "\n";
  return kExitOk;
}

int Mine(const ProjectLayout& layout, const ProjectConfig& config,
         const std::string& event, const std::string& viewpoint,
         std::optional<int> depth, const std::string& timespan, std::ostream& out) {
  NarrativeStore store = LoadStore(layout, config);
  const std::vector<Document> corpus = DocumentsFromJsonLines(
      ReadFileOrThrow(layout.documents(), "run ingest first"));
  MineConfig mc = config.mining;
  mc.event_name = event;
  mc.viewpoint = viewpoint;
  if (depth) mc.max_recursion_depth = *depth;
  if (!timespan.empty()) {
    const auto t = ParseIsoRange(timespan);
    if (!t) throw Error(ErrorCode::kInvalidArgument, "bad timespan " + timespan);
    mc.timespan = *t;
  }
  // Mining the same event again replaces the earlier result.
  const std::string previous = viewpoint + "/" + Slugify(event);
  if (store.HasNarrative(previous)) {
    const auto closure = store.EtaClosure(previous);
    store = WithoutNarratives(store, {closure.begin(), closure.end()});
  }
  LlmStack llm = MakeLlm(config, layout);
  std::unique_ptr<EmbeddingBackend> embedder = MakeEmbedder(config);
  const MiningReport report =
      narrative::Mine(mc, store, corpus, {*llm.backend, llm.prompts, *embedder});
  SaveStore(layout, store);
  WriteAtomic(layout.reports() /
                  ("mine-" + Slugify(viewpoint) + "-" + Slugify(event) + ".json"),
              CanonicalDump(report.ToJson(false)));
  out << report.narrative_id << "\n";
  return kExitOk;
}

int Bind(const ProjectLayout& layout, const ProjectConfig& config,
         const std::string& narrative_id, std::string source_kind, std::ostream& out) {
  NarrativeStore store = LoadStore(layout, config);
  if (!store.HasNarrative(narrative_id)) {
    throw Error(ErrorCode::kMissingNarrative, narrative_id);
  }
  if (source_kind.empty()) source_kind = config.binding.source;
  std::unique_ptr<KgSource> source;
  std::unique_ptr<ResponseCache> http_cache;
  if (source_kind == "live") {
    http_cache = std::make_unique<ResponseCache>(layout.http_cache());
    source = std::make_unique<LiveSource>(config.binding.live, *http_cache);
  } else {
    if (config.binding.snapshot.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "binding.snapshot is not configured");
    }
    source = SnapshotSource::FromFile(config.binding.snapshot);
  }
  std::unique_ptr<EmbeddingBackend> embedder;
  if (config.binding.similarity == "embedding") embedder = MakeEmbedder(config);
  const BindingReport report = BindNarrative(store, narrative_id, *source,
                                             embedder.get(), config.binding.options);
  SaveStore(layout, store);
  WriteAtomic(layout.reports() / ("bind-" + Slugify(narrative_id) + ".json"),
              CanonicalDump(report.ToJson()));
  size_t counts[3] = {0, 0, 0};
  for (const auto& [id, r] : report.bindings) ++counts[static_cast<int>(r.kind)];
  out << "bound " << report.bindings.size() << " events in "
      << report.visited.size() << " narratives: " << counts[0] << " direct, "
      << counts[1] << " indirect, " << counts[2] << " none\n";
  return kExitOk;
}

int Compare(const ProjectLayout& layout, const ProjectConfig& config,
            const std::vector<std::string>& narratives, bool flatten,
            std::optional<double> threshold, std::ostream& out) {
  const NarrativeStore store = LoadStore(layout, config);
  CompareOptions options = config.compare;
  if (flatten) options.flatten = true;
  if (threshold) options.sim_threshold = *threshold;
  std::unique_ptr<EmbeddingBackend> embedder = MakeEmbedder(config);
  const ComparisonReport report =
      CompareNarratives(store, narratives, *embedder, options);
  const std::string json = CanonicalDump(report.ToJson(store));
  WriteAtomic(layout.reports() / "compare.json", json);
  WriteAtomic(layout.reports() / "compare.dot", ComparisonToDot(store, report));
  out << json;
  return kExitOk;
}

int Export(const ProjectLayout& layout, const ProjectConfig& config,
           const std::string& narrative_id, const std::string& format,
           const std::string& output, std::ostream& out) {
  const NarrativeStore store = LoadStore(layout, config);
  if (!store.HasNarrative(narrative_id)) {
    throw Error(ErrorCode::kMissingNarrative, narrative_id);
  }
  const std::string text = format == "dot" ? NarrativeToDot(store, narrative_id)
                                           : SerializeNarratives(store, {narrative_id});
  if (output.empty()) {
    out << text;
  } else {
    WriteAtomic(Resolve(layout, output), text);
  }
  return kExitOk;
}

int Cache(const ProjectLayout& layout, const std::string& action, std::ostream& out) {
  ResponseCache llm(layout.llm_cache());
  ResponseCache http(layout.http_cache());
  if (action == "clear") {
    const size_t removed = llm.Clear() + http.Clear();
    out << "removed " << removed << " cached responses\n";
    return kExitOk;
  }
  for (const auto& [name, cache] : {std::pair<const char*, ResponseCache*>{"llm", &llm},
                                    {"http", &http}}) {
    const CacheStats stats = cache->Stats();
    out << name << ": " << stats.entries << " entries, " << stats.bytes << " bytes\n";
  }
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Mines, binds and compares viewpoint-specific event narratives.",
               "narrmine"};
  std::string root = ".";
  app.add_option("--root", root, "Project directory");
  app.require_subcommand(1);

  std::string manifest;
  auto* ingest = app.add_subcommand("ingest", "Read a corpus manifest");
  ingest->add_option("manifest", manifest, "JSON-lines manifest")->required();

  std::string event, viewpoint, timespan;
  std::optional<int> depth;
  auto* mine = app.add_subcommand("mine", "Mine a narrative for one viewpoint");
  mine->add_option("--event", event, "Event name")->required();
  mine->add_option("--viewpoint", viewpoint, "Viewpoint id")->required();
  mine->add_option("--depth", depth, "Maximum recursion depth")
      ->check(CLI::NonNegativeNumber);
  mine->add_option("--timespan", timespan, "<date>/<date>");

  std::string narrative_id, source;
  auto* bind = app.add_subcommand("bind", "Bind a narrative's events to a graph");
  bind->add_option("--narrative", narrative_id, "Narrative id")->required();
  bind->add_option("--source", source, "snapshot or live")
      ->check(CLI::IsMember({"snapshot", "live"}));

  std::vector<std::string> narratives;
  bool flatten = false;
  std::optional<double> threshold;
  auto* compare = app.add_subcommand("compare", "Compare narratives");
  compare->add_option("--narratives", narratives, "Narrative ids")->required();
  compare->add_flag("--flatten", flatten, "Include one level of child narratives");
  compare->add_option("--threshold", threshold, "Label similarity threshold")
      ->check(CLI::Range(0.0, 1.0));

  std::string format = "json", output;
  std::string export_id;
  auto* exp = app.add_subcommand("export", "Print a narrative as JSON or DOT");
  exp->add_option("--narrative", export_id, "Narrative id")->required();
  exp->add_option("--format", format, "json or dot")
      ->check(CLI::IsMember({"json", "dot"}));
  exp->add_option("--output", output, "Write to this file instead of stdout");

  std::string cache_action;
  auto* cache = app.add_subcommand("cache", "Inspect or clear cached responses");
  cache->add_option("action", cache_action, "clear or stats")
      ->required()
      ->check(CLI::IsMember({"clear", "stats"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "narrmine: " << e.what() << "\n" << app.help();
    return kExitUserError;
  }

  const ProjectLayout layout{fs::path(root)};
  try {
    if (!fs::is_directory(layout.root)) {
      throw Error(ErrorCode::kFileUnreadable, "no project directory " + root);
    }
    std::optional<ProjectLock> lock;
    lock.emplace(layout.lock());
    if (*cache) return Cache(layout, cache_action, out);
    const ProjectConfig config = LoadConfig(layout.config());
    if (*ingest) return Ingest(layout, config, manifest, out);
    if (*mine) return Mine(layout, config, event, viewpoint, depth, timespan, out);
    if (*bind) return Bind(layout, config, narrative_id, source, out);
    if (*compare) return Compare(layout, config, narratives, flatten, threshold, out);
    return Export(layout, config, export_id, format, output, out);
  } catch (const Error& e) {
    err << "narrmine: " << e.what() << "\n";
    return IsBackendFailure(e.code()) ? kExitBackendFailure : kExitUserError;
  } catch (const std::exception& e) {
    err << "narrmine: " << e.what() << "\n";
    return kExitUserError;
  }
}

}  // namespace narrative

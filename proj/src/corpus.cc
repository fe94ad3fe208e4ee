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

#include "narrative/corpus.h"

#include <algorithm>
#include <fstream>
#include <future>
#include <regex>
#include <sstream>

#include "json.hpp"
#include "narrative/error.h"
#include "narrative/text.h"

namespace narrative {
namespace {

using Json = nlohmann::json;

std::string ReadWholeFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileUnreadable, path.string());
  std::ostringstream out;
  out << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kFileUnreadable, path.string());
  return out.str();
}

bool LooksLikeMarkup(std::string_view body) {
  static const std::regex kTag(
      "<\\s*/?\\s*(html|head|body|div|span|p|script|style|a|br)\\b[^>]*>",
      std::regex::icase);
  const std::string s(body);
  return std::regex_search(s, kTag);
}

std::string StripTrailingBreaks(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

}  // namespace

CorpusManifest CorpusManifest::FromJsonLines(
    std::string_view text, const std::filesystem::path& base_dir) {
  CorpusManifest manifest;
  size_t line_no = 0;
  for (const std::string& line : SplitLines(text)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    try {
      const Json j = Json::parse(line);
      if (j.contains("exclude")) {
        manifest.exclusions.push_back(j.at("exclude").get<std::string>());
        continue;
      }
      ManifestEntry e;
      e.path = j.at("path").get<std::string>();
      if (e.path.is_relative()) e.path = base_dir / e.path;
      e.viewpoint = j.at("viewpoint").get<std::string>();
      e.outlet = j.at("outlet").get<std::string>();
      e.url = j.at("url").get<std::string>();
      if (j.contains("title") && !j.at("title").is_null()) {
        e.title = j.at("title").get<std::string>();
      }
      manifest.entries.push_back(std::move(e));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParseError,
                  "manifest line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return manifest;
}

CorpusManifest CorpusManifest::FromFile(const std::filesystem::path& path) {
  return FromJsonLines(ReadWholeFile(path), path.parent_path());
}

std::string DocumentId(std::string_view url, std::string_view body) {
  std::string data(url);
  data += '\0';
  data += body;
  return "doc-" + Sha256Hex(data).substr(0, 16);
}

Document MakeDocument(std::string_view content, const ManifestEntry& entry) {
  Document doc;
  doc.viewpoint = entry.viewpoint;
  doc.outlet = entry.outlet;
  doc.url = entry.url;
  std::string text(content);
  // Normalize Windows line endings.
  text.erase(std::remove(text.begin(), text.end(), '\r'), text.end());
  if (entry.title) {
    doc.title = *entry.title;
    doc.body = StripTrailingBreaks(text);
  } else {
    const size_t nl = text.find('\n');
    if (nl == std::string::npos) {
      doc.title = std::string(Trim(text));
    } else {
      doc.title = std::string(Trim(std::string_view(text).substr(0, nl)));
      doc.body = StripTrailingBreaks(text.substr(nl + 1));
    }
  }
  doc.char_count = Utf8Length(doc.body);
  doc.id = DocumentId(doc.url, doc.body);
  return doc;
}

IngestResult Ingest(const CorpusManifest& manifest, const IngestOptions& options,
                    const NarrativeStore* store) {
  if (options.min_chars >= options.max_chars) {
    throw Error(ErrorCode::kInvalidArgument, "min_chars must be < max_chars");
  }
  const size_t n = manifest.entries.size();
  // Parallel reads into per-entry slots; everything after is sequential.
  std::vector<std::optional<std::string>> contents(n);
  std::vector<std::string> read_errors(n);
  const size_t threads = std::max<size_t>(1, std::min(options.threads, n));
  std::vector<std::future<void>> workers;
  for (size_t t = 0; t < threads; ++t) {
    workers.push_back(std::async(std::launch::async, [&, t] {
      for (size_t i = t; i < n; i += threads) {
        try {
          contents[i] = ReadWholeFile(manifest.entries[i].path);
        } catch (const Error& e) {
          read_errors[i] = e.what();
        }
      }
    }));
  }
  for (auto& w : workers) w.get();

  IngestResult result;
  std::set<std::string> seen;
  for (size_t i = 0; i < n; ++i) {
    const ManifestEntry& entry = manifest.entries[i];
    auto reject = [&](std::string reason) {
      result.rejected.push_back({entry.path.string(), entry.url, std::move(reason)});
    };
    if (!contents[i]) {
      result.unreadable.push_back({entry.path.string(), entry.url, read_errors[i]});
      continue;
    }
    if (store != nullptr && !store->HasViewpoint(entry.viewpoint)) {
      reject("unknown viewpoint " + entry.viewpoint);
      continue;
    }
    const std::string url_lower = ToLower(entry.url);
    auto excluded = std::find_if(
        manifest.exclusions.begin(), manifest.exclusions.end(),
        [&](const std::string& s) {
          return url_lower.find(ToLower(s)) != std::string::npos;
        });
    if (excluded != manifest.exclusions.end()) {
      reject("excluded url (" + *excluded + ")");
      continue;
    }
    Document doc = MakeDocument(*contents[i], entry);
    if (doc.char_count < options.min_chars) {
      reject("too short (" + std::to_string(doc.char_count) + " chars)");
      continue;
    }
    if (doc.char_count > options.max_chars) {
      reject("too long (" + std::to_string(doc.char_count) + " chars)");
      continue;
    }
    if (LooksLikeMarkup(doc.body)) {
      reject("body contains markup");
      continue;
    }
    if (!seen.insert(doc.id).second) {
      reject("duplicate of " + doc.id);
      continue;
    }
    result.documents.push_back(std::move(doc));
  }
  std::sort(result.documents.begin(), result.documents.end(),
            [](const Document& a, const Document& b) { return a.id < b.id; });
  return result;
}

std::vector<Document> SelectViewpoint(const std::vector<Document>& documents,
                                      const std::string& viewpoint_id,
                                      const NarrativeStore& store) {
  if (!store.HasViewpoint(viewpoint_id)) {
    throw Error(ErrorCode::kUnknownViewpoint, viewpoint_id);
  }
  std::vector<Document> out;
  for (const Document& d : documents) {
    if (d.viewpoint == viewpoint_id) out.push_back(d);
  }
  return out;
}

std::string DocumentsToJsonLines(const std::vector<Document>& documents) {
  std::string out;
  for (const Document& d : documents) {
    const Json j = {{"body", d.body},       {"char_count", d.char_count},
                    {"id", d.id},           {"outlet", d.outlet},
                    {"title", d.title},     {"url", d.url},
                    {"viewpoint", d.viewpoint}};
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<Document> DocumentsFromJsonLines(std::string_view text) {
  std::vector<Document> out;
  for (const std::string& line : SplitLines(text)) {
    if (Trim(line).empty()) continue;
    try {
      const Json j = Json::parse(line);
      Document d;
      d.id = j.at("id").get<std::string>();
      d.viewpoint = j.at("viewpoint").get<std::string>();
      d.outlet = j.at("outlet").get<std::string>();
      d.url = j.at("url").get<std::string>();
      d.title = j.at("title").get<std::string>();
      d.body = j.at("body").get<std::string>();
      d.char_count = j.at("char_count").get<size_t>();
      out.push_back(std::move(d));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParseError, std::string("documents: ") + e.what());
    }
  }
  return out;
}

}  // namespace narrative

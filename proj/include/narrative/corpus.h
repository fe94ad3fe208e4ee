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

#ifndef NARRATIVE_CORPUS_H_
#define NARRATIVE_CORPUS_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "narrative/model.h"

namespace narrative {

struct Document {
  std::string id;
  std::string viewpoint;
  std::string outlet;
  std::string url;
  std::string title;
  std::string body;
  // Unicode code points in body.
  size_t char_count = 0;

  bool operator==(const Document&) const = default;
};

struct ManifestEntry {
  // Resolved against the manifest's directory when relative.
  std::filesystem::path path;
  std::string viewpoint;
  std::string outlet;
  std::string url;
  std::optional<std::string> title;
};

// JSON lines: {"path", "viewpoint", "outlet", "url", "title"?} per document,
// or {"exclude": "<substring>"} to drop every document whose URL contains the
// substring (case-insensitive).
struct CorpusManifest {
  std::vector<ManifestEntry> entries;
  std::vector<std::string> exclusions;

  static CorpusManifest FromJsonLines(std::string_view text,
                                      const std::filesystem::path& base_dir);
  static CorpusManifest FromFile(const std::filesystem::path& path);
};

struct IngestOptions {
  size_t min_chars = 1000;
  size_t max_chars = 8000;
  size_t threads = 4;
};

struct Rejection {
  std::string path;
  std::string url;
  std::string reason;
};

struct IngestResult {
  // Sorted by id.
  std::vector<Document> documents;
  std::vector<Rejection> rejected;
  // FileUnreadable entries; collected rather than thrown.
  std::vector<Rejection> unreadable;
};

// Reads, splits, filters and identifies the manifest's documents. Bounds are
// inclusive. When `store` is given, entries whose viewpoint it does not know
// are rejected. Throws InvalidArgument unless min_chars < max_chars.
IngestResult Ingest(const CorpusManifest& manifest, const IngestOptions& options,
                    const NarrativeStore* store = nullptr);

// Builds a document from raw file content: without a given title the first
// line is the title. Trailing line breaks are dropped from the body.
Document MakeDocument(std::string_view content, const ManifestEntry& entry);

// "doc-" + first 16 hex digits of sha256(url NUL body).
std::string DocumentId(std::string_view url, std::string_view body);

// The documents annotated with `viewpoint_id`. Throws UnknownViewpoint if
// the store does not know it.
std::vector<Document> SelectViewpoint(const std::vector<Document>& documents,
                                      const std::string& viewpoint_id,
                                      const NarrativeStore& store);

// Line-delimited JSON persistence of ingested documents.
std::string DocumentsToJsonLines(const std::vector<Document>& documents);
std::vector<Document> DocumentsFromJsonLines(std::string_view text);

}  // namespace narrative

#endif  // NARRATIVE_CORPUS_H_

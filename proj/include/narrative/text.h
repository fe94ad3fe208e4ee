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

#ifndef NARRATIVE_TEXT_H_
#define NARRATIVE_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace narrative {

// Number of Unicode code points in a UTF-8 string. Invalid lead bytes count
// as one character each.
size_t Utf8Length(std::string_view text);

std::string_view Trim(std::string_view text);
std::string ToLower(std::string_view text);
bool EqualsIgnoreCase(std::string_view a, std::string_view b);

std::vector<std::string> SplitLines(std::string_view text);

// Lowercase ASCII alphanumerics joined by '-'.
std::string Slugify(std::string_view text);

// 1 - levenshtein(a, b) / max(|a|, |b|) over lowercased, whitespace-collapsed
// code points. Two empty strings are identical (1.0).
double NormalizedEditSimilarity(std::string_view a, std::string_view b);

// Lowercase hex SHA-256 digest.
std::string Sha256Hex(std::string_view data);

}  // namespace narrative

#endif  // NARRATIVE_TEXT_H_

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

#ifndef NARRATIVE_TESTS_SUPPORT_KREMLIN_FIXTURE_H_
#define NARRATIVE_TESTS_SUPPORT_KREMLIN_FIXTURE_H_

#include <map>
#include <string>

#include "narrative/model.h"

namespace narrative::testing {

// Hand-encoded narrative of the February 2022 address by the Russian
// president, with two recursive nodes ("Redivision of the
// World" and "Iraq War").
struct KremlinNarrative {
  NarrativeStore store;
  std::string root;
  std::string redivision;
  std::string iraq_war;
  // Event label -> event id.
  std::map<std::string, std::string> ids;
};

KremlinNarrative BuildKremlinNarrative();

// Expected kind and graph id per labeled event.
struct ExpectedBinding {
  BindingKind kind;
  std::string kg_id;  // empty for kNone
};
std::map<std::string, ExpectedBinding> KremlinExpectedBindings();

}  // namespace narrative::testing

#endif  // NARRATIVE_TESTS_SUPPORT_KREMLIN_FIXTURE_H_

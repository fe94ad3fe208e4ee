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

#ifndef NARRATIVE_DOT_H_
#define NARRATIVE_DOT_H_

#include <string>

#include "narrative/compare.h"
#include "narrative/model.h"

namespace narrative {

// Graphviz border color of a viewpoint: a fixed palette indexed by the
// viewpoint's position among the store's viewpoints.
std::string ViewpointColor(const NarrativeStore& store, const std::string& viewpoint);

// Digraph of one narrative. A recursive node becomes a cluster holding the
// node itself and its child narrative, recursively. Bound events show their
// graph id ("~" marks Indirect); unbound ones are dashed. Throws
// MissingNarrative.
std::string NarrativeToDot(const NarrativeStore& store,
                           const std::string& narrative_id);

// Compared narratives side by side, one cluster each; events of a common
// group are filled and joined by undirected dotted edges.
std::string ComparisonToDot(const NarrativeStore& store,
                            const ComparisonReport& report);

}  // namespace narrative

#endif  // NARRATIVE_DOT_H_

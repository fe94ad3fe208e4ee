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

#include "narrative/dot.h"

#include <set>
#include <sstream>

#include "json.hpp"
#include "narrative/error.h"

namespace narrative {
namespace {

std::string Quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

std::string LiteralText(const Literal& literal) {
  if (const auto* s = std::get_if<std::string>(&literal.value)) return *s;
  if (const auto* d = std::get_if<DateLiteral>(&literal.value)) {
    return FormatIsoDate(d->date, d->granularity);
  }
  return nlohmann::json(std::get<double>(literal.value)).dump();
}

std::string EventLabel(const EventNode& e) {
  std::string label = e.label;
  if (e.time.known()) label += "\n(" + FormatTimeSpec(e.time) + ")";
  if (e.binding && e.binding->kg_id) {
    label += "\n";
    if (e.binding->kind == BindingKind::kIndirect) label += "~";
    label += *e.binding->kg_id;
  }
  return label;
}

std::string EventAttrs(const NarrativeStore& store, const EventNode& e,
                       const std::string& viewpoint, bool recursive) {
  std::string style = "rounded";
  if (e.binding && e.binding->kind == BindingKind::kNone) style += ",dashed";
  if (recursive) style += ",bold";
  return "[label=" + Quote(EventLabel(e)) + ", color=" +
         Quote(ViewpointColor(store, viewpoint)) + ", style=" + Quote(style) + "]";
}

class NarrativeWriter {
 public:
  NarrativeWriter(const NarrativeStore& store, std::ostringstream& out)
      : store_(store), out_(out) {}

  void Write(const std::string& nid, const std::string& path, int indent) {
    const Narrative& n = store_.narrative(nid);
    const std::string pad(indent, ' ');
    auto node_id = [&](const std::string& id) { return Quote(path + "/" + id); };
    for (const std::string& e : n.events) {
      const EventNode& event = store_.event(e);
      auto child = n.eta.find(e);
      if (child == n.eta.end()) {
        out_ << pad << node_id(e) << " " << EventAttrs(store_, event, n.narrator, false)
             << ";\n";
        continue;
      }
      const std::string cluster = "cluster_" + std::to_string(clusters_++);
      out_ << pad << "subgraph " << Quote(cluster) << " {\n";
      out_ << pad << "  label=" << Quote(event.label) << ";\n";
      out_ << pad << "  color=" << Quote(ViewpointColor(store_, n.narrator)) << ";\n";
      out_ << pad << "  style=\"rounded\";\n";
      out_ << pad << "  " << node_id(e) << " "
           << EventAttrs(store_, event, n.narrator, true) << ";\n";
      Write(child->second, path + "/" + e, indent + 2);
      out_ << pad << "}\n";
    }
    for (const std::string& id : n.entities) {
      const EntityRef& entity = store_.entity(id);
      std::string label = entity.label;
      if (entity.kg_id) label += "\n" + *entity.kg_id;
      out_ << pad << node_id(id) << " [label=" << Quote(label)
           << ", shape=ellipse];\n";
    }
    for (const std::string& id : n.literals) {
      out_ << pad << node_id(id) << " [label=" << Quote(LiteralText(store_.literal(id)))
           << ", shape=note];\n";
    }
    for (const NarrativeEdge& edge : n.narrative_edges) {
      out_ << pad << node_id(edge.source) << " -> " << node_id(edge.target)
           << " [label=" << Quote(edge.predicate) << "];\n";
    }
    for (const FactualEdge& edge : n.factual_edges) {
      out_ << pad << node_id(edge.source) << " -> " << node_id(edge.target)
           << " [label=" << Quote(edge.relation)
           << ", style=dashed, color=\"gray40\"];\n";
    }
  }

 private:
  const NarrativeStore& store_;
  std::ostringstream& out_;
  int clusters_ = 0;
};

}  // namespace

std::string ViewpointColor(const NarrativeStore& store,
                           const std::string& viewpoint) {
  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                   "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  size_t index = 0;
  for (const auto& [id, vp] : store.viewpoints()) {
    if (id == viewpoint) return kPalette[index % std::size(kPalette)];
    ++index;
  }
  return "black";
}

std::string NarrativeToDot(const NarrativeStore& store,
                           const std::string& narrative_id) {
  if (!store.HasNarrative(narrative_id)) {
    throw Error(ErrorCode::kMissingNarrative, narrative_id);
  }
  const Narrative& n = store.narrative(narrative_id);
  std::ostringstream out;
  out << "digraph " << Quote(narrative_id) << " {\n";
  out << "  label=" << Quote(narrative_id + " (" + n.narrator + ")") << ";\n";
  out << "  rankdir=LR;\n";
  out << "  node [shape=box];\n";
  NarrativeWriter(store, out).Write(narrative_id, narrative_id, 2);
  out << "}\n";
  return out.str();
}

std::string ComparisonToDot(const NarrativeStore& store,
                            const ComparisonReport& report) {
  std::set<std::pair<std::string, std::string>> common;
  for (const EventGroup& g : report.commonalities) {
    for (const GroupMember& m : g) common.insert({m.narrative_id, m.event_id});
  }
  auto node_id = [](const std::string& nid, const std::string& eid) {
    return Quote(nid + "/" + eid);
  };
  std::ostringstream out;
  out << "digraph \"comparison\" {\n";
  out << "  rankdir=LR;\n";
  out << "  node [shape=box, style=\"rounded\"];\n";
  for (size_t i = 0; i < report.narratives.size(); ++i) {
    const std::string& nid = report.narratives[i];
    const Narrative& n = store.narrative(nid);
    const std::string color = ViewpointColor(store, n.narrator);
    const std::vector<std::string> events =
        ComparedEvents(store, nid, report.options.flatten);
    const std::set<std::string> shown(events.begin(), events.end());
    out << "  subgraph \"cluster_" << i << "\" {\n";
    out << "    label=" << Quote(nid + " (" + n.narrator + ")") << ";\n";
    out << "    color=" << Quote(color) << ";\n";
    for (const std::string& e : events) {
      out << "    " << node_id(nid, e) << " [label=" << Quote(EventLabel(store.event(e)))
          << ", color=" << Quote(color) << ", penwidth=2";
      if (common.count({nid, e})) out << ", style=\"rounded,filled\", fillcolor=\"gray90\"";
      out << "];\n";
    }
    // Edges of the narrative and, when flattened, of its children.
    std::vector<const Narrative*> sources = {&n};
    if (report.options.flatten) {
      for (const auto& [event, child] : n.eta) sources.push_back(&store.narrative(child));
    }
    for (const Narrative* source : sources) {
      for (const NarrativeEdge& edge : source->narrative_edges) {
        if (!shown.count(edge.source) || !shown.count(edge.target)) continue;
        out << "    " << node_id(nid, edge.source) << " -> "
            << node_id(nid, edge.target) << " [label=" << Quote(edge.predicate)
            << "];\n";
      }
    }
    out << "  }\n";
  }
  for (const EventGroup& g : report.commonalities) {
    for (size_t k = 1; k < g.size(); ++k) {
      out << "  " << node_id(g[k - 1].narrative_id, g[k - 1].event_id) << " -> "
          << node_id(g[k].narrative_id, g[k].event_id)
          << " [dir=none, style=dotted, constraint=false];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace narrative

// Copyright 2026 The erkit Authors. All Rights Reserved.
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

#include "erkit/dot.hpp"

#include <unordered_set>

#include "erkit/errors.hpp"
#include "erkit/subprocess.hpp"

namespace erkit {

namespace {

std::string quote_id(const std::string& name) {
  std::string out = "\"";
  for (char c : name) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out.push_back(c);
    }
  }
  out += '"';
  return out;
}

std::string html_escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string attribute_cell(const Attribute& attr) {
  std::string text = html_escape(attr.name);
  if (!attr.declared_type.empty()) text += ": " + html_escape(attr.declared_type);
  std::string flags;
  if (attr.is_foreign_key) flags += "FK";
  if (attr.not_null) flags += flags.empty() ? "NN" : ",NN";
  if (attr.unique) flags += flags.empty() ? "U" : ",U";
  if (!flags.empty()) text += " [" + flags + "]";
  if (attr.is_primary_key) text = "<u>" + text + "</u>";
  return text;
}

std::string table_label(const Entity& entity) {
  std::string label = "<<table border=\"0\" cellborder=\"1\" cellspacing=\"0\">";
  label += "<tr><td bgcolor=\"lightsteelblue\"><b>" + html_escape(entity.name) + "</b></td></tr>";
  if (entity.parent) {
    label += "<tr><td><i>extends " + html_escape(*entity.parent) + "</i></td></tr>";
  }
  for (const Attribute& attr : entity.attributes) {
    label += "<tr><td align=\"left\">" + attribute_cell(attr) + "</td></tr>";
  }
  label += "</table>>";
  return label;
}

std::string plain_label(const Entity& entity) {
  std::string text = entity.name;
  if (entity.parent) text += "\n(extends " + *entity.parent + ")";
  return quote_id(text);
}

std::string mark_attr(const Endpoint& ep) {
  return std::string(1, to_char(ep.cardinality));
}

}  // namespace

std::string_view to_string(ImageFormat format) {
  switch (format) {
    case ImageFormat::png: return "png";
    case ImageFormat::svg: return "svg";
  }
  return "unknown";
}

std::string emit_dot(const ERModel& m, const RenderOptions& opts) {
  if (auto errors = validate_model(m); !errors.empty()) {
    throw Error(ErrorCode::InvalidModel, "cannot render invalid model: " + errors.front().message,
                errors.front().location);
  }

  std::unordered_set<std::string> used_ids;
  for (const Entity& entity : m.entities) used_ids.insert(entity.name);

  std::string out = "graph ermodel {\n";
  if (opts.title_visible && m.title) {
    out += "  graph [label=" + quote_id(*m.title) + ", labelloc=t, fontsize=16];\n";
  }
  if (opts.record_style == RecordStyle::TableLabels) {
    out += "  node [shape=plaintext, fontname=\"Helvetica\"];\n";
  } else {
    out += "  node [shape=box, fontname=\"Helvetica\"];\n";
  }
  out += "  edge [fontsize=10, labeldistance=1.6];\n";

  for (const Entity& entity : m.entities) {
    out += "  " + quote_id(entity.name) + " [label=";
    out += opts.record_style == RecordStyle::TableLabels ? table_label(entity)
                                                         : plain_label(entity);
    out += "];\n";
  }

  for (std::size_t k = 0; k < m.relationships.size(); ++k) {
    const Relationship& rel = m.relationships[k];
    if (rel.is_binary()) {
      out += "  " + quote_id(rel.endpoints[0].entity) + " -- " +
             quote_id(rel.endpoints[1].entity) + " [taillabel=\"" + mark_attr(rel.endpoints[0]) +
             "\", headlabel=\"" + mark_attr(rel.endpoints[1]) + "\"";
      if (rel.label) out += ", label=" + quote_id(*rel.label);
      out += "];\n";
      continue;
    }
    // N-ary: diamond hub, one spoke per endpoint carrying its mark.
    std::string hub = "nary_" + std::to_string(k);
    while (used_ids.count(hub)) hub += "_";
    used_ids.insert(hub);
    out += "  " + quote_id(hub) + " [shape=diamond, label=" +
           quote_id(rel.label ? *rel.label : "") + "];\n";
    for (const Endpoint& ep : rel.endpoints) {
      out += "  " + quote_id(hub) + " -- " + quote_id(ep.entity) + " [headlabel=\"" +
             mark_attr(ep) + "\"];\n";
    }
  }

  out += "}\n";
  return out;
}

std::string render_external(const std::string& dot, ImageFormat format,
                            const std::string& renderer_path) {
  auto resolved = find_executable(renderer_path);
  if (!resolved) {
    throw Error(ErrorCode::RendererUnavailable,
                "renderer executable '" + renderer_path + "' not found", renderer_path);
  }
  ProcessResult result =
      run_process({*resolved, "-T" + std::string(to_string(format))}, dot);
  if (result.exit_code != 0) {
    throw Error(ErrorCode::RendererFailed,
                "renderer exited with status " + std::to_string(result.exit_code) + ": " +
                    result.err,
                result.err);
  }
  return result.out;
}

}  // namespace erkit

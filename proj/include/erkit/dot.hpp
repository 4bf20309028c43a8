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

#pragma once

#include <string>

#include "erkit/model.hpp"

namespace erkit {

enum class RecordStyle {
  TableLabels,  // HTML-like table per entity, attributes listed, PKs underlined
  PlainNodes,   // box per entity, name only
};

struct RenderOptions {
  bool title_visible = true;
  RecordStyle record_style = RecordStyle::TableLabels;
};

/// Emit an undirected Graphviz document: one node per entity, one edge per
/// binary relationship with the cardinality marks as tail/head labels, and a
/// diamond node plus one edge per endpoint for n-ary relationships.
/// Generalization parents appear inside the entity label, not as edges.
/// Deterministic for a given model; throws Error(InvalidModel) when
/// validate_model(m) is non-empty.
std::string emit_dot(const ERModel& m, const RenderOptions& opts = {});

enum class ImageFormat { png, svg };

std::string_view to_string(ImageFormat format);

/// Run `renderer_path -T<format>` with the DOT text on stdin and return the
/// produced bytes. Never required by any analysis path. Throws
/// Error(RendererUnavailable) when the executable cannot be resolved and
/// Error(RendererFailed) (exit status + captured stderr) when it fails.
std::string render_external(const std::string& dot, ImageFormat format,
                            const std::string& renderer_path);

}  // namespace erkit

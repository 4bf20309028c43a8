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

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace erkit {

enum class SourceKind {
  PureDocument,     // the whole input already is the document
  FencedBlock,      // payload of the first markdown code fence
  EscapedString,    // document recovered by unescaping a string literal
  EmbeddedInProse,  // longest balanced {...} span inside surrounding text
};

std::string_view to_string(SourceKind kind);

struct ExtractionReport {
  SourceKind source_kind = SourceKind::PureDocument;
  std::size_t bytes_discarded = 0;  // 0 iff source_kind == PureDocument
  std::vector<std::string> warnings;
};

/// Recover a well-formed JSON object document from noisy text.
///
/// Attempts run in this fixed order; the first success wins:
///   1. the whole input (returned byte-identically),
///   2. the payload of the first ``` fenced code block,
///   3. the longest balanced {...} span (quote- and escape-aware),
///   4. unescape the input as a string literal, then retry 1-3.
/// A located candidate that only parses after stripping trailing commas is
/// accepted with a warning.
///
/// Throws Error(NoDocumentFound) when no candidate exists at all, and
/// Error(MalformedDocument) when a candidate was located but nothing parses.
std::pair<std::string, ExtractionReport> extract_document(std::string_view raw);

}  // namespace erkit

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

#include "erkit/extract.hpp"

#include <cctype>
#include <optional>

#include <nlohmann/json.hpp>

#include "erkit/errors.hpp"

namespace erkit {

std::string_view to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::PureDocument: return "pure-document";
    case SourceKind::FencedBlock: return "fenced-block";
    case SourceKind::EscapedString: return "escaped-string";
    case SourceKind::EmbeddedInProse: return "embedded-in-prose";
  }
  return "unknown";
}

namespace {

using nlohmann::json;

bool parses_as_object(std::string_view text) {
  json parsed = json::parse(text, nullptr, /*allow_exceptions=*/false);
  return !parsed.is_discarded() && parsed.is_object();
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Drop commas that directly precede a closing brace/bracket, outside strings.
std::string strip_trailing_commas(std::string_view s, bool* changed) {
  std::string out;
  out.reserve(s.size());
  bool in_str = false, esc = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (in_str) {
      out.push_back(c);
      if (esc) { esc = false; continue; }
      if (c == '\\') { esc = true; continue; }
      if (c == '"') in_str = false;
      continue;
    }
    if (c == '"') { in_str = true; out.push_back(c); continue; }
    if (c == ',') {
      std::size_t j = i + 1;
      while (j < s.size() && std::isspace(static_cast<unsigned char>(s[j]))) ++j;
      if (j < s.size() && (s[j] == '}' || s[j] == ']')) {
        *changed = true;
        continue;  // drop the comma
      }
    }
    out.push_back(c);
  }
  return out;
}

// Parse candidate strictly, then once more with the lenient comma repair.
std::optional<std::string> accept_candidate(const std::string& candidate,
                                            std::vector<std::string>* warnings) {
  if (parses_as_object(candidate)) return candidate;
  bool changed = false;
  std::string repaired = strip_trailing_commas(candidate, &changed);
  if (changed && parses_as_object(repaired)) {
    warnings->push_back("repaired trailing commas in candidate document");
    return repaired;
  }
  return std::nullopt;
}

// Payload of the first ``` fence, trimmed; nullopt when no complete fence.
std::optional<std::string> first_fenced_block(std::string_view raw) {
  std::size_t open = raw.find("```");
  if (open == std::string_view::npos) return std::nullopt;
  std::size_t payload_start = open + 3;
  // Skip an optional language tag up to end of line.
  std::size_t eol = raw.find('\n', payload_start);
  if (eol == std::string_view::npos) return std::nullopt;
  payload_start = eol + 1;
  std::size_t close = raw.find("```", payload_start);
  if (close == std::string_view::npos) return std::nullopt;
  return trim(raw.substr(payload_start, close - payload_start));
}

// Longest balanced {...} span outside string literals; earliest on ties.
std::optional<std::string> longest_balanced_span(std::string_view raw) {
  std::optional<std::pair<std::size_t, std::size_t>> best;  // (start, length)
  bool in_str = false, esc = false;
  int depth = 0;
  std::size_t span_start = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    char c = raw[i];
    if (in_str) {
      if (esc) { esc = false; continue; }
      if (c == '\\') { esc = true; continue; }
      if (c == '"') in_str = false;
      continue;
    }
    if (c == '"') {
      if (depth > 0) in_str = true;  // quotes outside any span are prose
      continue;
    }
    if (c == '{') {
      if (depth == 0) span_start = i;
      ++depth;
    } else if (c == '}') {
      if (depth == 0) continue;  // stray closer in prose
      if (--depth == 0) {
        std::size_t len = i - span_start + 1;
        if (!best || len > best->second) best = {span_start, len};
      }
    }
  }
  if (!best) return std::nullopt;
  return std::string(raw.substr(best->first, best->second));
}

// Undo one level of string-literal escaping: strip one pair of surrounding
// quotes and process backslash escapes. Unknown escapes pass through.
std::string unescape_literal(std::string_view raw) {
  std::string s = trim(raw);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s = s.substr(1, s.size() - 2);
  }
  std::string out;
  out.reserve(s.size());
  auto hex4 = [&](std::size_t pos) -> int {
    if (pos + 4 > s.size()) return -1;
    int v = 0;
    for (std::size_t k = 0; k < 4; ++k) {
      char c = s[pos + k];
      int d = (c >= '0' && c <= '9')   ? c - '0'
              : (c >= 'a' && c <= 'f') ? c - 'a' + 10
              : (c >= 'A' && c <= 'F') ? c - 'A' + 10
                                       : -1;
      if (d < 0) return -1;
      v = v * 16 + d;
    }
    return v;
  };
  auto append_utf8 = [&](unsigned cp) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c != '\\' || i + 1 >= s.size()) {
      out.push_back(c);
      continue;
    }
    char next = s[i + 1];
    switch (next) {
      case '"': out.push_back('"'); ++i; break;
      case '\\': out.push_back('\\'); ++i; break;
      case '/': out.push_back('/'); ++i; break;
      case 'b': out.push_back('\b'); ++i; break;
      case 'f': out.push_back('\f'); ++i; break;
      case 'n': out.push_back('\n'); ++i; break;
      case 'r': out.push_back('\r'); ++i; break;
      case 't': out.push_back('\t'); ++i; break;
      case 'u': {
        int hi = hex4(i + 2);
        if (hi < 0) { out.push_back(c); break; }
        unsigned cp = static_cast<unsigned>(hi);
        std::size_t consumed = 6;
        if (cp >= 0xD800 && cp <= 0xDBFF && i + 7 < s.size() && s[i + 6] == '\\' &&
            s[i + 7] == 'u') {
          int lo = hex4(i + 8);
          if (lo >= 0xDC00 && lo <= 0xDFFF) {
            cp = 0x10000 + ((cp - 0xD800) << 10) + (static_cast<unsigned>(lo) - 0xDC00);
            consumed = 12;
          }
        }
        append_utf8(cp);
        i += consumed - 1;
        break;
      }
      default: out.push_back(c); break;  // keep unknown escape verbatim
    }
  }
  return out;
}

struct Located {
  std::string document;
  SourceKind kind;
};

// Attempts 1-3 over one text. Attempt 1 returns the text byte-identically;
// the unescape retry reuses this with the unescaped text and re-tags the kind.
std::optional<Located> locate_document(std::string_view text,
                                       std::vector<std::string>* warnings,
                                       bool* candidate_seen) {
  if (parses_as_object(text)) {
    return Located{std::string(text), SourceKind::PureDocument};
  }
  if (auto payload = first_fenced_block(text)) {
    *candidate_seen = true;
    if (auto doc = accept_candidate(*payload, warnings)) {
      return Located{*doc, SourceKind::FencedBlock};
    }
  }
  if (text.find('{') != std::string_view::npos) *candidate_seen = true;
  if (auto span = longest_balanced_span(text)) {
    if (auto doc = accept_candidate(*span, warnings)) {
      return Located{*doc, SourceKind::EmbeddedInProse};
    }
  }
  return std::nullopt;
}

}  // namespace

std::pair<std::string, ExtractionReport> extract_document(std::string_view raw) {
  ExtractionReport report;
  bool candidate_seen = false;

  auto finish = [&](Located located) {
    report.source_kind = located.kind;
    report.bytes_discarded = raw.size() - located.document.size();
    switch (located.kind) {
      case SourceKind::PureDocument:
        break;
      case SourceKind::FencedBlock:
        report.warnings.push_back("extracted fenced code block; discarded " +
                                  std::to_string(report.bytes_discarded) +
                                  " bytes of surrounding text");
        break;
      case SourceKind::EscapedString:
        report.warnings.push_back("unescaped string-literal payload; discarded " +
                                  std::to_string(report.bytes_discarded) +
                                  " wrapper/escape bytes");
        break;
      case SourceKind::EmbeddedInProse:
        report.warnings.push_back("extracted balanced object span; discarded " +
                                  std::to_string(report.bytes_discarded) +
                                  " bytes of surrounding text");
        break;
    }
    return std::make_pair(std::move(located.document), std::move(report));
  };

  if (auto located = locate_document(raw, &report.warnings, &candidate_seen)) {
    return finish(std::move(*located));
  }

  // Attempt 4: unescape once, then retry attempts 1-3 on the result.
  std::string unescaped = unescape_literal(raw);
  if (unescaped != raw) {
    if (auto located = locate_document(unescaped, &report.warnings, &candidate_seen)) {
      located->kind = SourceKind::EscapedString;
      return finish(std::move(*located));
    }
  }

  if (candidate_seen) {
    std::string snippet = trim(raw).substr(0, 80);
    throw Error(ErrorCode::MalformedDocument,
                "located a document candidate but it cannot be parsed", snippet);
  }
  throw Error(ErrorCode::NoDocumentFound, "no document candidate found in input");
}

}  // namespace erkit

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

#include "erkit/relation.hpp"

#include <cctype>

#include "erkit/errors.hpp"

namespace erkit {

namespace {

bool is_blank(char c) { return std::isspace(static_cast<unsigned char>(c)); }

std::vector<std::string> split_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_blank(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_blank(text[i])) ++i;
    if (i > start) tokens.emplace_back(text.substr(start, i - start));
  }
  return tokens;
}

Endpoint parse_endpoint(const std::string& token, std::string_view whole) {
  std::size_t colon = token.find(':');
  Endpoint ep;
  if (colon == std::string::npos) {
    ep.entity = token;
  } else {
    ep.entity = token.substr(0, colon);
    std::string attr = token.substr(colon + 1);
    if (attr.empty() || attr.find(':') != std::string::npos) {
      throw Error(ErrorCode::MalformedRelation,
                  "malformed endpoint '" + token + "' in relation '" + std::string(whole) + "'",
                  token);
    }
    ep.attribute = std::move(attr);
  }
  if (ep.entity.empty()) {
    throw Error(ErrorCode::MalformedRelation,
                "endpoint '" + token + "' has no entity name", token);
  }
  return ep;
}

Cardinality parse_mark(char c, const std::string& pair_token) {
  if (auto card = cardinality_from_char(c)) return *card;
  throw Error(ErrorCode::BadCardinalitySymbol,
              "unknown cardinality mark '" + std::string(1, c) + "' in '" + pair_token + "'",
              std::string(1, c));
}

bool grammar_safe_name(const std::string& name) {
  if (name.empty()) return false;
  for (char c : name) {
    if (is_blank(c) || c == ':') return false;
  }
  return true;
}

}  // namespace

Relationship parse_relation(std::string_view text) {
  auto tokens = split_tokens(text);
  if (tokens.size() != 3) {
    throw Error(ErrorCode::MalformedRelation,
                "expected 'endpoint CARD--CARD endpoint', got '" + std::string(text) + "'",
                std::string(text));
  }
  const std::string& pair = tokens[1];
  std::size_t dashes = pair.find("--");
  if (dashes == std::string::npos || dashes != 1 || pair.size() != 4) {
    throw Error(ErrorCode::MalformedRelation,
                "malformed cardinality pair '" + pair + "'", pair);
  }
  Relationship rel;
  rel.endpoints.push_back(parse_endpoint(tokens[0], text));
  rel.endpoints.push_back(parse_endpoint(tokens[2], text));
  rel.endpoints[0].cardinality = parse_mark(pair[0], pair);
  rel.endpoints[1].cardinality = parse_mark(pair[3], pair);
  return rel;
}

bool grammar_representable(const Relationship& rel) {
  if (rel.endpoints.size() != 2) return false;
  for (const Endpoint& ep : rel.endpoints) {
    if (!grammar_safe_name(ep.entity)) return false;
    if (ep.attribute && !grammar_safe_name(*ep.attribute)) return false;
  }
  return true;
}

std::string serialize_relation(const Relationship& rel) {
  if (rel.endpoints.size() != 2) {
    throw Error(ErrorCode::NotBinary,
                "relation strings are binary; relationship has " +
                    std::to_string(rel.endpoints.size()) + " endpoints");
  }
  if (!grammar_representable(rel)) {
    throw Error(ErrorCode::MalformedRelation,
                "endpoint name not representable in the relation-string grammar");
  }
  auto endpoint_text = [](const Endpoint& ep) {
    return ep.attribute ? ep.entity + ":" + *ep.attribute : ep.entity;
  };
  std::string out = endpoint_text(rel.endpoints[0]);
  out += ' ';
  out += to_char(rel.endpoints[0].cardinality);
  out += "--";
  out += to_char(rel.endpoints[1].cardinality);
  out += ' ';
  out += endpoint_text(rel.endpoints[1]);
  return out;
}

}  // namespace erkit

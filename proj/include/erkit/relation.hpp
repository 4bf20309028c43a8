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
#include <string_view>

#include "erkit/model.hpp"

namespace erkit {

// Relation-string grammar (public, bit-exact contract):
//
//   relation := endpoint WS card "--" card WS endpoint
//   endpoint := entity (":" attribute)?
//   card     := "1" | "*" | "?" | "+"
//
// Whitespace around the cardinality pair may be any positive run of blanks;
// serialization always emits single spaces.

/// Parse a relation string into a 2-endpoint Relationship, preserving
/// left/right order. Throws Error(BadCardinalitySymbol) for an unknown mark
/// and Error(MalformedRelation) for any other grammar mismatch; both carry
/// the offending substring in detail().
Relationship parse_relation(std::string_view text);

/// Inverse of parse_relation. Throws Error(NotBinary) unless the relationship
/// has exactly 2 endpoints, and Error(MalformedRelation) when a name cannot
/// be represented in the grammar (empty, contains whitespace or ':').
std::string serialize_relation(const Relationship& rel);

/// True when every endpoint name of a binary relationship survives the
/// string grammar (serialize_relation will not throw MalformedRelation).
bool grammar_representable(const Relationship& rel);

}  // namespace erkit

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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace erkit {

/// Per-endpoint multiplicity mark. Serialized form is exactly one of the
/// four characters '1', '*', '?', '+'.
enum class Cardinality : char {
  ExactlyOne = '1',
  ZeroOrMore = '*',
  ZeroOrOne = '?',
  OneOrMore = '+',
};

inline char to_char(Cardinality c) { return static_cast<char>(c); }
std::optional<Cardinality> cardinality_from_char(char c);

struct Attribute {
  std::string name;
  std::string declared_type;  // free text, may be empty
  bool is_primary_key = false;
  bool is_foreign_key = false;
  bool not_null = false;
  bool unique = false;

  bool operator==(const Attribute&) const = default;
};

struct Entity {
  std::string name;
  std::vector<Attribute> attributes;
  std::optional<std::string> parent;  // generalization/specialization link

  bool operator==(const Entity&) const = default;
};

struct Endpoint {
  std::string entity;
  std::optional<std::string> attribute;
  Cardinality cardinality = Cardinality::ExactlyOne;

  bool operator==(const Endpoint&) const = default;
};

struct Relationship {
  std::vector<Endpoint> endpoints;  // length >= 2; exactly 2 for binary
  std::optional<std::string> label;

  bool is_binary() const { return endpoints.size() == 2; }
  bool operator==(const Relationship&) const = default;
};

struct ERModel {
  std::optional<std::string> title;
  std::vector<Entity> entities;
  std::vector<Relationship> relationships;

  bool operator==(const ERModel&) const = default;
};

/// Lowercase + strip non-alphanumerics. Used for uniqueness and matching
/// ("HospitalDepartment" and "hospital_department" collapse to the same key).
std::string normalize_name(std::string_view name);

/// Resolve an entity reference against a model: exact name first, then
/// normalized name (first entity in model order on normalized ties).
/// Returns the entity index or nullopt.
std::optional<std::size_t> resolve_entity(const ERModel& m, std::string_view name);

/// Resolve an attribute reference within an entity, same lookup policy.
std::optional<std::size_t> resolve_attribute(const Entity& e, std::string_view name);

struct StructuralError {
  enum class Kind {
    EmptyEntityName,
    EmptyAttributeName,
    DuplicateEntityName,
    DuplicateAttributeName,
    UnknownParent,
    CyclicHierarchy,
    TooFewEndpoints,
    UnknownEntityReference,
    UnknownAttributeReference,
  };
  Kind kind;
  std::string location;  // e.g. "relationships[3].endpoints[1]"
  std::string message;
};

std::string_view to_string(StructuralError::Kind kind);

/// Structural consistency check. Empty result iff all endpoint references
/// resolve, entity names are unique (exact), attribute names are unique per
/// entity (exact), parents exist and parent chains are acyclic.
std::vector<StructuralError> validate_model(const ERModel& m);

/// Stable content key for a relationship, used for canonical ordering.
std::string relationship_sort_key(const Relationship& r);

/// Order-stable form: entities sorted by (normalized name, name),
/// relationships sorted by content key. Idempotent; no semantic change.
/// Throws Error(InvalidModel) when validate_model(m) is non-empty.
ERModel canonicalize(const ERModel& m);

}  // namespace erkit

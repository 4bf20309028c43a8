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

#include "erkit/model.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "erkit/errors.hpp"
#include "erkit/relation.hpp"

namespace erkit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::BadCardinalitySymbol: return "BadCardinalitySymbol";
    case ErrorCode::MalformedRelation: return "MalformedRelation";
    case ErrorCode::NotBinary: return "NotBinary";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::NoDocumentFound: return "NoDocumentFound";
    case ErrorCode::MalformedDocument: return "MalformedDocument";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::UnknownEntityReference: return "UnknownEntityReference";
    case ErrorCode::UnknownAttributeReference: return "UnknownAttributeReference";
    case ErrorCode::UnknownRule: return "UnknownRule";
    case ErrorCode::EmptyRequirements: return "EmptyRequirements";
    case ErrorCode::ProviderError: return "ProviderError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::RendererUnavailable: return "RendererUnavailable";
    case ErrorCode::RendererFailed: return "RendererFailed";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

std::string_view to_string(StructuralError::Kind kind) {
  using K = StructuralError::Kind;
  switch (kind) {
    case K::EmptyEntityName: return "EmptyEntityName";
    case K::EmptyAttributeName: return "EmptyAttributeName";
    case K::DuplicateEntityName: return "DuplicateEntityName";
    case K::DuplicateAttributeName: return "DuplicateAttributeName";
    case K::UnknownParent: return "UnknownParent";
    case K::CyclicHierarchy: return "CyclicHierarchy";
    case K::TooFewEndpoints: return "TooFewEndpoints";
    case K::UnknownEntityReference: return "UnknownEntityReference";
    case K::UnknownAttributeReference: return "UnknownAttributeReference";
  }
  return "UnknownStructuralError";
}

std::optional<Cardinality> cardinality_from_char(char c) {
  switch (c) {
    case '1': return Cardinality::ExactlyOne;
    case '*': return Cardinality::ZeroOrMore;
    case '?': return Cardinality::ZeroOrOne;
    case '+': return Cardinality::OneOrMore;
    default: return std::nullopt;
  }
}

std::string normalize_name(std::string_view name) {
  std::string out;
  out.reserve(name.size());
  for (unsigned char c : name) {
    if (std::isalnum(c)) out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

std::optional<std::size_t> resolve_entity(const ERModel& m, std::string_view name) {
  for (std::size_t i = 0; i < m.entities.size(); ++i) {
    if (m.entities[i].name == name) return i;
  }
  const std::string key = normalize_name(name);
  if (key.empty()) return std::nullopt;
  for (std::size_t i = 0; i < m.entities.size(); ++i) {
    if (normalize_name(m.entities[i].name) == key) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> resolve_attribute(const Entity& e, std::string_view name) {
  for (std::size_t i = 0; i < e.attributes.size(); ++i) {
    if (e.attributes[i].name == name) return i;
  }
  const std::string key = normalize_name(name);
  if (key.empty()) return std::nullopt;
  for (std::size_t i = 0; i < e.attributes.size(); ++i) {
    if (normalize_name(e.attributes[i].name) == key) return i;
  }
  return std::nullopt;
}

namespace {

std::string entity_path(std::size_t i) { return "entities[" + std::to_string(i) + "]"; }

std::string attribute_path(std::size_t i, std::size_t j) {
  return entity_path(i) + ".attributes[" + std::to_string(j) + "]";
}

std::string endpoint_path(std::size_t k, std::size_t e) {
  return "relationships[" + std::to_string(k) + "].endpoints[" + std::to_string(e) + "]";
}

}  // namespace

std::vector<StructuralError> validate_model(const ERModel& m) {
  using K = StructuralError::Kind;
  std::vector<StructuralError> errors;

  std::unordered_map<std::string, std::size_t> entity_by_name;
  for (std::size_t i = 0; i < m.entities.size(); ++i) {
    const Entity& ent = m.entities[i];
    if (ent.name.empty()) {
      errors.push_back({K::EmptyEntityName, entity_path(i), "entity name is empty"});
    } else if (auto [it, inserted] = entity_by_name.emplace(ent.name, i); !inserted) {
      errors.push_back({K::DuplicateEntityName, entity_path(i),
                        "entity name '" + ent.name + "' already used at " + entity_path(it->second)});
    }
    std::unordered_map<std::string, std::size_t> attr_by_name;
    for (std::size_t j = 0; j < ent.attributes.size(); ++j) {
      const Attribute& attr = ent.attributes[j];
      if (attr.name.empty()) {
        errors.push_back({K::EmptyAttributeName, attribute_path(i, j), "attribute name is empty"});
      } else if (auto [it, inserted] = attr_by_name.emplace(attr.name, j); !inserted) {
        errors.push_back({K::DuplicateAttributeName, attribute_path(i, j),
                          "attribute '" + attr.name + "' duplicated in entity '" + ent.name + "'"});
      }
    }
  }

  // Parent links: existence first, then one error per cycle.
  std::vector<std::optional<std::size_t>> parent_of(m.entities.size());
  for (std::size_t i = 0; i < m.entities.size(); ++i) {
    const auto& parent = m.entities[i].parent;
    if (!parent) continue;
    auto target = resolve_entity(m, *parent);
    if (!target) {
      errors.push_back({K::UnknownParent, entity_path(i) + ".parent",
                        "parent '" + *parent + "' of entity '" + m.entities[i].name +
                            "' does not name an entity"});
    } else {
      parent_of[i] = *target;
    }
  }
  enum class Mark { Unvisited, InProgress, Done };
  std::vector<Mark> mark(m.entities.size(), Mark::Unvisited);
  for (std::size_t root = 0; root < m.entities.size(); ++root) {
    if (mark[root] != Mark::Unvisited) continue;
    std::vector<std::size_t> path;
    std::size_t cur = root;
    while (true) {
      if (mark[cur] == Mark::InProgress) {
        // Found a new cycle: report it once, at its smallest entity index.
        auto cycle_start = std::find(path.begin(), path.end(), cur);
        std::size_t report_at = *std::min_element(cycle_start, path.end());
        std::string names;
        for (auto it = cycle_start; it != path.end(); ++it) {
          if (!names.empty()) names += " -> ";
          names += m.entities[*it].name;
        }
        errors.push_back({K::CyclicHierarchy, entity_path(report_at) + ".parent",
                          "generalization cycle: " + names});
        break;
      }
      if (mark[cur] == Mark::Done) break;
      mark[cur] = Mark::InProgress;
      path.push_back(cur);
      if (!parent_of[cur]) break;
      cur = *parent_of[cur];
    }
    for (std::size_t i : path) mark[i] = Mark::Done;
  }

  for (std::size_t k = 0; k < m.relationships.size(); ++k) {
    const Relationship& rel = m.relationships[k];
    if (rel.endpoints.size() < 2) {
      errors.push_back({K::TooFewEndpoints, "relationships[" + std::to_string(k) + "]",
                        "relationship has " + std::to_string(rel.endpoints.size()) +
                            " endpoint(s), need at least 2"});
      continue;
    }
    for (std::size_t e = 0; e < rel.endpoints.size(); ++e) {
      const Endpoint& ep = rel.endpoints[e];
      auto ent = resolve_entity(m, ep.entity);
      if (!ent) {
        errors.push_back({K::UnknownEntityReference, endpoint_path(k, e),
                          "endpoint references unknown entity '" + ep.entity + "'"});
        continue;
      }
      if (ep.attribute && !resolve_attribute(m.entities[*ent], *ep.attribute)) {
        errors.push_back({K::UnknownAttributeReference, endpoint_path(k, e),
                          "endpoint references unknown attribute '" + *ep.attribute +
                              "' of entity '" + m.entities[*ent].name + "'"});
      }
    }
  }

  return errors;
}

std::string relationship_sort_key(const Relationship& r) {
  // Full content key: equal keys imply equal relationships.
  std::string key;
  for (const Endpoint& ep : r.endpoints) {
    key += ep.entity;
    key += '\x1f';
    if (ep.attribute) key += *ep.attribute;
    key += '\x1f';
    key += to_char(ep.cardinality);
    key += '\x1e';
  }
  key += '\x1d';
  if (r.label) key += *r.label;
  return key;
}

ERModel canonicalize(const ERModel& m) {
  if (auto errors = validate_model(m); !errors.empty()) {
    throw Error(ErrorCode::InvalidModel,
                "cannot canonicalize invalid model: " + errors.front().message,
                errors.front().location);
  }
  ERModel out = m;
  std::sort(out.entities.begin(), out.entities.end(), [](const Entity& a, const Entity& b) {
    auto ka = normalize_name(a.name);
    auto kb = normalize_name(b.name);
    return ka != kb ? ka < kb : a.name < b.name;
  });
  std::sort(out.relationships.begin(), out.relationships.end(),
            [](const Relationship& a, const Relationship& b) {
              return relationship_sort_key(a) < relationship_sort_key(b);
            });
  return out;
}

}  // namespace erkit

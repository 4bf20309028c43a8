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

#include "erkit/interchange.hpp"

#include "erkit/errors.hpp"
#include "erkit/relation.hpp"

namespace erkit {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void schema_violation(const std::string& path, const std::string& expected,
                                   const std::string& found) {
  throw Error(ErrorCode::SchemaViolation,
              "schema violation at " + (path.empty() ? std::string("document root") : path) +
                  ": expected " + expected + ", found " + found,
              path);
}

const json& require(const json& obj, const char* key, const std::string& path,
                    const char* expected) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_violation(path + "." + key, expected, "missing");
  return *it;
}

std::string require_string(const json& obj, const char* key, const std::string& path) {
  const json& v = require(obj, key, path, "string");
  if (!v.is_string()) schema_violation(path + "." + key, "string", v.type_name());
  std::string s = v.get<std::string>();
  if (s.empty()) schema_violation(path + "." + key, "non-empty string", "empty string");
  return s;
}

std::string optional_string(const json& obj, const char* key, const std::string& path,
                            const std::string& fallback = {}) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  if (!it->is_string()) schema_violation(path + "." + key, "string", it->type_name());
  return it->get<std::string>();
}

bool optional_flag(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return false;
  if (!it->is_boolean()) schema_violation(path + "." + key, "boolean", it->type_name());
  return it->get<bool>();
}

Attribute parse_attribute(const json& j, const std::string& path) {
  if (!j.is_object()) schema_violation(path, "object", j.type_name());
  Attribute attr;
  attr.name = require_string(j, "name", path);
  attr.declared_type = optional_string(j, "type", path);
  attr.is_primary_key = optional_flag(j, "pk", path);
  attr.is_foreign_key = optional_flag(j, "fk", path);
  attr.not_null = optional_flag(j, "not_null", path);
  attr.unique = optional_flag(j, "unique", path);
  return attr;
}

Entity parse_entity(const json& j, const std::string& path) {
  if (!j.is_object()) schema_violation(path, "object", j.type_name());
  Entity entity;
  entity.name = require_string(j, "name", path);
  if (auto it = j.find("attributes"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) schema_violation(path + ".attributes", "array", it->type_name());
    for (std::size_t i = 0; i < it->size(); ++i) {
      entity.attributes.push_back(
          parse_attribute((*it)[i], path + ".attributes[" + std::to_string(i) + "]"));
    }
  }
  if (auto parent = optional_string(j, "parent", path); !parent.empty()) {
    entity.parent = parent;
  }
  return entity;
}

Endpoint parse_endpoint_json(const json& j, const std::string& path) {
  if (!j.is_object()) schema_violation(path, "object", j.type_name());
  Endpoint ep;
  ep.entity = require_string(j, "entity", path);
  if (auto attr = optional_string(j, "attribute", path); !attr.empty()) {
    ep.attribute = attr;
  }
  std::string mark = require_string(j, "cardinality", path);
  if (mark.size() != 1 || !cardinality_from_char(mark[0])) {
    throw Error(ErrorCode::BadCardinalitySymbol,
                "unknown cardinality mark '" + mark + "' at " + path + ".cardinality",
                path + ".cardinality");
  }
  ep.cardinality = *cardinality_from_char(mark[0]);
  return ep;
}

Relationship parse_relationship(const json& j, const std::string& path) {
  if (j.is_string()) {
    try {
      return parse_relation(j.get<std::string>());
    } catch (const Error& e) {
      throw Error(e.code(), std::string(e.what()) + " at " + path, path);
    }
  }
  if (!j.is_object()) schema_violation(path, "string or endpoint list", j.type_name());
  Relationship rel;
  const json& endpoints = require(j, "endpoints", path, "array");
  if (!endpoints.is_array()) {
    schema_violation(path + ".endpoints", "array", endpoints.type_name());
  }
  if (endpoints.size() < 2) {
    schema_violation(path + ".endpoints", "array with at least 2 endpoints",
                     "array of size " + std::to_string(endpoints.size()));
  }
  for (std::size_t i = 0; i < endpoints.size(); ++i) {
    rel.endpoints.push_back(
        parse_endpoint_json(endpoints[i], path + ".endpoints[" + std::to_string(i) + "]"));
  }
  if (auto label = optional_string(j, "label", path); !label.empty()) {
    rel.label = label;
  }
  return rel;
}

}  // namespace

ERModel parse_model(std::string_view document) {
  json doc = json::parse(document, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    throw Error(ErrorCode::MalformedDocument, "document is not well-formed JSON");
  }
  if (!doc.is_object()) schema_violation("", "object", doc.type_name());

  if (auto it = doc.find("format_version"); it != doc.end()) {
    if (!it->is_string()) schema_violation("format_version", "string", it->type_name());
    if (it->get<std::string>() != kFormatVersion) {
      schema_violation("format_version", "\"" + std::string(kFormatVersion) + "\"",
                       "\"" + it->get<std::string>() + "\"");
    }
  }

  ERModel model;
  if (auto title = optional_string(doc, "title", ""); !title.empty()) {
    model.title = title;
  }
  if (auto it = doc.find("entities"); it != doc.end() && !it->is_null()) {
    if (!it->is_array()) schema_violation("entities", "array", it->type_name());
    for (std::size_t i = 0; i < it->size(); ++i) {
      model.entities.push_back(parse_entity((*it)[i], "entities[" + std::to_string(i) + "]"));
    }
  }
  if (auto it = doc.find("relationships"); it != doc.end() && !it->is_null()) {
    if (!it->is_array()) schema_violation("relationships", "array", it->type_name());
    for (std::size_t i = 0; i < it->size(); ++i) {
      model.relationships.push_back(
          parse_relationship((*it)[i], "relationships[" + std::to_string(i) + "]"));
    }
  }

  if (auto errors = validate_model(model); !errors.empty()) {
    const StructuralError& first = errors.front();
    ErrorCode code = ErrorCode::InvalidModel;
    if (first.kind == StructuralError::Kind::UnknownEntityReference ||
        first.kind == StructuralError::Kind::UnknownParent) {
      code = ErrorCode::UnknownEntityReference;
    } else if (first.kind == StructuralError::Kind::UnknownAttributeReference) {
      code = ErrorCode::UnknownAttributeReference;
    }
    throw Error(code, first.message + " at " + first.location, first.location);
  }
  return model;
}

ordered_json model_to_json(const ERModel& m) {
  ordered_json doc;
  doc["format_version"] = std::string(kFormatVersion);
  if (m.title) doc["title"] = *m.title;
  ordered_json entities = ordered_json::array();
  for (const Entity& entity : m.entities) {
    ordered_json e;
    e["name"] = entity.name;
    ordered_json attrs = ordered_json::array();
    for (const Attribute& attr : entity.attributes) {
      ordered_json a;
      a["name"] = attr.name;
      if (!attr.declared_type.empty()) a["type"] = attr.declared_type;
      if (attr.is_primary_key) a["pk"] = true;
      if (attr.is_foreign_key) a["fk"] = true;
      if (attr.not_null) a["not_null"] = true;
      if (attr.unique) a["unique"] = true;
      attrs.push_back(std::move(a));
    }
    e["attributes"] = std::move(attrs);
    if (entity.parent) e["parent"] = *entity.parent;
    entities.push_back(std::move(e));
  }
  doc["entities"] = std::move(entities);
  ordered_json rels = ordered_json::array();
  for (const Relationship& rel : m.relationships) {
    if (rel.is_binary() && !rel.label && grammar_representable(rel)) {
      rels.push_back(serialize_relation(rel));
      continue;
    }
    ordered_json r;
    ordered_json endpoints = ordered_json::array();
    for (const Endpoint& ep : rel.endpoints) {
      ordered_json e;
      e["entity"] = ep.entity;
      if (ep.attribute) e["attribute"] = *ep.attribute;
      e["cardinality"] = std::string(1, to_char(ep.cardinality));
      endpoints.push_back(std::move(e));
    }
    r["endpoints"] = std::move(endpoints);
    if (rel.label) r["label"] = *rel.label;
    rels.push_back(std::move(r));
  }
  doc["relationships"] = std::move(rels);
  return doc;
}

std::string serialize_model(const ERModel& m) { return model_to_json(m).dump(2) + "\n"; }

PipelineResult normalize_pipeline(std::string_view raw) {
  std::string document;
  ExtractionReport report;
  try {
    std::tie(document, report) = extract_document(raw);
  } catch (Error& e) {
    throw e.with_stage("extract");
  }
  ERModel model;
  try {
    model = parse_model(document);
  } catch (Error& e) {
    throw e.with_stage("parse");
  }
  try {
    model = canonicalize(model);
  } catch (Error& e) {
    throw e.with_stage("canonicalize");
  }
  return PipelineResult{std::move(model), std::move(report)};
}

}  // namespace erkit

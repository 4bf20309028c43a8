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

#include "erkit/lint.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "erkit/errors.hpp"

namespace erkit {

std::string_view to_string(Severity s) {
  switch (s) {
    case Severity::Error: return "error";
    case Severity::Warning: return "warning";
    case Severity::Info: return "info";
  }
  return "unknown";
}

std::string_view to_string(QualityLevel level) {
  switch (level) {
    case QualityLevel::L0: return "L0";
    case QualityLevel::L1: return "L1";
    case QualityLevel::L2: return "L2";
    case QualityLevel::L3: return "L3";
    case QualityLevel::L4: return "L4";
  }
  return "L?";
}

const std::vector<std::string>& rule_catalog() {
  static const std::vector<std::string> catalog = {
      "attribute-overload",  "deep-hierarchy",       "nary-review",
      "duplicate-attribute", "isolated-entity",      "dangling-fk-endpoint",
      "key-naming-inconsistent", "duplicate-concept", "missing-constraints",
      "transitive-redundancy",
  };
  return catalog;
}

std::set<std::string> default_rule_set() {
  const auto& catalog = rule_catalog();
  return {catalog.begin(), catalog.end()};
}

namespace {

std::string entity_path(std::size_t i) { return "entities[" + std::to_string(i) + "]"; }

std::string attribute_path(std::size_t i, std::size_t j) {
  return entity_path(i) + ".attributes[" + std::to_string(j) + "]";
}

std::string relationship_path(std::size_t k) {
  return "relationships[" + std::to_string(k) + "]";
}

void sort_findings(std::vector<Finding>* findings) {
  std::sort(findings->begin(), findings->end(), [](const Finding& a, const Finding& b) {
    if (a.rule_id != b.rule_id) return a.rule_id < b.rule_id;
    if (a.location != b.location) return a.location < b.location;
    return a.message < b.message;
  });
}

void check_config(const RuleConfig& cfg) {
  if (cfg.attribute_overload_threshold < 1 || cfg.hierarchy_depth_threshold < 1) {
    throw Error(ErrorCode::ConfigError, "rule thresholds must be >= 1");
  }
  const auto& catalog = rule_catalog();
  for (const std::string& id : cfg.enabled_rules) {
    if (std::find(catalog.begin(), catalog.end(), id) == catalog.end()) {
      throw Error(ErrorCode::UnknownRule, "unknown rule id '" + id + "'", id);
    }
  }
}

void lint_attribute_overload(const ERModel& m, const RuleConfig& cfg,
                             std::vector<Finding>* out) {
  for (std::size_t i = 0; i < m.entities.size(); ++i) {
    const auto count = m.entities[i].attributes.size();
    if (count > static_cast<std::size_t>(cfg.attribute_overload_threshold)) {
      out->push_back({"attribute-overload", Severity::Warning, entity_path(i),
                      "entity '" + m.entities[i].name + "' has " + std::to_string(count) +
                          " attributes (threshold " +
                          std::to_string(cfg.attribute_overload_threshold) + ")"});
    }
  }
}

void lint_deep_hierarchy(const ERModel& m, const RuleConfig& cfg, std::vector<Finding>* out) {
  for (std::size_t i = 0; i < m.entities.size(); ++i) {
    std::size_t depth = 0;
    std::optional<std::size_t> cur = i;
    while (depth <= m.entities.size()) {
      const auto& parent = m.entities[*cur].parent;
      if (!parent) break;
      cur = resolve_entity(m, *parent);
      if (!cur) break;
      ++depth;
    }
    if (depth > static_cast<std::size_t>(cfg.hierarchy_depth_threshold)) {
      out->push_back({"deep-hierarchy", Severity::Warning, entity_path(i),
                      "entity '" + m.entities[i].name + "' sits " + std::to_string(depth) +
                          " levels deep in a generalization hierarchy (threshold " +
                          std::to_string(cfg.hierarchy_depth_threshold) + ")"});
    }
  }
}

void lint_nary_review(const ERModel& m, std::vector<Finding>* out) {
  for (std::size_t k = 0; k < m.relationships.size(); ++k) {
    if (m.relationships[k].endpoints.size() > 2) {
      out->push_back({"nary-review", Severity::Info, relationship_path(k),
                      "n-ary relationship with " +
                          std::to_string(m.relationships[k].endpoints.size()) +
                          " endpoints; check whether binary relationships suffice"});
    }
  }
}

void lint_duplicate_attribute(const ERModel& m, std::vector<Finding>* out) {
  for (std::size_t i = 0; i < m.entities.size(); ++i) {
    std::unordered_map<std::string, std::size_t> seen;
    for (std::size_t j = 0; j < m.entities[i].attributes.size(); ++j) {
      const std::string key = normalize_name(m.entities[i].attributes[j].name);
      if (auto [it, inserted] = seen.emplace(key, j); !inserted) {
        out->push_back({"duplicate-attribute", Severity::Error, attribute_path(i, j),
                        "attribute '" + m.entities[i].attributes[j].name + "' duplicates '" +
                            m.entities[i].attributes[it->second].name + "' in entity '" +
                            m.entities[i].name + "'"});
      }
    }
  }
}

void lint_isolated_entity(const ERModel& m, std::vector<Finding>* out) {
  std::vector<bool> connected(m.entities.size(), false);
  for (const Relationship& rel : m.relationships) {
    for (const Endpoint& ep : rel.endpoints) {
      if (auto idx = resolve_entity(m, ep.entity)) connected[*idx] = true;
    }
  }
  for (std::size_t i = 0; i < m.entities.size(); ++i) {
    if (m.entities[i].parent) {
      connected[i] = true;
      if (auto parent = resolve_entity(m, *m.entities[i].parent)) connected[*parent] = true;
    }
  }
  for (std::size_t i = 0; i < m.entities.size(); ++i) {
    if (!connected[i]) {
      out->push_back({"isolated-entity", Severity::Warning, entity_path(i),
                      "entity '" + m.entities[i].name +
                          "' participates in no relationship and no hierarchy"});
    }
  }
}

void lint_dangling_fk_endpoint(const ERModel& m, std::vector<Finding>* out) {
  for (std::size_t k = 0; k < m.relationships.size(); ++k) {
    const auto& endpoints = m.relationships[k].endpoints;
    for (std::size_t e = 0; e < endpoints.size(); ++e) {
      if (!endpoints[e].attribute) {
        out->push_back({"dangling-fk-endpoint", Severity::Warning,
                        relationship_path(k) + ".endpoints[" + std::to_string(e) + "]",
                        "endpoint on '" + endpoints[e].entity +
                            "' does not name the referencing attribute"});
      }
    }
  }
}

void lint_key_naming(const ERModel& m, std::vector<Finding>* out) {
  enum class Pattern { Id, EntityId, Other };
  struct Pk {
    std::size_t entity, attribute;
    Pattern pattern;
  };
  std::vector<Pk> pks;
  std::size_t id_count = 0, entity_id_count = 0;
  for (std::size_t i = 0; i < m.entities.size(); ++i) {
    for (std::size_t j = 0; j < m.entities[i].attributes.size(); ++j) {
      const Attribute& attr = m.entities[i].attributes[j];
      if (!attr.is_primary_key) continue;
      const std::string key = normalize_name(attr.name);
      Pattern p = Pattern::Other;
      if (key == "id") {
        p = Pattern::Id;
        ++id_count;
      } else if (key == normalize_name(m.entities[i].name) + "id") {
        p = Pattern::EntityId;
        ++entity_id_count;
      }
      pks.push_back({i, j, p});
    }
  }
  if (pks.empty()) return;
  if (id_count == pks.size() || entity_id_count == pks.size()) {
    return;  // one pattern covers every primary key
  }
  const Pattern dominant =
      entity_id_count > id_count ? Pattern::EntityId : Pattern::Id;
  for (const Pk& pk : pks) {
    if (pk.pattern == dominant) continue;
    const Attribute& attr = m.entities[pk.entity].attributes[pk.attribute];
    out->push_back({"key-naming-inconsistent", Severity::Warning,
                    attribute_path(pk.entity, pk.attribute),
                    "primary key '" + attr.name + "' of entity '" + m.entities[pk.entity].name +
                        "' does not follow the detected pattern (" +
                        (dominant == Pattern::Id ? "'id'" : "'<entity>_id'") + ")"});
    break;  // one finding per model
  }
}

void lint_duplicate_concept(const ERModel& m, std::vector<Finding>* out) {
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < m.entities.size(); ++i) {
    const std::string key = normalize_name(m.entities[i].name);
    if (auto [it, inserted] = seen.emplace(key, i); !inserted) {
      out->push_back({"duplicate-concept", Severity::Warning, entity_path(i),
                      "entity '" + m.entities[i].name + "' duplicates concept '" +
                          m.entities[it->second].name + "'"});
    }
  }
}

void lint_missing_constraints(const ERModel& m, std::vector<Finding>* out) {
  for (const Entity& entity : m.entities) {
    for (const Attribute& attr : entity.attributes) {
      if (attr.not_null || attr.unique) return;
    }
  }
  if (m.entities.empty()) return;  // nothing to constrain
  out->push_back({"missing-constraints", Severity::Info, "model",
                  "model declares no NOT NULL or UNIQUE constraint anywhere"});
}

}  // namespace

std::vector<Finding> run_lints(const ERModel& m, const RuleConfig& cfg) {
  check_config(cfg);
  auto enabled = [&](const char* id) { return cfg.enabled_rules.count(id) > 0; };
  std::vector<Finding> findings;
  if (enabled("attribute-overload")) lint_attribute_overload(m, cfg, &findings);
  if (enabled("deep-hierarchy")) lint_deep_hierarchy(m, cfg, &findings);
  if (enabled("nary-review")) lint_nary_review(m, &findings);
  if (enabled("duplicate-attribute")) lint_duplicate_attribute(m, &findings);
  if (enabled("isolated-entity")) lint_isolated_entity(m, &findings);
  if (enabled("dangling-fk-endpoint")) lint_dangling_fk_endpoint(m, &findings);
  if (enabled("key-naming-inconsistent")) lint_key_naming(m, &findings);
  if (enabled("duplicate-concept")) lint_duplicate_concept(m, &findings);
  if (enabled("missing-constraints")) lint_missing_constraints(m, &findings);
  sort_findings(&findings);
  return findings;
}

std::vector<Finding> detect_transitive_redundancy(const ERModel& m) {
  // Index binary relationships by (one-end entity, many-end entity).
  struct Edge {
    std::size_t parent, child, rel_index;
  };
  std::vector<Edge> edges;
  for (std::size_t k = 0; k < m.relationships.size(); ++k) {
    const Relationship& rel = m.relationships[k];
    if (!rel.is_binary()) continue;
    auto a = resolve_entity(m, rel.endpoints[0].entity);
    auto b = resolve_entity(m, rel.endpoints[1].entity);
    if (!a || !b) continue;
    auto is_many = [](Cardinality c) {
      return c == Cardinality::ZeroOrMore || c == Cardinality::OneOrMore;
    };
    Cardinality ca = rel.endpoints[0].cardinality;
    Cardinality cb = rel.endpoints[1].cardinality;
    if (ca == Cardinality::ExactlyOne && is_many(cb)) edges.push_back({*a, *b, k});
    if (cb == Cardinality::ExactlyOne && is_many(ca)) edges.push_back({*b, *a, k});
  }
  std::unordered_set<std::uint64_t> pair_index;
  auto pair_key = [&](std::size_t p, std::size_t c) {
    return (static_cast<std::uint64_t>(p) << 32) | static_cast<std::uint64_t>(c);
  };
  for (const Edge& e : edges) pair_index.insert(pair_key(e.parent, e.child));

  std::vector<Finding> findings;
  for (const Edge& direct : edges) {
    if (direct.parent == direct.child) continue;
    for (std::size_t mid = 0; mid < m.entities.size(); ++mid) {
      if (mid == direct.parent || mid == direct.child) continue;
      if (pair_index.count(pair_key(direct.parent, mid)) &&
          pair_index.count(pair_key(mid, direct.child))) {
        findings.push_back(
            {"transitive-redundancy", Severity::Warning, relationship_path(direct.rel_index),
             "direct relationship '" + m.entities[direct.parent].name + "' -> '" +
                 m.entities[direct.child].name + "' is derivable through '" +
                 m.entities[mid].name + "'"});
      }
    }
  }
  sort_findings(&findings);
  return findings;
}

std::vector<Finding> merge_findings(std::vector<Finding> a, std::vector<Finding> b) {
  a.insert(a.end(), std::make_move_iterator(b.begin()), std::make_move_iterator(b.end()));
  sort_findings(&a);
  return a;
}

QualityLevel classify_level(const ERModel& m, const std::vector<Finding>& findings) {
  auto has_rule = [&](std::string_view id) {
    return std::any_of(findings.begin(), findings.end(),
                       [&](const Finding& f) { return f.rule_id == id; });
  };
  const bool any_error = std::any_of(findings.begin(), findings.end(), [](const Finding& f) {
    return f.severity == Severity::Error;
  });
  const bool every_entity_has_attribute =
      std::all_of(m.entities.begin(), m.entities.end(),
                  [](const Entity& e) { return !e.attributes.empty(); });

  const bool l1 = !any_error && !m.entities.empty() && every_entity_has_attribute &&
                  !has_rule("isolated-entity");
  if (!l1) return QualityLevel::L0;
  const bool l2 = !has_rule("duplicate-concept") && !has_rule("key-naming-inconsistent");
  if (!l2) return QualityLevel::L1;
  const bool l3 = !has_rule("dangling-fk-endpoint") && !has_rule("missing-constraints") &&
                  !has_rule("transitive-redundancy");
  if (!l3) return QualityLevel::L2;
  return QualityLevel::L3;  // L4 needs manual review, never automatic
}

std::string format_findings(const std::vector<Finding>& findings) {
  std::string out;
  for (const Finding& f : findings) {
    out += std::string(to_string(f.severity)) + " " + f.rule_id + " " + f.location + ": " +
           f.message + "\n";
  }
  return out;
}

nlohmann::ordered_json findings_to_json(const std::vector<Finding>& findings,
                                        QualityLevel level) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json items = nlohmann::ordered_json::array();
  for (const Finding& f : findings) {
    items.push_back({{"rule_id", f.rule_id},
                     {"severity", std::string(to_string(f.severity))},
                     {"location", f.location},
                     {"message", f.message}});
  }
  doc["findings"] = std::move(items);
  doc["level"] = std::string(to_string(level));
  return doc;
}

RuleConfig load_rule_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read rule config '" + path + "'");
  nlohmann::json doc = nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorCode::ConfigError, "rule config '" + path + "' is not a JSON object");
  }
  RuleConfig cfg;
  if (auto it = doc.find("attribute_overload_threshold"); it != doc.end()) {
    if (!it->is_number_integer()) {
      throw Error(ErrorCode::ConfigError, "attribute_overload_threshold must be an integer");
    }
    cfg.attribute_overload_threshold = it->get<int>();
  }
  if (auto it = doc.find("hierarchy_depth_threshold"); it != doc.end()) {
    if (!it->is_number_integer()) {
      throw Error(ErrorCode::ConfigError, "hierarchy_depth_threshold must be an integer");
    }
    cfg.hierarchy_depth_threshold = it->get<int>();
  }
  if (auto it = doc.find("enabled_rules"); it != doc.end()) {
    if (!it->is_array()) throw Error(ErrorCode::ConfigError, "enabled_rules must be an array");
    cfg.enabled_rules.clear();
    for (const auto& id : *it) {
      if (!id.is_string()) throw Error(ErrorCode::ConfigError, "enabled_rules entries must be strings");
      cfg.enabled_rules.insert(id.get<std::string>());
    }
  }
  if (cfg.attribute_overload_threshold < 1 || cfg.hierarchy_depth_threshold < 1) {
    throw Error(ErrorCode::ConfigError, "rule thresholds must be >= 1");
  }
  return cfg;
}

}  // namespace erkit

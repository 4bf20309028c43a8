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

#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "erkit/model.hpp"

namespace erkit {

enum class Severity { Error, Warning, Info };

std::string_view to_string(Severity s);

struct Finding {
  std::string rule_id;
  Severity severity = Severity::Warning;
  std::string location;  // model path; "model" for model-level findings
  std::string message;

  bool operator==(const Finding&) const = default;
};

// Rule catalog:
//   attribute-overload       W  entity has more attributes than the threshold
//   deep-hierarchy           W  parent chain deeper than the threshold
//   nary-review              I  relationship with more than 2 endpoints
//   duplicate-attribute      E  two attributes of one entity collide under
//                               name normalization
//   isolated-entity          W  entity in no relationship and no hierarchy
//   dangling-fk-endpoint     W  endpoint without an attribute
//   key-naming-inconsistent  W  primary keys do not all follow one detected
//                               pattern among {id, <entity>_id}
//   duplicate-concept        W  two entities collide under name normalization
//   missing-constraints      I  no not_null/unique flag anywhere in the model
//   transitive-redundancy    W  direct relationship derivable through an
//                               intermediate entity (own operation below)
const std::vector<std::string>& rule_catalog();

std::set<std::string> default_rule_set();

struct RuleConfig {
  int attribute_overload_threshold = 12;
  int hierarchy_depth_threshold = 3;
  std::set<std::string> enabled_rules = default_rule_set();
};

/// Load RuleConfig from a JSON file: {"attribute_overload_threshold": 12,
/// "hierarchy_depth_threshold": 3, "enabled_rules": [...]}; all keys optional.
/// Throws Error(ConfigError) on unreadable files or thresholds < 1.
RuleConfig load_rule_config(const std::string& path);

/// Run the structural rules (everything in the catalog except
/// transitive-redundancy). Deterministic; findings sorted by
/// (rule_id, location, message). Throws Error(UnknownRule) when the config
/// enables an unregistered rule id and Error(ConfigError) on bad thresholds.
std::vector<Finding> run_lints(const ERModel& m, const RuleConfig& cfg = {});

/// Emit one `transitive-redundancy` finding per (direct P-C relationship,
/// intermediate M): binary relationships P(1)--(*|+)M, M(1)--(*|+)C and
/// P(1)--(*|+)C exist; the finding points at the P-C relationship.
std::vector<Finding> detect_transitive_redundancy(const ERModel& m);

/// Merge + sort findings from several rule passes into the fixed
/// (rule_id, location, message) report order.
std::vector<Finding> merge_findings(std::vector<Finding> a, std::vector<Finding> b);

enum class QualityLevel { L0, L1, L2, L3, L4 };

std::string_view to_string(QualityLevel level);

/// Ordinal quality classification. Returns the highest level k such that the
/// automated gates for levels 1..k all pass:
///   L1: no Error findings, at least one entity, every entity has >= 1
///       attribute, no isolated-entity findings;
///   L2: no duplicate-concept and no key-naming-inconsistent findings;
///   L3: no dangling-fk-endpoint, no missing-constraints and no
///       transitive-redundancy findings.
/// L4 is never awarded automatically (manual review); the result caps at L3.
/// `findings` should be merge_findings(run_lints(m), detect_transitive_redundancy(m)).
QualityLevel classify_level(const ERModel& m, const std::vector<Finding>& findings);

/// Line-oriented report: "<severity> <rule_id> <location>: <message>".
std::string format_findings(const std::vector<Finding>& findings);

nlohmann::ordered_json findings_to_json(const std::vector<Finding>& findings,
                                        QualityLevel level);

}  // namespace erkit

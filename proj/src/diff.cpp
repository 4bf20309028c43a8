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

#include "erkit/diff.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <unordered_set>

#include "erkit/relation.hpp"

namespace erkit {

namespace {

std::set<std::string> normalized_attribute_names(const Entity& e) {
  std::set<std::string> names;
  for (const Attribute& attr : e.attributes) names.insert(normalize_name(attr.name));
  return names;
}

std::string display_relationship(const Relationship& rel) {
  if (grammar_representable(rel) && !rel.label) return serialize_relation(rel);
  std::string out;
  for (const Endpoint& ep : rel.endpoints) {
    if (!out.empty()) out += " -- ";
    out += ep.entity;
    if (ep.attribute) out += ":" + *ep.attribute;
    out += "[";
    out += to_char(ep.cardinality);
    out += "]";
  }
  if (rel.label) out += " (" + *rel.label + ")";
  return out;
}

}  // namespace

double attribute_overlap(const Entity& a, const Entity& b) {
  const auto names_a = normalized_attribute_names(a);
  const auto names_b = normalized_attribute_names(b);
  if (names_a.empty() && names_b.empty()) return 0.0;
  std::size_t shared = 0;
  for (const std::string& name : names_a) shared += names_b.count(name);
  const std::size_t unioned = names_a.size() + names_b.size() - shared;
  return unioned == 0 ? 0.0 : static_cast<double>(shared) / static_cast<double>(unioned);
}

MatchMapping match_entities(const ERModel& gen, const ERModel& gold, double overlap_threshold) {
  MatchMapping mapping;
  std::vector<bool> gen_used(gen.entities.size(), false);
  std::vector<bool> gold_used(gold.entities.size(), false);

  // Phase 1: normalization-equal names. Gold entities in lexicographic order
  // each take the lexicographically least unpaired generated entity.
  std::vector<std::size_t> gold_order(gold.entities.size());
  for (std::size_t i = 0; i < gold_order.size(); ++i) gold_order[i] = i;
  std::sort(gold_order.begin(), gold_order.end(), [&](std::size_t a, std::size_t b) {
    return gold.entities[a].name < gold.entities[b].name;
  });
  for (std::size_t gold_idx : gold_order) {
    const std::string key = normalize_name(gold.entities[gold_idx].name);
    std::optional<std::size_t> best;
    for (std::size_t gen_idx = 0; gen_idx < gen.entities.size(); ++gen_idx) {
      if (gen_used[gen_idx] || normalize_name(gen.entities[gen_idx].name) != key) continue;
      if (!best || gen.entities[gen_idx].name < gen.entities[*best].name) best = gen_idx;
    }
    if (best) {
      gen_used[*best] = true;
      gold_used[gold_idx] = true;
      mapping.entity_pairs.emplace_back(*best, gold_idx);
    }
  }

  // Phase 2: greedy attribute-overlap pairing over the remainder.
  struct Candidate {
    double score;
    std::size_t gen_idx, gold_idx;
  };
  std::vector<Candidate> candidates;
  for (std::size_t g = 0; g < gen.entities.size(); ++g) {
    if (gen_used[g]) continue;
    for (std::size_t h = 0; h < gold.entities.size(); ++h) {
      if (gold_used[h]) continue;
      double score = attribute_overlap(gen.entities[g], gold.entities[h]);
      if (score >= overlap_threshold) candidates.push_back({score, g, h});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [&](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    const std::string& an = gen.entities[a.gen_idx].name;
    const std::string& bn = gen.entities[b.gen_idx].name;
    if (an != bn) return an < bn;
    return gold.entities[a.gold_idx].name < gold.entities[b.gold_idx].name;
  });
  for (const Candidate& c : candidates) {
    if (gen_used[c.gen_idx] || gold_used[c.gold_idx]) continue;
    gen_used[c.gen_idx] = true;
    gold_used[c.gold_idx] = true;
    mapping.entity_pairs.emplace_back(c.gen_idx, c.gold_idx);
  }

  std::sort(mapping.entity_pairs.begin(), mapping.entity_pairs.end());
  for (std::size_t g = 0; g < gen.entities.size(); ++g) {
    if (!gen_used[g]) mapping.unmatched_generated.push_back(g);
  }
  for (std::size_t h = 0; h < gold.entities.size(); ++h) {
    if (!gold_used[h]) mapping.unmatched_gold.push_back(h);
  }
  return mapping;
}

double ClassCounts::precision() const {
  const std::size_t denom = matched + surplus;
  return denom == 0 ? 1.0 : static_cast<double>(matched) / static_cast<double>(denom);
}

double ClassCounts::recall() const {
  const std::size_t denom = matched + missing;
  return denom == 0 ? 1.0 : static_cast<double>(matched) / static_cast<double>(denom);
}

double ClassCounts::f1() const {
  const double p = precision();
  const double r = recall();
  return (p + r) == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

const ClassCounts& DiffReport::by_class(std::size_t i) const {
  switch (i) {
    case 0: return entities;
    case 1: return attributes;
    case 2: return relationships;
    case 3: return cardinalities;
    default: return constraints;
  }
}

DiffReport diff_models(const ERModel& gen, const ERModel& gold, double overlap_threshold) {
  DiffReport report;
  const MatchMapping mapping = match_entities(gen, gold, overlap_threshold);

  // Entities.
  report.entities.matched = mapping.entity_pairs.size();
  report.entities.missing = mapping.unmatched_gold.size();
  report.entities.surplus = mapping.unmatched_generated.size();
  for (std::size_t h : mapping.unmatched_gold) {
    report.entities.missing_items.push_back(gold.entities[h].name);
  }
  for (std::size_t g : mapping.unmatched_generated) {
    report.entities.surplus_items.push_back(gen.entities[g].name);
  }

  // Attributes and constraints, within paired entities by normalized name.
  for (auto [gen_idx, gold_idx] : mapping.entity_pairs) {
    const Entity& ge = gen.entities[gen_idx];
    const Entity& he = gold.entities[gold_idx];
    std::map<std::string, std::vector<std::size_t>> gen_attrs, gold_attrs;
    for (std::size_t j = 0; j < ge.attributes.size(); ++j) {
      gen_attrs[normalize_name(ge.attributes[j].name)].push_back(j);
    }
    for (std::size_t j = 0; j < he.attributes.size(); ++j) {
      gold_attrs[normalize_name(he.attributes[j].name)].push_back(j);
    }
    for (const auto& [key, gold_occ] : gold_attrs) {
      auto it = gen_attrs.find(key);
      const std::size_t gen_count = it == gen_attrs.end() ? 0 : it->second.size();
      const std::size_t paired = std::min(gen_count, gold_occ.size());
      report.attributes.matched += paired;
      report.attributes.missing += gold_occ.size() - paired;
      for (std::size_t k = paired; k < gold_occ.size(); ++k) {
        report.attributes.missing_items.push_back(he.name + "." +
                                                  he.attributes[gold_occ[k]].name);
      }
      // Constraint flags on the paired occurrences.
      for (std::size_t k = 0; k < paired; ++k) {
        const Attribute& ga = ge.attributes[it->second[k]];
        const Attribute& ha = he.attributes[gold_occ[k]];
        struct FlagView {
          bool Attribute::*field;
          const char* name;
        };
        static constexpr FlagView kFlags[] = {{&Attribute::is_primary_key, "pk"},
                                              {&Attribute::is_foreign_key, "fk"},
                                              {&Attribute::not_null, "not_null"},
                                              {&Attribute::unique, "unique"}};
        for (const FlagView& flag : kFlags) {
          const bool in_gen = ga.*(flag.field);
          const bool in_gold = ha.*(flag.field);
          if (in_gen && in_gold) {
            ++report.constraints.matched;
          } else if (in_gold) {
            ++report.constraints.missing;
            report.constraints.missing_items.push_back(he.name + "." + ha.name + " " +
                                                       flag.name);
          } else if (in_gen) {
            ++report.constraints.surplus;
            report.constraints.surplus_items.push_back(ge.name + "." + ga.name + " " +
                                                       flag.name);
          }
        }
      }
    }
    for (const auto& [key, gen_occ] : gen_attrs) {
      auto it = gold_attrs.find(key);
      const std::size_t gold_count = it == gold_attrs.end() ? 0 : it->second.size();
      for (std::size_t k = gold_count; k < gen_occ.size(); ++k) {
        ++report.attributes.surplus;
        report.attributes.surplus_items.push_back(ge.name + "." +
                                                  ge.attributes[gen_occ[k]].name);
      }
    }
  }

  // Relationships and cardinalities. Group by (arity, mapped entity multiset)
  // expressed in gold entity indices; unmappable generated relationships are
  // surplus outright.
  std::vector<std::optional<std::size_t>> gen_to_gold(gen.entities.size());
  for (auto [g, h] : mapping.entity_pairs) gen_to_gold[g] = h;

  auto signature = [](const Relationship& rel,
                      const std::vector<std::size_t>& entity_ids) {
    // Multiset of (entity id, mark), canonically sorted.
    std::vector<std::pair<std::size_t, char>> sig;
    for (std::size_t e = 0; e < rel.endpoints.size(); ++e) {
      sig.emplace_back(entity_ids[e], to_char(rel.endpoints[e].cardinality));
    }
    std::sort(sig.begin(), sig.end());
    return sig;
  };

  struct RelEntry {
    std::size_t index;
    std::vector<std::pair<std::size_t, char>> sig;
  };
  std::map<std::vector<std::size_t>, std::pair<std::vector<RelEntry>, std::vector<RelEntry>>>
      groups;  // key: sorted gold entity ids prefixed by arity

  auto group_key = [](const std::vector<std::size_t>& ids) {
    std::vector<std::size_t> key = ids;
    std::sort(key.begin(), key.end());
    key.insert(key.begin(), ids.size());
    return key;
  };

  for (std::size_t k = 0; k < gen.relationships.size(); ++k) {
    const Relationship& rel = gen.relationships[k];
    std::vector<std::size_t> ids;
    bool mappable = true;
    for (const Endpoint& ep : rel.endpoints) {
      auto idx = resolve_entity(gen, ep.entity);
      if (!idx || !gen_to_gold[*idx]) {
        mappable = false;
        break;
      }
      ids.push_back(*gen_to_gold[*idx]);
    }
    if (!mappable) {
      ++report.relationships.surplus;
      report.relationships.surplus_items.push_back(display_relationship(rel));
      continue;
    }
    groups[group_key(ids)].first.push_back({k, signature(rel, ids)});
  }
  for (std::size_t k = 0; k < gold.relationships.size(); ++k) {
    const Relationship& rel = gold.relationships[k];
    std::vector<std::size_t> ids;
    bool resolvable = true;
    for (const Endpoint& ep : rel.endpoints) {
      auto idx = resolve_entity(gold, ep.entity);
      if (!idx) {
        resolvable = false;
        break;
      }
      ids.push_back(*idx);
    }
    if (!resolvable) {
      ++report.relationships.missing;
      report.relationships.missing_items.push_back(display_relationship(rel));
      continue;
    }
    groups[group_key(ids)].second.push_back({k, signature(rel, ids)});
  }

  for (auto& [key, group] : groups) {
    auto& gen_rels = group.first;
    auto& gold_rels = group.second;
    const std::size_t paired = std::min(gen_rels.size(), gold_rels.size());
    report.relationships.matched += paired;
    for (std::size_t k = paired; k < gen_rels.size(); ++k) {
      ++report.relationships.surplus;
      report.relationships.surplus_items.push_back(
          display_relationship(gen.relationships[gen_rels[k].index]));
    }
    for (std::size_t k = paired; k < gold_rels.size(); ++k) {
      ++report.relationships.missing;
      report.relationships.missing_items.push_back(
          display_relationship(gold.relationships[gold_rels[k].index]));
    }
    // Cardinality agreement over the paired relationships: consume
    // signature-equal pairs, the remainder up to `paired` disagrees.
    std::vector<bool> gen_taken(gen_rels.size(), false);
    std::vector<bool> gold_agreed(gold_rels.size(), false);
    std::size_t agreed = 0;
    for (std::size_t h = 0; h < gold_rels.size(); ++h) {
      for (std::size_t g = 0; g < gen_rels.size(); ++g) {
        if (gen_taken[g] || gen_rels[g].sig != gold_rels[h].sig) continue;
        gen_taken[g] = true;
        gold_agreed[h] = true;
        ++agreed;
        break;
      }
    }
    report.cardinalities.matched += agreed;
    const std::size_t disagreed = paired - agreed;
    report.cardinalities.missing += disagreed;
    report.cardinalities.surplus += disagreed;
    std::size_t noted = 0;
    for (std::size_t h = 0; h < gold_rels.size() && noted < disagreed; ++h) {
      if (gold_agreed[h]) continue;
      report.cardinalities.missing_items.push_back(
          display_relationship(gold.relationships[gold_rels[h].index]) + " (marks differ)");
      ++noted;
    }
  }

  // Micro-averaged overall F1.
  std::size_t matched = 0, missing = 0, surplus = 0;
  for (std::size_t i = 0; i < DiffReport::kClassNames.size(); ++i) {
    matched += report.by_class(i).matched;
    missing += report.by_class(i).missing;
    surplus += report.by_class(i).surplus;
  }
  ClassCounts overall;
  overall.matched = matched;
  overall.missing = missing;
  overall.surplus = surplus;
  report.overall_f1 = overall.f1();
  return report;
}

std::string format_diff_table(const DiffReport& report) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-15s %8s %8s %8s %10s %8s %8s\n", "class", "matched",
                "missing", "surplus", "precision", "recall", "f1");
  out += line;
  for (std::size_t i = 0; i < DiffReport::kClassNames.size(); ++i) {
    const ClassCounts& c = report.by_class(i);
    std::snprintf(line, sizeof(line), "%-15s %8zu %8zu %8zu %10.3f %8.3f %8.3f\n",
                  DiffReport::kClassNames[i], c.matched, c.missing, c.surplus, c.precision(),
                  c.recall(), c.f1());
    out += line;
  }
  std::snprintf(line, sizeof(line), "%-15s %55.3f\n", "overall_f1", report.overall_f1);
  out += line;
  for (std::size_t i = 0; i < DiffReport::kClassNames.size(); ++i) {
    const ClassCounts& c = report.by_class(i);
    for (const std::string& item : c.missing_items) {
      out += std::string("  missing ") + DiffReport::kClassNames[i] + ": " + item + "\n";
    }
    for (const std::string& item : c.surplus_items) {
      out += std::string("  surplus ") + DiffReport::kClassNames[i] + ": " + item + "\n";
    }
  }
  return out;
}

nlohmann::ordered_json diff_to_json(const DiffReport& report) {
  nlohmann::ordered_json doc;
  for (std::size_t i = 0; i < DiffReport::kClassNames.size(); ++i) {
    const ClassCounts& c = report.by_class(i);
    nlohmann::ordered_json entry;
    entry["matched"] = c.matched;
    entry["missing"] = c.missing;
    entry["surplus"] = c.surplus;
    entry["precision"] = c.precision();
    entry["recall"] = c.recall();
    entry["f1"] = c.f1();
    if (!c.missing_items.empty()) entry["missing_items"] = c.missing_items;
    if (!c.surplus_items.empty()) entry["surplus_items"] = c.surplus_items;
    doc[DiffReport::kClassNames[i]] = std::move(entry);
  }
  doc["overall_f1"] = report.overall_f1;
  return doc;
}

}  // namespace erkit

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

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "erkit/model.hpp"

namespace erkit {

/// Entity pairing between a generated and a gold model (partial injection).
struct MatchMapping {
  std::vector<std::pair<std::size_t, std::size_t>> entity_pairs;  // (gen, gold) indices
  std::vector<std::size_t> unmatched_generated;
  std::vector<std::size_t> unmatched_gold;
};

/// Jaccard overlap of normalized attribute-name sets; 0 when the union is
/// empty (two attribute-less entities carry no pairing evidence).
double attribute_overlap(const Entity& a, const Entity& b);

inline constexpr double kDefaultOverlapThreshold = 0.5;

/// Deterministic two-phase pairing. Phase 1 pairs entities equal under name
/// normalization. Phase 2 greedily pairs the remainder by attribute overlap
/// >= threshold, highest score first, ties broken by lexicographic
/// (generated name, gold name).
MatchMapping match_entities(const ERModel& gen, const ERModel& gold,
                            double overlap_threshold = kDefaultOverlapThreshold);

struct ClassCounts {
  std::size_t matched = 0;
  std::size_t missing = 0;  // in gold, absent from generated
  std::size_t surplus = 0;  // in generated, absent from gold
  std::vector<std::string> missing_items;
  std::vector<std::string> surplus_items;

  double precision() const;  // matched/(matched+surplus), 1.0 on empty denom
  double recall() const;     // matched/(matched+missing), 1.0 on empty denom
  double f1() const;         // harmonic mean, 0 when both are 0
};

struct DiffReport {
  ClassCounts entities;
  ClassCounts attributes;
  ClassCounts relationships;
  ClassCounts cardinalities;
  ClassCounts constraints;
  double overall_f1 = 0.0;  // micro-average over all five classes

  static constexpr std::array<const char*, 5> kClassNames = {
      "entities", "attributes", "relationships", "cardinalities", "constraints"};
  const ClassCounts& by_class(std::size_t i) const;
};

/// Quantify divergence of `gen` from the gold standard. Attributes are
/// compared within paired entities by normalized name; relationships match
/// when their endpoint entities map to each other (direction-insensitive for
/// binary, arity + entity multiset for n-ary); cardinalities are counted on
/// matched relationships only; constraints per flag on matched attributes.
DiffReport diff_models(const ERModel& gen, const ERModel& gold,
                       double overlap_threshold = kDefaultOverlapThreshold);

/// Human table, one row per class plus the overall line; named missing and
/// surplus elements follow.
std::string format_diff_table(const DiffReport& report);

nlohmann::ordered_json diff_to_json(const DiffReport& report);

}  // namespace erkit

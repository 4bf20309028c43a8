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

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "erkit/diff.hpp"
#include "erkit/lint.hpp"
#include "erkit/model.hpp"
#include "erkit/relation.hpp"

namespace testutil {

using Rng = std::mt19937;

inline std::string fixture_path(const std::string& name) {
#ifdef ERKIT_FIXTURE_DIR
  return std::string(ERKIT_FIXTURE_DIR) + "/" + name;
#else
  return "tests/fixtures/" + name;
#endif
}

/// Unique scratch directory under the system temp dir, removed on destruction.
struct TempDir {
  std::filesystem::path path;

  TempDir() {
    static std::atomic<unsigned> counter{0};
    auto base = std::filesystem::temp_directory_path();
    path = base / ("erkit_test_" + std::to_string(::getpid()) + "_" +
                   std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string str() const { return path.string(); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

// ---------------- builders ----------------

inline erkit::Attribute attr(std::string name, bool pk = false, bool fk = false,
                             bool not_null = false, bool unique = false) {
  erkit::Attribute a;
  a.name = std::move(name);
  a.is_primary_key = pk;
  a.is_foreign_key = fk;
  a.not_null = not_null;
  a.unique = unique;
  return a;
}

inline erkit::Entity entity(std::string name, std::vector<erkit::Attribute> attrs = {},
                            std::optional<std::string> parent = std::nullopt) {
  erkit::Entity e;
  e.name = std::move(name);
  e.attributes = std::move(attrs);
  e.parent = std::move(parent);
  return e;
}

// ---------------- random generators ----------------

inline int rand_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline bool chance(Rng& rng, double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

inline std::string random_identifier(Rng& rng, int min_len = 1, int max_len = 10) {
  static const char* first = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_";
  static const char* rest = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_";
  const int len = rand_int(rng, min_len, max_len);
  std::string out;
  out.push_back(first[rand_int(rng, 0, 52)]);
  for (int i = 1; i < len; ++i) out.push_back(rest[rand_int(rng, 0, 62)]);
  return out;
}

inline char random_mark(Rng& rng) {
  const int roll = rand_int(rng, 0, 9);
  if (roll < 4) return '1';
  if (roll < 8) return '*';
  return roll == 8 ? '?' : '+';
}

/// Relation string in single-space canonical form.
inline std::string random_relation_string(Rng& rng) {
  auto endpoint = [&] {
    std::string out = random_identifier(rng);
    if (chance(rng, 0.6)) out += ":" + random_identifier(rng);
    return out;
  };
  std::string out = endpoint();
  out += ' ';
  out += random_mark(rng);
  out += "--";
  out += random_mark(rng);
  out += ' ';
  out += endpoint();
  return out;
}

/// Valid-by-construction model: distinct entity names, per-entity distinct
/// attribute names, acyclic parents, resolvable endpoints.
inline erkit::ERModel random_model(Rng& rng, int max_entities = 8,
                                   bool with_relationships = true) {
  erkit::ERModel model;
  const int entity_count = rand_int(rng, 1, max_entities);
  for (int i = 0; i < entity_count; ++i) {
    erkit::Entity e;
    e.name = "Ent" + std::to_string(i) + "_" + random_identifier(rng, 1, 4);
    const int attr_count = rand_int(rng, 1, 6);
    for (int j = 0; j < attr_count; ++j) {
      erkit::Attribute a;
      a.name = "a" + std::to_string(j) + "_" + random_identifier(rng, 1, 4);
      a.is_primary_key = j == 0 && chance(rng, 0.7);
      a.is_foreign_key = chance(rng, 0.2);
      a.not_null = chance(rng, 0.3);
      a.unique = chance(rng, 0.15);
      static const char* types[] = {"", "int", "text", "date"};
      a.declared_type = types[rand_int(rng, 0, 3)];
      e.attributes.push_back(std::move(a));
    }
    if (i > 0 && chance(rng, 0.2)) e.parent = model.entities[rand_int(rng, 0, i - 1)].name;
    model.entities.push_back(std::move(e));
  }
  if (with_relationships) {
    const int rel_count = rand_int(rng, 0, 2 * entity_count);
    for (int k = 0; k < rel_count; ++k) {
      erkit::Relationship rel;
      const int arity = chance(rng, 0.12) ? 3 : 2;
      for (int e = 0; e < arity; ++e) {
        const erkit::Entity& target = model.entities[static_cast<std::size_t>(
            rand_int(rng, 0, entity_count - 1))];
        erkit::Endpoint ep;
        ep.entity = target.name;
        if (chance(rng, 0.7)) {
          ep.attribute =
              target.attributes[static_cast<std::size_t>(
                                    rand_int(rng, 0, static_cast<int>(target.attributes.size()) - 1))]
                  .name;
        }
        ep.cardinality = *erkit::cardinality_from_char(random_mark(rng));
        rel.endpoints.push_back(std::move(ep));
      }
      if (chance(rng, 0.2)) rel.label = random_identifier(rng, 3, 8);
      model.relationships.push_back(std::move(rel));
    }
  }
  if (chance(rng, 0.3)) model.title = "title " + random_identifier(rng, 2, 6);
  return model;
}

/// Append one-to-many chains (and sometimes the closing direct edge) so that
/// transitive triangles occur with useful frequency in random corpora.
inline void add_random_chains(Rng& rng, erkit::ERModel& model, int chains) {
  const int n = static_cast<int>(model.entities.size());
  if (n < 3) return;
  for (int k = 0; k < chains; ++k) {
    const std::size_t p = static_cast<std::size_t>(rand_int(rng, 0, n - 1));
    const std::size_t m = static_cast<std::size_t>(rand_int(rng, 0, n - 1));
    const std::size_t c = static_cast<std::size_t>(rand_int(rng, 0, n - 1));
    if (p == m || m == c || p == c) continue;
    auto edge = [&](std::size_t from, std::size_t to) {
      erkit::Relationship rel;
      rel.endpoints.push_back(
          {model.entities[from].name, std::nullopt, erkit::Cardinality::ExactlyOne});
      rel.endpoints.push_back(
          {model.entities[to].name, std::nullopt, erkit::Cardinality::ZeroOrMore});
      model.relationships.push_back(std::move(rel));
    };
    edge(p, m);
    edge(m, c);
    if (chance(rng, 0.5)) edge(p, c);
  }
}

/// Derived variant of `gold` with realistic divergence: renamed, dropped and
/// added entities/attributes/relationships and flipped marks/flags.
inline erkit::ERModel mutate_model(Rng& rng, const erkit::ERModel& gold) {
  erkit::ERModel out = gold;
  // Rename: case/underscore tweaks keep normalization equality.
  for (erkit::Entity& e : out.entities) {
    if (chance(rng, 0.3)) {
      std::string renamed;
      for (char c : e.name) {
        if (c == '_') continue;
        renamed.push_back(chance(rng, 0.5) ? static_cast<char>(std::toupper(
                                                 static_cast<unsigned char>(c)))
                                           : c);
      }
      // Entity references in relationships resolve via normalization.
      e.name = renamed;
    }
  }
  if (!out.entities.empty() && chance(rng, 0.5)) {
    // Drop one entity and everything referencing it.
    const std::size_t victim = static_cast<std::size_t>(
        rand_int(rng, 0, static_cast<int>(out.entities.size()) - 1));
    const std::string victim_name = out.entities[victim].name;
    const std::string victim_key = erkit::normalize_name(victim_name);
    out.entities.erase(out.entities.begin() + static_cast<std::ptrdiff_t>(victim));
    for (erkit::Entity& e : out.entities) {
      if (e.parent && erkit::normalize_name(*e.parent) == victim_key) e.parent.reset();
    }
    std::erase_if(out.relationships, [&](const erkit::Relationship& rel) {
      return std::any_of(rel.endpoints.begin(), rel.endpoints.end(), [&](const auto& ep) {
        return erkit::normalize_name(ep.entity) == victim_key;
      });
    });
  }
  if (chance(rng, 0.5)) {
    erkit::Entity extra;
    extra.name = "Extra_" + random_identifier(rng, 2, 5);
    extra.attributes.push_back(attr("x_" + random_identifier(rng, 1, 4)));
    out.entities.push_back(std::move(extra));
  }
  for (erkit::Entity& e : out.entities) {
    if (!e.attributes.empty() && chance(rng, 0.3)) {
      e.attributes.pop_back();
    }
    if (chance(rng, 0.3)) {
      e.attributes.push_back(attr("n_" + random_identifier(rng, 1, 4), false, false,
                                  chance(rng, 0.3), chance(rng, 0.2)));
    }
    for (erkit::Attribute& a : e.attributes) {
      if (chance(rng, 0.1)) a.not_null = !a.not_null;
    }
  }
  if (!out.relationships.empty() && chance(rng, 0.5)) {
    out.relationships.pop_back();
  }
  for (erkit::Relationship& rel : out.relationships) {
    for (erkit::Endpoint& ep : rel.endpoints) {
      if (chance(rng, 0.15)) ep.cardinality = *erkit::cardinality_from_char(random_mark(rng));
      // Attribute references may dangle after attribute drops; clear them.
      ep.attribute.reset();
    }
  }
  return out;
}

/// Matching-stress instance: gold entities draw attributes from one small
/// shared pool (so attribute sets overlap across entities), and the generated
/// side renames every entity out of normalization reach. Phase 1 finds
/// nothing; phase 2 has to do all the work against competing scores.
inline std::pair<erkit::ERModel, erkit::ERModel> random_matching_pair(Rng& rng) {
  static const char* kPool[] = {"id",    "name",  "date",  "code",  "status",
                                "type",  "owner", "value", "note",  "ref",
                                "stamp", "group"};
  constexpr int kPoolSize = 12;
  auto draw_attrs = [&](int count) {
    std::vector<int> indices(kPoolSize);
    for (int i = 0; i < kPoolSize; ++i) indices[static_cast<std::size_t>(i)] = i;
    std::shuffle(indices.begin(), indices.end(), rng);
    std::vector<erkit::Attribute> attrs;
    for (int i = 0; i < count; ++i) {
      attrs.push_back(attr(kPool[indices[static_cast<std::size_t>(i)]]));
    }
    return attrs;
  };

  erkit::ERModel gold;
  const int n = rand_int(rng, 2, 6);
  for (int i = 0; i < n; ++i) {
    gold.entities.push_back(
        entity("Gold" + std::to_string(i), draw_attrs(rand_int(rng, 2, 5))));
  }

  erkit::ERModel gen;
  std::vector<std::size_t> order(gold.entities.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t i : order) {
    if (chance(rng, 0.2)) continue;  // drop some entities entirely
    erkit::Entity e = gold.entities[i];
    e.name = "Made" + std::to_string(i) + "_" + random_identifier(rng, 1, 3);
    // Perturb the attribute set within the pool.
    if (!e.attributes.empty() && chance(rng, 0.5)) e.attributes.pop_back();
    if (chance(rng, 0.5)) {
      const char* extra = kPool[rand_int(rng, 0, kPoolSize - 1)];
      if (std::none_of(e.attributes.begin(), e.attributes.end(),
                       [&](const erkit::Attribute& a) { return a.name == extra; })) {
        e.attributes.push_back(attr(extra));
      }
    }
    if (e.attributes.empty()) e.attributes.push_back(attr("id"));
    gen.entities.push_back(std::move(e));
  }
  if (chance(rng, 0.5)) {
    gen.entities.push_back(entity("MadeUp_" + random_identifier(rng, 1, 3),
                                  draw_attrs(rand_int(rng, 2, 4))));
  }
  return {gen, gold};
}

// ---------------- oracles ----------------

/// Brute-force transitive-redundancy reference: enumerate all ordered entity
/// triples and all relationship combinations with plain linear scans.
inline std::vector<erkit::Finding> oracle_transitive_redundancy(const erkit::ERModel& m) {
  auto entity_index = [&](const std::string& name) -> std::ptrdiff_t {
    for (std::size_t i = 0; i < m.entities.size(); ++i) {
      if (m.entities[i].name == name) return static_cast<std::ptrdiff_t>(i);
    }
    const std::string key = erkit::normalize_name(name);
    for (std::size_t i = 0; i < m.entities.size(); ++i) {
      if (erkit::normalize_name(m.entities[i].name) == key) {
        return static_cast<std::ptrdiff_t>(i);
      }
    }
    return -1;
  };
  auto is_many = [](erkit::Cardinality c) {
    return c == erkit::Cardinality::ZeroOrMore || c == erkit::Cardinality::OneOrMore;
  };
  // one_to_many(p, c, k): relationship k is binary with p on a '1' end and c
  // on a '*'/'+' end.
  auto one_to_many = [&](std::size_t p, std::size_t c, std::size_t k) {
    const erkit::Relationship& rel = m.relationships[k];
    if (rel.endpoints.size() != 2) return false;
    auto a = entity_index(rel.endpoints[0].entity);
    auto b = entity_index(rel.endpoints[1].entity);
    if (a < 0 || b < 0) return false;
    const auto ca = rel.endpoints[0].cardinality;
    const auto cb = rel.endpoints[1].cardinality;
    if (static_cast<std::size_t>(a) == p && static_cast<std::size_t>(b) == c &&
        ca == erkit::Cardinality::ExactlyOne && is_many(cb)) {
      return true;
    }
    if (static_cast<std::size_t>(b) == p && static_cast<std::size_t>(a) == c &&
        cb == erkit::Cardinality::ExactlyOne && is_many(ca)) {
      return true;
    }
    return false;
  };
  auto exists_one_to_many = [&](std::size_t p, std::size_t c) {
    for (std::size_t k = 0; k < m.relationships.size(); ++k) {
      if (one_to_many(p, c, k)) return true;
    }
    return false;
  };

  std::vector<erkit::Finding> findings;
  const std::size_t n = m.entities.size();
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t mid = 0; mid < n; ++mid) {
      for (std::size_t c = 0; c < n; ++c) {
        if (p == mid || mid == c || p == c) continue;
        if (!exists_one_to_many(p, mid) || !exists_one_to_many(mid, c)) continue;
        for (std::size_t k = 0; k < m.relationships.size(); ++k) {
          if (!one_to_many(p, c, k)) continue;
          findings.push_back({"transitive-redundancy", erkit::Severity::Warning,
                              "relationships[" + std::to_string(k) + "]",
                              "direct relationship '" + m.entities[p].name + "' -> '" +
                                  m.entities[c].name + "' is derivable through '" +
                                  m.entities[mid].name + "'"});
        }
      }
    }
  }
  std::sort(findings.begin(), findings.end(), [](const erkit::Finding& a, const erkit::Finding& b) {
    if (a.rule_id != b.rule_id) return a.rule_id < b.rule_id;
    if (a.location != b.location) return a.location < b.location;
    return a.message < b.message;
  });
  return findings;
}

/// Brute-force optimum of the phase-2 assignment: best total overlap score
/// over all partial injections (pairs must clear the threshold). Phase-1
/// pairs (normalization-equal names) are fixed first, mirroring the contract.
inline double oracle_optimal_phase2_score(const erkit::ERModel& gen, const erkit::ERModel& gold,
                                          double threshold) {
  std::vector<bool> gen_used(gen.entities.size(), false);
  std::vector<bool> gold_used(gold.entities.size(), false);
  // Phase 1 is fixed by the contract: sorted gold entities each take the
  // lexicographically least normalization-equal generated entity.
  std::vector<std::size_t> gold_order(gold.entities.size());
  for (std::size_t i = 0; i < gold_order.size(); ++i) gold_order[i] = i;
  std::sort(gold_order.begin(), gold_order.end(), [&](std::size_t a, std::size_t b) {
    return gold.entities[a].name < gold.entities[b].name;
  });
  for (std::size_t h : gold_order) {
    const std::string key = erkit::normalize_name(gold.entities[h].name);
    std::ptrdiff_t best = -1;
    for (std::size_t g = 0; g < gen.entities.size(); ++g) {
      if (gen_used[g] || erkit::normalize_name(gen.entities[g].name) != key) continue;
      if (best < 0 || gen.entities[g].name < gen.entities[static_cast<std::size_t>(best)].name) {
        best = static_cast<std::ptrdiff_t>(g);
      }
    }
    if (best >= 0) {
      gen_used[static_cast<std::size_t>(best)] = true;
      gold_used[h] = true;
    }
  }

  std::vector<std::size_t> rem_gen, rem_gold;
  for (std::size_t g = 0; g < gen.entities.size(); ++g) {
    if (!gen_used[g]) rem_gen.push_back(g);
  }
  for (std::size_t h = 0; h < gold.entities.size(); ++h) {
    if (!gold_used[h]) rem_gold.push_back(h);
  }

  std::vector<std::vector<double>> score(rem_gen.size(),
                                         std::vector<double>(rem_gold.size(), -1.0));
  for (std::size_t i = 0; i < rem_gen.size(); ++i) {
    for (std::size_t j = 0; j < rem_gold.size(); ++j) {
      double s = erkit::attribute_overlap(gen.entities[rem_gen[i]], gold.entities[rem_gold[j]]);
      if (s >= threshold) score[i][j] = s;
    }
  }
  std::vector<bool> taken(rem_gold.size(), false);
  double best_total = 0.0;
  auto dfs = [&](auto&& self, std::size_t i, double total) -> void {
    if (i == rem_gen.size()) {
      best_total = std::max(best_total, total);
      return;
    }
    self(self, i + 1, total);  // leave gen[i] unmatched
    for (std::size_t j = 0; j < rem_gold.size(); ++j) {
      if (taken[j] || score[i][j] < 0) continue;
      taken[j] = true;
      self(self, i + 1, total + score[i][j]);
      taken[j] = false;
    }
  };
  dfs(dfs, 0, 0.0);
  return best_total;
}

/// Phase-2 score achieved by a mapping: pairs whose names are NOT
/// normalization-equal (those were phase-1 pairs by construction).
inline double phase2_score_of(const erkit::MatchMapping& mapping, const erkit::ERModel& gen,
                              const erkit::ERModel& gold) {
  double total = 0.0;
  for (auto [g, h] : mapping.entity_pairs) {
    if (erkit::normalize_name(gen.entities[g].name) ==
        erkit::normalize_name(gold.entities[h].name)) {
      continue;
    }
    total += erkit::attribute_overlap(gen.entities[g], gold.entities[h]);
  }
  return total;
}

// ---------------- DOT syntax checker ----------------

struct DotCheck {
  bool braces_balanced = false;
  bool quotes_balanced = false;
  bool html_balanced = false;
  std::set<std::string> nodes;
  std::vector<std::pair<std::string, std::string>> edges;

  bool all_edge_endpoints_declared() const {
    for (const auto& [a, b] : edges) {
      if (!nodes.count(a) || !nodes.count(b)) return false;
    }
    return true;
  }
  bool ok() const {
    return braces_balanced && quotes_balanced && html_balanced &&
           all_edge_endpoints_declared();
  }
};

/// Independent scan of a DOT document: character-level balance of braces,
/// quotes and HTML-label angle brackets, plus node/edge extraction from the
/// emitter's line shapes.
inline DotCheck check_dot(const std::string& text) {
  DotCheck check;
  int brace_depth = 0, html_depth = 0;
  bool in_quote = false, escaped = false;
  bool negative = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (html_depth > 0) {
      if (c == '<') ++html_depth;
      if (c == '>') --html_depth;
      continue;
    }
    if (in_quote) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_quote = false;
      }
      continue;
    }
    switch (c) {
      case '"': in_quote = true; break;
      case '{': ++brace_depth; break;
      case '}':
        if (--brace_depth < 0) negative = true;
        break;
      case '<':
        if (i > 0 && text[i - 1] == '=') ++html_depth;
        break;
      default: break;
    }
  }
  check.braces_balanced = brace_depth == 0 && !negative;
  check.quotes_balanced = !in_quote;
  check.html_balanced = html_depth == 0;

  // Line shapes: `"id" [...]` declares a node, `"a" -- "b" [...]` an edge.
  auto parse_quoted = [](const std::string& line, std::size_t pos,
                         std::string* out) -> std::size_t {
    if (pos >= line.size() || line[pos] != '"') return std::string::npos;
    std::string id;
    bool esc = false;
    for (std::size_t i = pos + 1; i < line.size(); ++i) {
      if (esc) {
        if (line[i] == 'n') {
          id.push_back('\n');
        } else {
          id.push_back(line[i]);
        }
        esc = false;
        continue;
      }
      if (line[i] == '\\') {
        esc = true;
        continue;
      }
      if (line[i] == '"') {
        *out = id;
        return i + 1;
      }
      id.push_back(line[i]);
    }
    return std::string::npos;
  };
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    start = end + 1;
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] != '"') continue;
    std::string id_a;
    std::size_t after = parse_quoted(line, first, &id_a);
    if (after == std::string::npos) continue;
    std::size_t rest = line.find_first_not_of(" \t", after);
    if (rest != std::string::npos && line.compare(rest, 2, "--") == 0) {
      std::size_t second = line.find('"', rest);
      std::string id_b;
      if (second != std::string::npos &&
          parse_quoted(line, second, &id_b) != std::string::npos) {
        check.edges.emplace_back(id_a, id_b);
      }
    } else {
      check.nodes.insert(id_a);
    }
  }
  return check;
}

}  // namespace testutil

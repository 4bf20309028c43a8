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

#include <doctest.h>

#include "erkit/errors.hpp"
#include "erkit/interchange.hpp"
#include "testutil.hpp"

using namespace erkit;

TEST_SUITE_BEGIN("interchange");

TEST_CASE("minimal document") {
  const ERModel m = parse_model(
      R"({"entities": [{"name": "A", "attributes": [{"name": "id"}]}], "relationships": []})");
  REQUIRE(m.entities.size() == 1);
  CHECK(m.entities[0].name == "A");
  REQUIRE(m.entities[0].attributes.size() == 1);
  CHECK(m.entities[0].attributes[0].name == "id");
  CHECK(!m.entities[0].attributes[0].is_primary_key);
  CHECK(m.entities[0].attributes[0].declared_type.empty());
  CHECK(m.relationships.empty());
}

TEST_CASE("relation strings normalize to structured form") {
  const ERModel m = parse_model(R"({
    "entities": [
      {"name": "Hospital", "attributes": [{"name": "hospital_id", "pk": true}]},
      {"name": "HospitalDepartment", "attributes": [{"name": "hospital_id", "fk": true}]}
    ],
    "relationships": ["Hospital:hospital_id 1--* HospitalDepartment:hospital_id"]
  })");
  REQUIRE(m.relationships.size() == 1);
  const Relationship& rel = m.relationships[0];
  CHECK(rel.endpoints[0].entity == "Hospital");
  CHECK(rel.endpoints[0].cardinality == Cardinality::ExactlyOne);
  CHECK(rel.endpoints[1].entity == "HospitalDepartment");
  CHECK(rel.endpoints[1].cardinality == Cardinality::ZeroOrMore);
}

TEST_CASE("numeric relationship entry names expected and found types") {
  try {
    parse_model(R"({"entities": [], "relationships": [42]})");
    FAIL("expected SchemaViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SchemaViolation);
    CHECK(e.detail() == "relationships[0]");
    CHECK(std::string(e.what()).find("string or endpoint list") != std::string::npos);
    CHECK(std::string(e.what()).find("number") != std::string::npos);
  }
}

TEST_CASE("structured endpoints with label and n-ary arity") {
  const ERModel m = parse_model(R"({
    "entities": [
      {"name": "A", "attributes": [{"name": "id"}]},
      {"name": "B", "attributes": [{"name": "id"}]},
      {"name": "C", "attributes": [{"name": "id"}]}
    ],
    "relationships": [
      {"endpoints": [{"entity": "A", "cardinality": "1"},
                     {"entity": "B", "cardinality": "*"},
                     {"entity": "C", "attribute": "id", "cardinality": "+"}],
       "label": "works"}
    ]
  })");
  REQUIRE(m.relationships.size() == 1);
  CHECK(m.relationships[0].endpoints.size() == 3);
  CHECK(m.relationships[0].label == "works");
  CHECK(m.relationships[0].endpoints[2].attribute == "id");
}

TEST_CASE("single endpoint list is a schema violation") {
  try {
    parse_model(R"({"entities": [{"name": "A", "attributes": [{"name": "i"}]}],
                    "relationships": [{"endpoints": [{"entity": "A", "cardinality": "1"}]}]})");
    FAIL("expected SchemaViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SchemaViolation);
    CHECK(e.detail() == "relationships[0].endpoints");
  }
}

TEST_CASE("dangling reference points into the document") {
  try {
    parse_model(R"({"entities": [{"name": "A", "attributes": [{"name": "id"}]}],
                    "relationships": ["A:id 1--* Ghost"]})");
    FAIL("expected UnknownEntityReference");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownEntityReference);
    CHECK(e.detail() == "relationships[0].endpoints[1]");
  }
}

TEST_CASE("bad cardinality in structured endpoint") {
  try {
    parse_model(R"({"entities": [{"name": "A", "attributes": [{"name": "i"}]}],
                    "relationships": [{"endpoints": [
                      {"entity": "A", "cardinality": "1"},
                      {"entity": "A", "cardinality": "N"}]}]})");
    FAIL("expected BadCardinalitySymbol");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BadCardinalitySymbol);
  }
}

TEST_CASE("unknown format_version is rejected") {
  try {
    parse_model(R"({"format_version": "7", "entities": [], "relationships": []})");
    FAIL("expected SchemaViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SchemaViolation);
    CHECK(e.detail() == "format_version");
  }
}

TEST_CASE("missing lists default to empty") {
  const ERModel m = parse_model("{}");
  CHECK(m.entities.empty());
  CHECK(m.relationships.empty());
  CHECK(!m.title);
}

TEST_CASE("binary relationship with label keeps structured form") {
  ERModel m;
  m.entities.push_back(testutil::entity("A", {testutil::attr("id")}));
  Relationship rel;
  rel.endpoints.push_back({"A", "id", Cardinality::ExactlyOne});
  rel.endpoints.push_back({"A", std::nullopt, Cardinality::ZeroOrMore});
  rel.label = "self link";
  m.relationships.push_back(rel);
  const auto doc = model_to_json(m);
  REQUIRE(doc["relationships"].size() == 1);
  CHECK(doc["relationships"][0].is_object());
  CHECK(doc["relationships"][0]["label"] == "self link");
}

TEST_CASE("property: serialize/parse round trip lands on the same canonical model") {
  testutil::Rng rng(7);
  for (int i = 0; i < 60; ++i) {
    const ERModel model = canonicalize(testutil::random_model(rng, 6));
    const ERModel reparsed = canonicalize(parse_model(serialize_model(model)));
    CHECK(model == reparsed);
  }
}

TEST_CASE("pipeline composes extract, parse and canonicalize") {
  const std::string raw =
      "Model:\n```json\n{\"entities\": [{\"name\": \"B\", \"attributes\": [{\"name\": \"x\"}]},"
      " {\"name\": \"A\", \"attributes\": [{\"name\": \"y\"}]}], \"relationships\": []}\n```\n";
  const PipelineResult result = normalize_pipeline(raw);
  CHECK(result.report.source_kind == SourceKind::FencedBlock);
  REQUIRE(result.report.warnings.size() == 1);
  CHECK(result.model.entities[0].name == "A");  // canonical order

  try {
    normalize_pipeline("nothing to see");
    FAIL("expected stage-tagged failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoDocumentFound);
    CHECK(e.stage() == "extract");
  }

  try {
    normalize_pipeline(R"({"entities": 5})");
    FAIL("expected stage-tagged failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SchemaViolation);
    CHECK(e.stage() == "parse");
  }
}

TEST_SUITE_END();

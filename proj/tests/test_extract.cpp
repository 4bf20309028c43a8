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

#include <nlohmann/json.hpp>

#include "erkit/errors.hpp"
#include "erkit/extract.hpp"
#include "erkit/interchange.hpp"
#include "erkit/io.hpp"
#include "testutil.hpp"

using namespace erkit;

TEST_SUITE_BEGIN("extract");

TEST_CASE("pure document passes through byte-identically") {
  const std::string raw = "{\"entities\": [], \"relationships\": []}\n";
  auto [doc, report] = extract_document(raw);
  CHECK(doc == raw);
  CHECK(report.source_kind == SourceKind::PureDocument);
  CHECK(report.bytes_discarded == 0);
  CHECK(report.warnings.empty());
}

TEST_CASE("fenced block extraction") {
  const std::string payload = "{\"entities\": [], \"relationships\": []}";
  const std::string raw = "Here is the model:\n```json\n" + payload + "\n```\nHope this helps";
  auto [doc, report] = extract_document(raw);
  CHECK(doc == payload);
  CHECK(report.source_kind == SourceKind::FencedBlock);
  CHECK(report.bytes_discarded == raw.size() - payload.size());
  REQUIRE(report.warnings.size() == 1);
}

TEST_CASE("escaped string literal extraction") {
  const std::string raw = R"("{\"entities\": [], \"relationships\": []}")";
  auto [doc, report] = extract_document(raw);
  CHECK(doc == "{\"entities\": [], \"relationships\": []}");
  CHECK(report.source_kind == SourceKind::EscapedString);
  CHECK(report.bytes_discarded > 0);
}

TEST_CASE("embedded object span extraction") {
  const std::string raw = "The final answer is {\"entities\": []} as required.";
  auto [doc, report] = extract_document(raw);
  CHECK(doc == "{\"entities\": []}");
  CHECK(report.source_kind == SourceKind::EmbeddedInProse);
}

TEST_CASE("trailing comma repair is reported") {
  const std::string raw = "```json\n{\"entities\": [],}\n```";
  auto [doc, report] = extract_document(raw);
  CHECK(report.source_kind == SourceKind::FencedBlock);
  bool repaired = false;
  for (const auto& w : report.warnings) repaired |= w.find("trailing comma") != std::string::npos;
  CHECK(repaired);
}

TEST_CASE("prose without braces raises NoDocumentFound") {
  try {
    extract_document("no model here, sorry");
    FAIL("expected NoDocumentFound");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoDocumentFound);
  }
}

TEST_CASE("located but unparseable candidate raises MalformedDocument") {
  for (const char* raw : {"{\"entities\": [", "```json\n{nope}\n```", "prefix {a: b} suffix"}) {
    CAPTURE(raw);
    try {
      extract_document(raw);
      FAIL("expected MalformedDocument");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MalformedDocument);
    }
  }
}

TEST_CASE("top-level JSON array is not a document") {
  CHECK_THROWS_AS(extract_document("[1, 2, 3]"), Error);
}

TEST_CASE("property: discarded bytes are zero exactly for pure documents") {
  testutil::Rng rng(42);
  for (int i = 0; i < 50; ++i) {
    const ERModel model = testutil::random_model(rng, 5);
    const std::string doc = serialize_model(model);
    auto [pure, report] = extract_document(doc);
    CHECK(pure == doc);
    CHECK(report.source_kind == SourceKind::PureDocument);
    CHECK(report.bytes_discarded == 0);

    auto [fenced, fenced_report] = extract_document("noise\n```json\n" + doc + "\n```\n");
    CHECK((fenced_report.bytes_discarded == 0) ==
          (fenced_report.source_kind == SourceKind::PureDocument));
    CHECK(fenced_report.source_kind == SourceKind::FencedBlock);
  }
}

TEST_CASE("determinism: identical input yields identical output") {
  const std::string raw = "prefix {\"entities\": [], \"title\": \"t\"} suffix";
  auto first = extract_document(raw);
  auto second = extract_document(raw);
  CHECK(first.first == second.first);
  CHECK(first.second.source_kind == second.second.source_kind);
  CHECK(first.second.bytes_discarded == second.second.bytes_discarded);
  CHECK(first.second.warnings == second.second.warnings);
}

TEST_CASE("fixture corpus classifies per manifest") {
  const auto manifest =
      nlohmann::json::parse(read_file(testutil::fixture_path("noisy/manifest.json")));
  std::size_t checked = 0;
  for (const auto& entry : manifest) {
    const std::string file = entry["file"].get<std::string>();
    CAPTURE(file);
    const std::string raw = read_file(testutil::fixture_path("noisy/" + file));
    if (entry.contains("kind")) {
      auto [doc, report] = extract_document(raw);
      CHECK(std::string(to_string(report.source_kind)) == entry["kind"].get<std::string>());
      if (entry["kind"] == "pure-document") CHECK(doc == raw);

      // The recovered model must equal the hand-authored expectation.
      const ERModel expected = canonicalize(
          parse_model(read_file(testutil::fixture_path("noisy/" + entry["expected"].get<std::string>()))));
      const PipelineResult result = normalize_pipeline(raw);
      CHECK(result.model == expected);
    } else {
      try {
        normalize_pipeline(raw);
        FAIL_CHECK("expected pipeline failure for ", file);
      } catch (const Error& e) {
        CHECK(std::string(to_string(e.code())) == entry["error"].get<std::string>());
        CHECK(e.stage() == entry["stage"].get<std::string>());
      }
    }
    ++checked;
  }
  CHECK(checked >= 20);
}

TEST_SUITE_END();

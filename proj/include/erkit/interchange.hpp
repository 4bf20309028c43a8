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

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "erkit/extract.hpp"
#include "erkit/model.hpp"

namespace erkit {

// Interchange file format, version "1" (UTF-8 JSON object):
//
//   {
//     "format_version": "1",            // optional, defaults to "1"
//     "title": "...",                   // optional
//     "entities": [
//       { "name": "Hospital",
//         "attributes": [ { "name": "hospital_id", "type": "int",
//                           "pk": true, "fk": false,
//                           "not_null": true, "unique": true } ],
//         "parent": "Facility" }        // optional generalization link
//     ],
//     "relationships": [
//       "Hospital:hospital_id 1--* HospitalDepartment:hospital_id",
//       { "endpoints": [ { "entity": "A", "attribute": "id",
//                          "cardinality": "1" }, ... ],
//         "label": "works in" }
//     ]
//   }
//
// Relationships accept both encodings; parsing normalizes to the structured
// form. Serialization emits the relation string for binary label-free
// relationships whose names fit the string grammar, the structured form
// otherwise. Missing flags default to false, missing lists to empty.

inline constexpr std::string_view kFormatVersion = "1";

/// Parse and validate an interchange document into a typed model. The result
/// always passes validate_model. Throws Error with code SchemaViolation
/// (detail = document path, message names expected vs found),
/// UnknownEntityReference / UnknownAttributeReference, BadCardinalitySymbol,
/// or InvalidModel for the remaining structural failures.
ERModel parse_model(std::string_view document);

nlohmann::ordered_json model_to_json(const ERModel& m);

/// Canonical text form: model_to_json pretty-printed, trailing newline.
std::string serialize_model(const ERModel& m);

struct PipelineResult {
  ERModel model;  // canonical
  ExtractionReport report;
};

/// extract_document -> parse_model -> canonicalize. Errors are rethrown with
/// stage() set to "extract", "parse" or "canonicalize".
PipelineResult normalize_pipeline(std::string_view raw);

}  // namespace erkit

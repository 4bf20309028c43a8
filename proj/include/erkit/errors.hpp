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

#include <stdexcept>
#include <string>
#include <string_view>

namespace erkit {

enum class ErrorCode {
  BadCardinalitySymbol,
  MalformedRelation,
  NotBinary,
  InvalidModel,
  NoDocumentFound,
  MalformedDocument,
  SchemaViolation,
  UnknownEntityReference,
  UnknownAttributeReference,
  UnknownRule,
  EmptyRequirements,
  ProviderError,
  ConfigError,
  RendererUnavailable,
  RendererFailed,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Library-wide exception. `detail` carries the offending substring or the
/// model/document path the error points at; `stage` is set by
/// normalize_pipeline to name the failing stage (extract/parse/canonicalize).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string detail = {})
      : std::runtime_error(message), code_(code), detail_(std::move(detail)) {}

  ErrorCode code() const { return code_; }
  const std::string& detail() const { return detail_; }
  const std::string& stage() const { return stage_; }

  Error& with_stage(std::string stage) {
    stage_ = std::move(stage);
    return *this;
  }

 private:
  ErrorCode code_;
  std::string detail_;
  std::string stage_;
};

}  // namespace erkit

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

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "erkit/lint.hpp"
#include "erkit/model.hpp"

namespace erkit {

enum class PromptStrategy { Baseline, ChainOfThought, ChainOfThoughtVerifier };

std::string_view strategy_name(PromptStrategy s);  // baseline / cot / cot-verifier
std::optional<PromptStrategy> strategy_from_name(std::string_view name);

struct Message {
  enum class Role { System, User };
  Role role = Role::User;
  std::string content;

  bool operator==(const Message&) const = default;
};

std::string_view to_string(Message::Role role);

/// Ordered message stages. Baseline and ChainOfThought have exactly one
/// stage; ChainOfThoughtVerifier has two (generation, then verification).
struct PromptBundle {
  std::vector<std::vector<Message>> stages;
};

/// Placeholder in the verifier stage-2 template; the runner substitutes the
/// stage-1 raw output before sending.
inline constexpr std::string_view kStageOutputSlot = "{{STAGE1_OUTPUT}}";

/// Version stamp recorded with every experiment record.
inline constexpr std::string_view kPromptTemplateVersion = "1";

/// The interchange-format description handed to the model when the
/// experiment config does not supply its own.
std::string default_format_spec();

/// Build the message stages for one strategy. Requirements are embedded
/// verbatim in every stage. Throws Error(EmptyRequirements) when
/// `requirements` is empty or whitespace-only.
PromptBundle build_prompt(PromptStrategy strategy, std::string_view requirements,
                          std::string_view format_spec);

/// Replace every kStageOutputSlot occurrence in a stage with prior output.
std::vector<Message> fill_output_slot(std::vector<Message> stage,
                                      std::string_view stage_output);

/// Stable 64-bit FNV-1a digest of a message list, as 16 hex chars. Keys the
/// replay provider's canned responses.
std::string prompt_hash(const std::vector<Message>& messages);

/// Single-operation provider contract: send a chat to a backend, get text.
class Provider {
 public:
  virtual ~Provider() = default;
  virtual const std::string& id() const = 0;
  virtual std::string send(const std::vector<Message>& messages) = 0;
};

/// Deterministic offline backend: responses read from
/// <directory>/<prompt_hash>.txt. A missing file raises Error(ProviderError)
/// naming the expected filename.
class ReplayProvider : public Provider {
 public:
  ReplayProvider(std::string id, std::string directory);
  const std::string& id() const override { return id_; }
  std::string send(const std::vector<Message>& messages) override;

 private:
  std::string id_;
  std::string directory_;
};

struct ProviderSpec {
  std::string id;
  std::string kind;            // "replay" or "http"
  std::string replay_dir;      // replay
  std::string endpoint;        // http: base URL of a chat-completions API
  std::string model;           // http: model name
  std::string credential_env;  // http: env var holding the API key
  double temperature = -1.0;   // http: omitted when < 0
  int max_retries = 2;         // http: transport retries
};

/// OpenAI-style chat-completions backend over HTTP(S).
std::unique_ptr<Provider> make_provider(const ProviderSpec& spec);

struct ScenarioSpec {
  std::string id;
  std::string path;       // .txt requirements
  std::string gold_path;  // optional per-scenario gold model
};

struct ExperimentConfig {
  std::vector<ScenarioSpec> scenarios;
  std::vector<PromptStrategy> strategies;
  std::vector<ProviderSpec> providers;
  int parallelism = 1;
  std::string output_root;
  std::string format_spec;      // empty -> default_format_spec()
  std::string gold_model_path;  // fallback gold for all scenarios
  bool analyze = false;
  RuleConfig lint_config;
};

/// Load an experiment config from a JSON file. Throws Error(ConfigError).
ExperimentConfig load_experiment_config(const std::string& path);

enum class RunOutcome { Ok, ExtractionFailed, ProviderError };

std::string_view to_string(RunOutcome outcome);

struct ExperimentRecord {
  std::string scenario_id;
  PromptStrategy strategy = PromptStrategy::Baseline;
  std::string provider_id;
  PromptBundle prompts;                    // messages actually sent
  std::vector<std::string> raw_responses;  // one per completed stage
  std::optional<ERModel> extracted_model;  // canonical, when outcome == Ok
  std::vector<std::string> timestamps;     // ISO-8601 UTC, one per stage
  RunOutcome outcome = RunOutcome::Ok;
  std::string error_message;
  std::vector<std::string> warnings;
  std::string record_dir;
};

// Fixed file names inside a record directory.
inline constexpr std::string_view kPromptsFile = "prompts.json";
inline constexpr std::string_view kRecordFile = "record.json";
inline constexpr std::string_view kModelFile = "model.json";
inline constexpr std::string_view kFindingsTextFile = "findings.txt";
inline constexpr std::string_view kFindingsJsonFile = "findings.json";
inline constexpr std::string_view kDiffTextFile = "diff.txt";
inline constexpr std::string_view kDiffJsonFile = "diff.json";
inline constexpr std::string_view kDotFile = "model.dot";

std::string raw_response_file(std::size_t stage_index);  // raw_response_stage<k>.txt

/// Execute the scenario x strategy x provider cross product. Every cell
/// materializes a record directory under
/// <output_root>/<scenario>/<strategy>/<provider>/; raw provider output is
/// written before extraction is attempted. Independent cells may run
/// concurrently up to config.parallelism. Records return in deterministic
/// (scenario, strategy, provider) order. Throws Error(ConfigError) for an
/// unusable config; provider failures are recorded per cell, not thrown.
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config);

/// Offline analysis of one record directory: lint + level, diff against the
/// gold model when given, and DOT emission. Reads <dir>/model.json; writes
/// findings.txt/.json, diff.txt/.json and model.dot. Deterministic: repeated
/// runs produce byte-identical files.
void analyze_record(const std::string& record_dir, const ERModel* gold,
                    const RuleConfig& lint_config = {});

}  // namespace erkit

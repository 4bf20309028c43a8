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

#include "erkit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <thread>

#include <nlohmann/json.hpp>

#include "erkit/diff.hpp"
#include "erkit/dot.hpp"
#include "erkit/errors.hpp"
#include "erkit/interchange.hpp"
#include "erkit/io.hpp"

namespace erkit {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::string_view strategy_name(PromptStrategy s) {
  switch (s) {
    case PromptStrategy::Baseline: return "baseline";
    case PromptStrategy::ChainOfThought: return "cot";
    case PromptStrategy::ChainOfThoughtVerifier: return "cot-verifier";
  }
  return "unknown";
}

std::optional<PromptStrategy> strategy_from_name(std::string_view name) {
  if (name == "baseline") return PromptStrategy::Baseline;
  if (name == "cot") return PromptStrategy::ChainOfThought;
  if (name == "cot-verifier") return PromptStrategy::ChainOfThoughtVerifier;
  return std::nullopt;
}

std::string_view to_string(Message::Role role) {
  return role == Message::Role::System ? "system" : "user";
}

std::string_view to_string(RunOutcome outcome) {
  switch (outcome) {
    case RunOutcome::Ok: return "ok";
    case RunOutcome::ExtractionFailed: return "extraction-failed";
    case RunOutcome::ProviderError: return "provider-error";
  }
  return "unknown";
}

std::string raw_response_file(std::size_t stage_index) {
  return "raw_response_stage" + std::to_string(stage_index + 1) + ".txt";
}

std::string default_format_spec() {
  return R"(Return a single JSON object with these keys:
  "format_version": "1"
  "title": optional string
  "entities": list of { "name", "attributes": [ { "name", "type"?, "pk"?, "fk"?, "not_null"?, "unique"? } ], "parent"? }
  "relationships": list of relation strings like "Entity:attribute 1--* Other:attribute"
                   or objects { "endpoints": [ { "entity", "attribute"?, "cardinality" } ], "label"? }
Cardinality marks: "1" exactly one, "*" zero or more, "?" zero or one, "+" one or more.
)";
}

namespace {

const char* kSystemPrompt =
    "You are an expert in conceptual database modeling. You design "
    "entity-relationship models from natural-language requirements.";

bool whitespace_only(std::string_view s) {
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

PromptBundle build_prompt(PromptStrategy strategy, std::string_view requirements,
                          std::string_view format_spec) {
  if (requirements.empty() || whitespace_only(requirements)) {
    throw Error(ErrorCode::EmptyRequirements, "requirements text is empty");
  }
  const std::string req(requirements);
  const std::string fmt(format_spec);

  auto generation_stage = [&](bool chain_of_thought) {
    std::string user = "Produce an entity-relationship model for the requirements below.\n\n";
    if (chain_of_thought) {
      user +=
          "First, reason step-by-step: enumerate the candidate entities, their "
          "attributes, and the relationships between them with their cardinalities. "
          "Number each step. After the reasoning, output the final model.\n\n";
    }
    user += "Requirements:\n" + req + "\n\nOutput format:\n" + fmt + "\n";
    user += chain_of_thought
                ? "End your reply with the JSON document in a fenced code block."
                : "Reply with the JSON document only, no commentary and no code fences.";
    return std::vector<Message>{{Message::Role::System, kSystemPrompt},
                                {Message::Role::User, std::move(user)}};
  };

  PromptBundle bundle;
  switch (strategy) {
    case PromptStrategy::Baseline:
      bundle.stages.push_back(generation_stage(false));
      break;
    case PromptStrategy::ChainOfThought:
      bundle.stages.push_back(generation_stage(true));
      break;
    case PromptStrategy::ChainOfThoughtVerifier: {
      bundle.stages.push_back(generation_stage(true));
      std::string user =
          "Below is an entity-relationship model produced for the requirements that "
          "follow. Critically review it: check that every requirement is covered, that "
          "cardinalities match the business rules, that keys and integrity constraints "
          "are present, and that there are no redundant or spurious elements. Then "
          "return the corrected model.\n\nModel under review:\n" +
          std::string(kStageOutputSlot) + "\n\nRequirements:\n" + req +
          "\n\nOutput format:\n" + fmt +
          "\nReturn the corrected JSON document only, no commentary.";
      bundle.stages.push_back({{Message::Role::System, kSystemPrompt},
                               {Message::Role::User, std::move(user)}});
      break;
    }
  }
  return bundle;
}

std::vector<Message> fill_output_slot(std::vector<Message> stage,
                                      std::string_view stage_output) {
  const std::string slot(kStageOutputSlot);
  for (Message& message : stage) {
    std::size_t pos = 0;
    while ((pos = message.content.find(slot, pos)) != std::string::npos) {
      message.content.replace(pos, slot.size(), stage_output);
      pos += stage_output.size();
    }
  }
  return stage;
}

std::string prompt_hash(const std::vector<Message>& messages) {
  std::uint64_t hash = 1469598103934665603ULL;  // FNV-1a offset basis
  auto mix = [&](std::string_view text) {
    for (unsigned char c : text) {
      hash ^= c;
      hash *= 1099511628211ULL;
    }
  };
  for (const Message& message : messages) {
    mix(to_string(message.role));
    mix("\x1f");
    mix(message.content);
    mix("\x1e");
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[hash & 0xF];
    hash >>= 4;
  }
  return out;
}

ReplayProvider::ReplayProvider(std::string id, std::string directory)
    : id_(std::move(id)), directory_(std::move(directory)) {}

std::string ReplayProvider::send(const std::vector<Message>& messages) {
  const std::string path = directory_ + "/" + prompt_hash(messages) + ".txt";
  if (!fs::exists(path)) {
    throw Error(ErrorCode::ProviderError,
                "replay provider '" + id_ + "' has no canned response at " + path, path);
  }
  return read_file(path);
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorCode::ConfigError, "experiment config '" + path + "' is not a JSON object");
  }
  auto config_dir = fs::path(path).parent_path();
  auto resolve = [&](const std::string& p) {
    if (p.empty() || fs::path(p).is_absolute()) return p;
    return (config_dir / p).string();
  };

  ExperimentConfig config;
  if (!doc.contains("scenarios") || !doc["scenarios"].is_array() || doc["scenarios"].empty()) {
    throw Error(ErrorCode::ConfigError, "config needs a non-empty 'scenarios' array");
  }
  for (const auto& s : doc["scenarios"]) {
    ScenarioSpec spec;
    if (s.is_string()) {
      spec.path = resolve(s.get<std::string>());
      spec.id = fs::path(spec.path).stem().string();
    } else if (s.is_object()) {
      if (!s.contains("path") || !s["path"].is_string()) {
        throw Error(ErrorCode::ConfigError, "scenario entries need a string 'path'");
      }
      spec.path = resolve(s["path"].get<std::string>());
      spec.id = s.value("id", fs::path(spec.path).stem().string());
      spec.gold_path = resolve(s.value("gold", std::string{}));
    } else {
      throw Error(ErrorCode::ConfigError, "scenario entries must be strings or objects");
    }
    config.scenarios.push_back(std::move(spec));
  }
  if (!doc.contains("strategies") || !doc["strategies"].is_array() ||
      doc["strategies"].empty()) {
    throw Error(ErrorCode::ConfigError, "config needs a non-empty 'strategies' array");
  }
  for (const auto& s : doc["strategies"]) {
    if (!s.is_string()) throw Error(ErrorCode::ConfigError, "strategies must be strings");
    auto strategy = strategy_from_name(s.get<std::string>());
    if (!strategy) {
      throw Error(ErrorCode::ConfigError,
                  "unknown strategy '" + s.get<std::string>() +
                      "' (expected baseline, cot or cot-verifier)");
    }
    config.strategies.push_back(*strategy);
  }
  if (!doc.contains("providers") || !doc["providers"].is_array() || doc["providers"].empty()) {
    throw Error(ErrorCode::ConfigError, "config needs a non-empty 'providers' array");
  }
  for (const auto& p : doc["providers"]) {
    if (!p.is_object() || !p.contains("id") || !p["id"].is_string()) {
      throw Error(ErrorCode::ConfigError, "provider entries need a string 'id'");
    }
    ProviderSpec spec;
    spec.id = p["id"].get<std::string>();
    spec.kind = p.value("kind", std::string("http"));
    spec.replay_dir = resolve(p.value("replay_dir", std::string{}));
    spec.endpoint = p.value("endpoint", std::string{});
    spec.model = p.value("model", std::string{});
    spec.credential_env = p.value("credential_env", std::string{});
    spec.temperature = p.value("temperature", -1.0);
    spec.max_retries = p.value("max_retries", 2);
    if (spec.kind != "replay" && spec.kind != "http") {
      throw Error(ErrorCode::ConfigError, "provider kind must be 'replay' or 'http'");
    }
    if (spec.kind == "replay" && spec.replay_dir.empty()) {
      throw Error(ErrorCode::ConfigError, "replay provider '" + spec.id + "' needs 'replay_dir'");
    }
    config.providers.push_back(std::move(spec));
  }
  if (!doc.contains("output_root") || !doc["output_root"].is_string()) {
    throw Error(ErrorCode::ConfigError, "config needs a string 'output_root'");
  }
  config.output_root = resolve(doc["output_root"].get<std::string>());
  config.parallelism = doc.value("parallelism", 1);
  if (config.parallelism < 1) {
    throw Error(ErrorCode::ConfigError, "parallelism must be >= 1");
  }
  config.analyze = doc.value("analyze", false);
  config.gold_model_path = resolve(doc.value("gold_model", std::string{}));
  if (doc.contains("format_spec_path")) {
    config.format_spec = read_file(resolve(doc["format_spec_path"].get<std::string>()));
  } else {
    config.format_spec = doc.value("format_spec", std::string{});
  }
  return config;
}

namespace {

std::string iso8601_utc_now() {
  std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

ordered_json messages_to_json(const std::vector<Message>& messages) {
  ordered_json stage = ordered_json::array();
  for (const Message& message : messages) {
    stage.push_back({{"role", std::string(to_string(message.role))},
                     {"content", message.content}});
  }
  return stage;
}

void write_prompts_file(const std::string& dir, const PromptBundle& templates,
                        const PromptBundle& sent) {
  ordered_json doc;
  doc["template_version"] = std::string(kPromptTemplateVersion);
  ordered_json template_stages = ordered_json::array();
  for (const auto& stage : templates.stages) template_stages.push_back(messages_to_json(stage));
  doc["stages"] = std::move(template_stages);
  ordered_json sent_stages = ordered_json::array();
  for (const auto& stage : sent.stages) sent_stages.push_back(messages_to_json(stage));
  doc["sent_stages"] = std::move(sent_stages);
  write_file(dir + "/" + std::string(kPromptsFile), doc.dump(2) + "\n");
}

void write_record_file(const ExperimentRecord& record, const ProviderSpec& provider,
                       const ExtractionReport* extraction) {
  ordered_json doc;
  doc["scenario_id"] = record.scenario_id;
  doc["strategy"] = std::string(strategy_name(record.strategy));
  doc["provider_id"] = record.provider_id;
  doc["template_version"] = std::string(kPromptTemplateVersion);
  doc["outcome"] = std::string(to_string(record.outcome));
  doc["timestamps"] = record.timestamps;
  ordered_json decoding;
  if (provider.temperature >= 0) decoding["temperature"] = provider.temperature;
  if (!provider.model.empty()) decoding["model"] = provider.model;
  doc["decoding"] = std::move(decoding);
  if (!record.error_message.empty()) doc["error"] = record.error_message;
  if (!record.warnings.empty()) doc["warnings"] = record.warnings;
  if (extraction) {
    doc["extraction"] = {{"source_kind", std::string(to_string(extraction->source_kind))},
                         {"bytes_discarded", extraction->bytes_discarded},
                         {"warnings", extraction->warnings}};
  }
  write_file(record.record_dir + "/" + std::string(kRecordFile), doc.dump(2) + "\n");
}

struct Cell {
  std::size_t scenario, strategy, provider;
};

}  // namespace

void analyze_record(const std::string& record_dir, const ERModel* gold,
                    const RuleConfig& lint_config) {
  const std::string model_path = record_dir + "/" + std::string(kModelFile);
  if (!fs::exists(model_path)) return;  // extraction failed; nothing to analyze
  const ERModel model = parse_model(read_file(model_path));

  std::vector<Finding> findings = run_lints(model, lint_config);
  if (lint_config.enabled_rules.count("transitive-redundancy")) {
    findings = merge_findings(std::move(findings), detect_transitive_redundancy(model));
  }
  const QualityLevel level = classify_level(model, findings);
  std::string text = format_findings(findings);
  text += "level: " + std::string(to_string(level)) + "\n";
  if (level == QualityLevel::L3) text += "L4: manual review required\n";
  write_file(record_dir + "/" + std::string(kFindingsTextFile), text);
  write_file(record_dir + "/" + std::string(kFindingsJsonFile),
             findings_to_json(findings, level).dump(2) + "\n");

  if (gold) {
    const DiffReport report = diff_models(model, *gold);
    write_file(record_dir + "/" + std::string(kDiffTextFile), format_diff_table(report));
    write_file(record_dir + "/" + std::string(kDiffJsonFile), diff_to_json(report).dump(2) + "\n");
  }

  write_file(record_dir + "/" + std::string(kDotFile), emit_dot(model));
}

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config) {
  if (config.scenarios.empty() || config.strategies.empty() || config.providers.empty()) {
    throw Error(ErrorCode::ConfigError, "config needs scenarios, strategies and providers");
  }
  if (config.output_root.empty()) {
    throw Error(ErrorCode::ConfigError, "config needs an output_root");
  }

  // Scenario requirements and gold models load up front; a broken path is a
  // config error, not an experiment outcome.
  std::vector<std::string> requirements;
  for (const ScenarioSpec& scenario : config.scenarios) {
    try {
      requirements.push_back(read_file(scenario.path));
    } catch (const Error& e) {
      throw Error(ErrorCode::ConfigError, e.what());
    }
    if (requirements.back().find_first_not_of(" \t\r\n") == std::string::npos) {
      throw Error(ErrorCode::ConfigError,
                  "scenario '" + scenario.id + "' has empty requirements (" + scenario.path + ")");
    }
  }
  std::vector<std::shared_ptr<ERModel>> golds(config.scenarios.size());
  std::shared_ptr<ERModel> fallback_gold;
  if (!config.gold_model_path.empty()) {
    fallback_gold = std::make_shared<ERModel>(parse_model(read_file(config.gold_model_path)));
  }
  for (std::size_t i = 0; i < config.scenarios.size(); ++i) {
    if (!config.scenarios[i].gold_path.empty()) {
      golds[i] = std::make_shared<ERModel>(parse_model(read_file(config.scenarios[i].gold_path)));
    } else {
      golds[i] = fallback_gold;
    }
  }

  const std::string format_spec =
      config.format_spec.empty() ? default_format_spec() : config.format_spec;

  // Providers construct once; a failure poisons every cell using them but
  // still materializes those records.
  std::vector<std::unique_ptr<Provider>> providers(config.providers.size());
  std::vector<std::string> provider_errors(config.providers.size());
  for (std::size_t i = 0; i < config.providers.size(); ++i) {
    try {
      providers[i] = make_provider(config.providers[i]);
    } catch (const Error& e) {
      provider_errors[i] = e.what();
    }
  }

  std::vector<Cell> cells;
  for (std::size_t s = 0; s < config.scenarios.size(); ++s) {
    for (std::size_t t = 0; t < config.strategies.size(); ++t) {
      for (std::size_t p = 0; p < config.providers.size(); ++p) {
        cells.push_back({s, t, p});
      }
    }
  }
  std::vector<ExperimentRecord> records(cells.size());
  std::vector<std::string> cell_faults(cells.size());

  auto run_cell_body = [&](std::size_t cell_index) {
    const Cell& cell = cells[cell_index];
    const ScenarioSpec& scenario = config.scenarios[cell.scenario];
    const PromptStrategy strategy = config.strategies[cell.strategy];
    const ProviderSpec& provider_spec = config.providers[cell.provider];

    ExperimentRecord record;
    record.scenario_id = scenario.id;
    record.strategy = strategy;
    record.provider_id = provider_spec.id;
    record.record_dir = config.output_root + "/" + scenario.id + "/" +
                        std::string(strategy_name(strategy)) + "/" + provider_spec.id;
    fs::create_directories(record.record_dir);

    const PromptBundle templates =
        build_prompt(strategy, requirements[cell.scenario], format_spec);
    record.prompts = templates;
    write_prompts_file(record.record_dir, templates, record.prompts);

    std::optional<ExtractionReport> extraction;
    try {
      if (!provider_errors[cell.provider].empty()) {
        throw Error(ErrorCode::ProviderError, provider_errors[cell.provider]);
      }
      Provider& provider = *providers[cell.provider];
      for (std::size_t stage = 0; stage < templates.stages.size(); ++stage) {
        std::vector<Message> messages = templates.stages[stage];
        if (stage > 0) messages = fill_output_slot(std::move(messages), record.raw_responses.back());
        record.prompts.stages[stage] = messages;
        record.timestamps.push_back(iso8601_utc_now());
        std::string response = provider.send(messages);
        // Raw-first durability: persist before anything can fail.
        record.raw_responses.push_back(response);
        write_file(record.record_dir + "/" + raw_response_file(stage), response);
        write_prompts_file(record.record_dir, templates, record.prompts);
      }

      try {
        PipelineResult result = normalize_pipeline(record.raw_responses.back());
        record.extracted_model = std::move(result.model);
        extraction = std::move(result.report);
      } catch (const Error& stage2_error) {
        // The verifier stage falls back to the stage-1 document when its own
        // output is unusable; both raw responses stay archived.
        if (strategy == PromptStrategy::ChainOfThoughtVerifier &&
            record.raw_responses.size() == 2) {
          try {
            PipelineResult result = normalize_pipeline(record.raw_responses.front());
            record.extracted_model = std::move(result.model);
            extraction = std::move(result.report);
            record.warnings.push_back(
                std::string("verifier output unusable (") + stage2_error.what() +
                "); fell back to the stage-1 document");
          } catch (const Error&) {
            throw stage2_error;
          }
        } else {
          throw;
        }
      }
      record.outcome = RunOutcome::Ok;
      write_file(record.record_dir + "/" + std::string(kModelFile),
                 serialize_model(*record.extracted_model));
    } catch (const Error& e) {
      record.error_message = e.what();
      record.outcome = e.code() == ErrorCode::ProviderError ? RunOutcome::ProviderError
                                                            : RunOutcome::ExtractionFailed;
    }

    write_record_file(record, provider_spec, extraction ? &*extraction : nullptr);

    if (config.analyze && record.outcome == RunOutcome::Ok) {
      analyze_record(record.record_dir, golds[cell.scenario].get(), config.lint_config);
    }
    records[cell_index] = std::move(record);
  };

  // Faults here are environment problems (unwritable output tree), not
  // experiment outcomes; they must not escape a worker thread.
  auto run_cell = [&](std::size_t cell_index) {
    try {
      run_cell_body(cell_index);
    } catch (const std::exception& e) {
      cell_faults[cell_index] = e.what();
    }
  };

  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(config.parallelism), cells.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= cells.size()) return;
          run_cell(i);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }
  for (const std::string& fault : cell_faults) {
    if (!fault.empty()) throw Error(ErrorCode::IoError, fault);
  }
  return records;
}

}  // namespace erkit

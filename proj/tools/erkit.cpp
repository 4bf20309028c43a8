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

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "erkit/diff.hpp"
#include "erkit/dot.hpp"
#include "erkit/errors.hpp"
#include "erkit/harness.hpp"
#include "erkit/interchange.hpp"
#include "erkit/io.hpp"
#include "erkit/lint.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// Exit statuses: 0 success, 1 findings at Error severity / failed gates,
// 2 input or parse failure, 3 provider failure.
constexpr int kExitOk = 0;
constexpr int kExitFindings = 1;
constexpr int kExitInput = 2;
constexpr int kExitProvider = 3;

struct GlobalFlags {
  bool json = false;
  bool quiet = false;
  std::string config_path;
};

int exit_for(const erkit::Error& e) {
  switch (e.code()) {
    case erkit::ErrorCode::ProviderError:
      return kExitProvider;
    default:
      return kExitInput;
  }
}

void report_error(const erkit::Error& e) {
  std::cerr << "error [" << erkit::to_string(e.code()) << "]";
  if (!e.stage().empty()) std::cerr << " at stage " << e.stage();
  std::cerr << ": " << e.what() << "\n";
}

erkit::ERModel load_model_file(const std::string& path) {
  return erkit::parse_model(erkit::read_file(path));
}

// Optional tool config file: lint thresholds/rules plus a renderer path.
struct ToolConfig {
  erkit::RuleConfig lint;
  std::string renderer_path;
};

ToolConfig load_tool_config(const std::string& path) {
  ToolConfig config;
  if (path.empty()) return config;
  config.lint = erkit::load_rule_config(path);
  auto doc = nlohmann::json::parse(erkit::read_file(path), nullptr, false);
  if (doc.is_object() && doc.contains("renderer_path") && doc["renderer_path"].is_string()) {
    config.renderer_path = doc["renderer_path"].get<std::string>();
  }
  return config;
}

int run_extract_one(const std::string& input, const std::string& output,
                    const GlobalFlags& flags) {
  const std::string raw = erkit::read_file(input);
  erkit::PipelineResult result = erkit::normalize_pipeline(raw);
  const std::string out_path =
      output.empty() ? (fs::path(input).stem().string() + ".json") : output;
  erkit::write_file(out_path, erkit::serialize_model(result.model));
  if (flags.json) {
    ordered_json doc;
    doc["source_kind"] = std::string(erkit::to_string(result.report.source_kind));
    doc["bytes_discarded"] = result.report.bytes_discarded;
    doc["warnings"] = result.report.warnings;
    doc["output"] = out_path;
    std::cout << doc.dump(2) << "\n";
  } else if (!flags.quiet) {
    std::cout << "source: " << erkit::to_string(result.report.source_kind) << ", discarded "
              << result.report.bytes_discarded << " bytes\n";
    for (const std::string& warning : result.report.warnings) {
      std::cout << "warning: " << warning << "\n";
    }
    std::cout << "wrote " << out_path << "\n";
  }
  return kExitOk;
}

int run_extract(const std::string& input, const std::string& output, const GlobalFlags& flags) {
  if (!fs::is_directory(input)) return run_extract_one(input, output, flags);

  // Batch mode: every regular file in the directory, outputs land in --output.
  if (output.empty()) {
    std::cerr << "error: batch extraction over a directory needs --output <dir>\n";
    return kExitInput;
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(input)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::size_t ok = 0, failed = 0;
  ordered_json summary = ordered_json::array();
  for (const fs::path& file : files) {
    try {
      erkit::PipelineResult result = erkit::normalize_pipeline(erkit::read_file(file.string()));
      const std::string out_path = (fs::path(output) / file.stem()).string() + ".json";
      erkit::write_file(out_path, erkit::serialize_model(result.model));
      ++ok;
      if (flags.json) {
        summary.push_back({{"input", file.string()},
                           {"output", out_path},
                           {"source_kind", std::string(erkit::to_string(result.report.source_kind))}});
      } else if (!flags.quiet) {
        std::cout << file.filename().string() << ": ok ("
                  << erkit::to_string(result.report.source_kind) << ")\n";
      }
    } catch (const erkit::Error& e) {
      ++failed;
      if (flags.json) {
        summary.push_back({{"input", file.string()},
                           {"error", std::string(erkit::to_string(e.code()))},
                           {"stage", e.stage()}});
      } else if (!flags.quiet) {
        std::cout << file.filename().string() << ": failed ["
                  << erkit::to_string(e.code()) << "]\n";
      }
    }
  }
  if (flags.json) {
    ordered_json doc;
    doc["ok"] = ok;
    doc["failed"] = failed;
    doc["files"] = std::move(summary);
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << ok << " ok / " << failed << " failed\n";
  }
  return failed == 0 ? kExitOk : kExitInput;
}

int run_lint(const std::string& model_path, const ToolConfig& config,
             const GlobalFlags& flags) {
  const erkit::ERModel model = load_model_file(model_path);
  std::vector<erkit::Finding> findings = erkit::run_lints(model, config.lint);
  if (config.lint.enabled_rules.count("transitive-redundancy")) {
    findings = erkit::merge_findings(std::move(findings),
                                     erkit::detect_transitive_redundancy(model));
  }
  const erkit::QualityLevel level = erkit::classify_level(model, findings);
  if (flags.json) {
    std::cout << erkit::findings_to_json(findings, level).dump(2) << "\n";
  } else {
    if (!flags.quiet) std::cout << erkit::format_findings(findings);
    std::cout << "level: " << erkit::to_string(level) << "\n";
    if (level == erkit::QualityLevel::L3 && !flags.quiet) {
      std::cout << "L4: manual review required\n";
    }
  }
  const bool any_error =
      std::any_of(findings.begin(), findings.end(),
                  [](const erkit::Finding& f) { return f.severity == erkit::Severity::Error; });
  return any_error ? kExitFindings : kExitOk;
}

int run_diff(const std::string& generated_path, const std::string& gold_path,
             double overlap_threshold, const GlobalFlags& flags) {
  const erkit::ERModel generated = load_model_file(generated_path);
  const erkit::ERModel gold = load_model_file(gold_path);
  const erkit::DiffReport report = erkit::diff_models(generated, gold, overlap_threshold);
  if (flags.json) {
    std::cout << erkit::diff_to_json(report).dump(2) << "\n";
  } else if (!flags.quiet) {
    std::cout << erkit::format_diff_table(report);
  } else {
    std::cout << "overall_f1: " << report.overall_f1 << "\n";
  }
  return kExitOk;
}

int run_render(const std::string& model_path, const std::string& output,
               const std::string& format, const std::string& renderer_flag,
               bool plain, bool no_title, const ToolConfig& config, const GlobalFlags& flags) {
  const erkit::ERModel model = load_model_file(model_path);
  erkit::RenderOptions options;
  options.title_visible = !no_title;
  options.record_style = plain ? erkit::RecordStyle::PlainNodes : erkit::RecordStyle::TableLabels;
  const std::string dot = erkit::emit_dot(model, options);

  if (format == "dot") {
    if (output.empty()) {
      std::cout << dot;
    } else {
      erkit::write_file(output, dot);
      if (!flags.quiet && !flags.json) std::cout << "wrote " << output << "\n";
    }
    return kExitOk;
  }

  // Raster/vector output needs an external renderer: flag > env > config > dot.
  std::string renderer = renderer_flag;
  if (renderer.empty()) {
    if (const char* env = std::getenv("ERKIT_RENDERER"); env && *env) renderer = env;
  }
  if (renderer.empty()) renderer = config.renderer_path;
  if (renderer.empty()) renderer = "dot";
  const erkit::ImageFormat image_format =
      format == "png" ? erkit::ImageFormat::png : erkit::ImageFormat::svg;
  const std::string bytes = erkit::render_external(dot, image_format, renderer);
  const std::string out_path =
      output.empty() ? (fs::path(model_path).stem().string() + "." + format) : output;
  erkit::write_file(out_path, bytes);
  if (!flags.quiet && !flags.json) std::cout << "wrote " << out_path << "\n";
  return kExitOk;
}

int run_run(const std::string& config_path, bool analyze, const GlobalFlags& flags) {
  erkit::ExperimentConfig config = erkit::load_experiment_config(config_path);
  if (analyze) config.analyze = true;
  const std::vector<erkit::ExperimentRecord> records = erkit::run_experiment(config);

  bool provider_failure = false;
  ordered_json summary = ordered_json::array();
  for (const erkit::ExperimentRecord& record : records) {
    provider_failure |= record.outcome == erkit::RunOutcome::ProviderError;
    if (flags.json) {
      summary.push_back({{"scenario", record.scenario_id},
                         {"strategy", std::string(erkit::strategy_name(record.strategy))},
                         {"provider", record.provider_id},
                         {"outcome", std::string(erkit::to_string(record.outcome))},
                         {"record_dir", record.record_dir}});
    } else if (!flags.quiet) {
      std::cout << record.scenario_id << "/" << erkit::strategy_name(record.strategy) << "/"
                << record.provider_id << ": " << erkit::to_string(record.outcome);
      if (!record.error_message.empty()) std::cout << " (" << record.error_message << ")";
      std::cout << "\n";
    }
  }
  if (flags.json) {
    std::cout << summary.dump(2) << "\n";
  } else if (!flags.quiet) {
    std::cout << records.size() << " record(s) under " << config.output_root << "\n";
  }
  return provider_failure ? kExitProvider : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ER model toolkit: extract, lint, diff, render and run experiments"};
  app.require_subcommand(1);

  GlobalFlags flags;
  app.add_flag("--json", flags.json, "machine-readable output");
  app.add_flag("--quiet", flags.quiet, "suppress informational output");
  app.add_option("--config", flags.config_path, "tool config file (lint thresholds, renderer)");

  std::string extract_input, extract_output;
  CLI::App* extract = app.add_subcommand("extract", "normalize raw LLM output into a model file");
  extract->add_option("input", extract_input, "raw text file or directory")->required();
  extract->add_option("-o,--output", extract_output, "output file (or directory in batch mode)");

  std::string lint_model, lint_config_path;
  CLI::App* lint = app.add_subcommand("lint", "run structural rules and classify L0-L3");
  lint->add_option("model", lint_model, "interchange model file")->required();
  lint->add_option("--config", lint_config_path, "rule config file");

  std::string diff_generated, diff_gold;
  double diff_overlap = erkit::kDefaultOverlapThreshold;
  CLI::App* diff = app.add_subcommand("diff", "compare a generated model against a gold model");
  diff->add_option("generated", diff_generated, "generated model file")->required();
  diff->add_option("gold", diff_gold, "gold-standard model file")->required();
  diff->add_option("--overlap-threshold", diff_overlap,
                   "phase-2 attribute-overlap threshold (default 0.5)")
      ->check(CLI::Range(0.0, 1.0));

  std::string render_model, render_output, render_format = "dot", render_renderer;
  bool render_plain = false, render_no_title = false;
  CLI::App* render = app.add_subcommand("render", "emit DOT (or PNG/SVG via Graphviz)");
  render->add_option("model", render_model, "interchange model file")->required();
  render->add_option("-o,--output", render_output, "output path");
  render->add_option("--format", render_format, "dot, png or svg")
      ->check(CLI::IsMember({"dot", "png", "svg"}));
  render->add_option("--renderer", render_renderer, "renderer executable (default: dot)");
  render->add_flag("--plain", render_plain, "plain name-only nodes");
  render->add_flag("--no-title", render_no_title, "omit the model title");

  std::string run_config;
  bool run_analyze = false;
  CLI::App* run = app.add_subcommand("run", "drive the scenario x strategy x provider matrix");
  run->add_option("config", run_config, "experiment config file")->required();
  run->add_flag("--analyze", run_analyze, "lint, diff and render each record");

  CLI11_PARSE(app, argc, argv);

  try {
    const ToolConfig tool_config = load_tool_config(flags.config_path);
    if (extract->parsed()) return run_extract(extract_input, extract_output, flags);
    if (lint->parsed()) {
      ToolConfig lint_cfg = tool_config;
      if (!lint_config_path.empty()) lint_cfg.lint = erkit::load_rule_config(lint_config_path);
      return run_lint(lint_model, lint_cfg, flags);
    }
    if (diff->parsed()) return run_diff(diff_generated, diff_gold, diff_overlap, flags);
    if (render->parsed()) {
      return run_render(render_model, render_output, render_format, render_renderer,
                        render_plain, render_no_title, tool_config, flags);
    }
    if (run->parsed()) return run_run(run_config, run_analyze, flags);
  } catch (const erkit::Error& e) {
    report_error(e);
    return exit_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}

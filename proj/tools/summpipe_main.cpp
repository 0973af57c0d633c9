// Copyright 2026 The summpipe authors
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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "summpipe/assembly.hpp"
#include "summpipe/corpus.hpp"
#include "summpipe/errors.hpp"
#include "summpipe/metrics.hpp"
#include "summpipe/report.hpp"
#include "summpipe/selection.hpp"
#include "summpipe/summarize.hpp"
#include "summpipe/textproc.hpp"

namespace {

using summpipe::AdapterError;
using summpipe::DataError;
using summpipe::UsageError;

struct CommonOptions {
  std::string dataset_path;
  bool query_based = false;
  bool dialogue = false;
  bool multi_doc = false;
  std::string registry_path;
  std::string metrics_csv = "rouge-1,rouge-2,rouge-l";
  std::string embeddings_path;
  std::string synonyms_path;
  bool stem = false;
  std::size_t budget = 3;
  std::size_t top_k = 5;
  int jobs = 1;
};

summpipe::DatasetFlags dataset_flags(const CommonOptions& opts) {
  summpipe::DatasetFlags flags;
  flags.is_query_based = opts.query_based;
  flags.is_dialogue_based = opts.dialogue;
  flags.is_multi_document = opts.multi_doc;
  return flags;
}

summpipe::Dataset load_dataset(const CommonOptions& opts) {
  if (opts.dataset_path.empty()) {
    throw UsageError("--dataset is required for this command");
  }
  return summpipe::load_jsonl(opts.dataset_path, dataset_flags(opts));
}

/// The registry path resolves from --registry, then SUMMPIPE_REGISTRY,
/// then none (native models only).
std::optional<summpipe::AdapterConfig> resolve_adapter_config(
    const CommonOptions& opts) {
  std::string path = opts.registry_path;
  if (path.empty()) {
    if (const char* env = std::getenv("SUMMPIPE_REGISTRY")) path = env;
  }
  if (path.empty()) return std::nullopt;
  return summpipe::load_adapter_config(path);
}

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    auto comma = csv.find(',', start);
    if (comma == std::string::npos) comma = csv.size();
    if (comma > start) out.push_back(csv.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

summpipe::MetricResources metric_resources(
    const CommonOptions& opts, std::optional<summpipe::EmbeddingTable>* embeddings,
    std::optional<summpipe::SynonymTable>* synonyms) {
  summpipe::MetricResources res;
  res.stem = opts.stem;
  if (!opts.embeddings_path.empty()) {
    *embeddings = summpipe::load_embeddings(opts.embeddings_path);
    res.embeddings = &**embeddings;
  }
  if (!opts.synonyms_path.empty()) {
    *synonyms = summpipe::load_synonyms(opts.synonyms_path);
    res.synonyms = &**synonyms;
  }
  return res;
}

/// Parses a '+'-joined pipeline id ("bm25+flatten+textrank") against the
/// registry. The last token names the base model; the rest name stages.
summpipe::PipelineSpec parse_pipeline_id(const std::string& id,
                                         const summpipe::ModelRegistry& registry) {
  std::vector<std::string> tokens;
  std::size_t start = 0;
  while (start <= id.size()) {
    auto plus = id.find('+', start);
    if (plus == std::string::npos) plus = id.size();
    if (plus > start) tokens.push_back(id.substr(start, plus - start));
    start = plus + 1;
  }
  if (tokens.empty()) throw UsageError("empty model id");

  summpipe::PipelineSpec spec;
  spec.top_k = registry.retriever_top_k;
  const std::string base_name = tokens.back();
  tokens.pop_back();
  bool base_found = false;
  for (const summpipe::ModelSpec& base : registry.base_models) {
    if (base.name() == base_name) {
      spec.base = base;
      base_found = true;
      break;
    }
  }
  if (!base_found) {
    std::string known;
    for (const summpipe::ModelSpec& base : registry.base_models) {
      known += " " + base.name();
    }
    throw UsageError("unknown base model '" + base_name + "'; available:" + known);
  }
  for (const std::string& token : tokens) {
    if (token == "tfidf") {
      spec.retriever = summpipe::RetrieverKind::tfidf;
    } else if (token == "bm25") {
      spec.retriever = summpipe::RetrieverKind::bm25;
    } else if (token == "flatten") {
      spec.dialogue_handler = summpipe::DialogueHandler::flatten;
    } else if (token == "combine-then-summarize") {
      spec.multidoc_strategy = summpipe::MultiDocStrategy::combine_then_summarize;
    } else if (token == "summarize-then-combine") {
      spec.multidoc_strategy = summpipe::MultiDocStrategy::summarize_then_combine;
    } else {
      throw UsageError("unknown pipeline stage '" + token +
                       "' (expected tfidf, bm25, flatten, "
                       "combine-then-summarize or summarize-then-combine)");
    }
  }
  return spec;
}

void ensure_out_dir(const std::string& out) {
  if (out.empty()) throw UsageError("--out is required for this command");
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) throw DataError("cannot create output directory '" + out + "': " +
                          ec.message());
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw DataError("cannot write " + path);
  file << text;
  if (!file) throw DataError("failed writing " + path);
}

int cmd_list(const std::string& what) {
  if (what == "models") {
    for (const std::string& name : summpipe::describable_models()) {
      std::cout << name << "\n";
    }
  } else if (what == "metrics") {
    for (const summpipe::MetricInfo& info : summpipe::metric_families()) {
      std::cout << info.name << "  ["
                << (info.higher_is_better ? "higher is better" : "lower is better")
                << "]\n";
    }
    std::cout << "evaluators:";
    for (const std::string& name : summpipe::metric_names()) {
      std::cout << " " << name;
    }
    std::cout << "\n";
  } else if (what == "datasets") {
    for (const summpipe::DatasetInfo& info : summpipe::dataset_registry()) {
      std::cout << info.name << "  (" << info.domain << ", " << info.size
                << " examples)\n";
    }
  } else {
    throw UsageError("list expects one of: models, metrics, datasets");
  }
  return 0;
}

int cmd_describe(const std::string& name) {
  std::cout << summpipe::describe(name) << "\n";
  return 0;
}

int cmd_assemble(const CommonOptions& opts) {
  auto config = resolve_adapter_config(opts);
  summpipe::AdapterManager adapters(config ? *config : summpipe::AdapterConfig{});
  summpipe::RegistryBuildReport report;
  const summpipe::ModelRegistry registry = summpipe::default_registry(
      config ? &adapters : nullptr, opts.budget, &report);
  summpipe::ModelRegistry sized = registry;
  sized.retriever_top_k = opts.top_k;
  const summpipe::CandidatePool pool = summpipe::assemble(dataset_flags(opts), sized);
  for (const std::string& line : report.skipped) {
    std::cerr << "warning: skipped adapter " << line << "\n";
  }
  std::cout << summpipe::explain(pool, sized);
  return 0;
}

int cmd_select(const CommonOptions& opts, std::uint64_t d, std::uint64_t k,
               std::uint64_t seed, int max_rounds, const std::string& out) {
  ensure_out_dir(out);
  const summpipe::Dataset dataset = load_dataset(opts);

  auto config = resolve_adapter_config(opts);
  summpipe::AdapterManager adapters(config ? *config : summpipe::AdapterConfig{});
  summpipe::AdapterManager* adapters_ptr = config ? &adapters : nullptr;
  summpipe::RegistryBuildReport build_report;
  summpipe::ModelRegistry registry =
      summpipe::default_registry(adapters_ptr, opts.budget, &build_report);
  registry.retriever_top_k = opts.top_k;
  for (const std::string& line : build_report.skipped) {
    std::cerr << "warning: skipped adapter " << line << "\n";
  }
  const summpipe::CandidatePool pool = summpipe::assemble(dataset.flags, registry);

  summpipe::SelectionConfig selection;
  selection.initial_resource = d;
  selection.resource_factor = k;
  selection.metrics = split_csv(opts.metrics_csv);
  selection.seed = seed;
  selection.max_rounds = max_rounds;
  selection.jobs = opts.jobs;

  std::optional<summpipe::EmbeddingTable> embeddings;
  std::optional<summpipe::SynonymTable> synonyms;
  const summpipe::MetricResources resources =
      metric_resources(opts, &embeddings, &synonyms);

  const summpipe::SelectionResult result =
      summpipe::select(pool, dataset, selection, resources, adapters_ptr);

  namespace fs = std::filesystem;
  write_text((fs::path(out) / "report.json").string(),
             summpipe::selection_result_to_json(result, selection));
  write_text((fs::path(out) / "summary.txt").string(),
             summpipe::summary_table(result));

  for (const std::string& metric : selection.metrics) {
    const summpipe::ChartSpec scatter = summpipe::build_scatter(result, metric);
    summpipe::render_svg_file(
        scatter, (fs::path(out) / ("scatter-" + metric + ".svg")).string());
    write_text((fs::path(out) / ("scatter-" + metric + ".json")).string(),
               summpipe::chart_json(scatter));
  }
  const summpipe::RadarOutcome radar = summpipe::build_radar(result);
  if (radar.chart) {
    summpipe::render_svg_file(*radar.chart, (fs::path(out) / "radar.svg").string());
    write_text((fs::path(out) / "radar.json").string(),
               summpipe::chart_json(*radar.chart));
  } else {
    write_text((fs::path(out) / "radar.txt").string(), radar.table_text);
  }

  // SummVis export: survivors re-run on the final round's instances.
  const summpipe::SelectionRound& last = result.rounds.back();
  std::vector<summpipe::SummInstance> instances;
  for (std::size_t index : last.instance_indices) {
    instances.push_back(dataset.instances[index]);
  }
  std::map<std::string, std::vector<std::string>> outputs;
  for (const std::string& id : result.survivors) {
    const summpipe::PipelineSpec spec = parse_pipeline_id(id, registry);
    std::vector<std::string> summaries;
    for (const summpipe::SummInstance& instance : instances) {
      summaries.push_back(
          summpipe::run_pipeline(spec, instance, adapters_ptr, /*threads=*/1));
    }
    outputs[id] = std::move(summaries);
  }
  summpipe::export_summvis(instances, outputs,
                           (fs::path(out) / "summvis.jsonl").string());

  std::cout << summpipe::summary_table(result);
  std::cout << "\nwrote report.json, summary.txt, charts and summvis.jsonl to "
            << out << "\n";
  return 0;
}

int cmd_evaluate(const CommonOptions& opts, const std::string& models_csv,
                 const std::string& out) {
  const summpipe::Dataset dataset = load_dataset(opts);
  auto config = resolve_adapter_config(opts);
  summpipe::AdapterManager adapters(config ? *config : summpipe::AdapterConfig{});
  summpipe::AdapterManager* adapters_ptr = config ? &adapters : nullptr;
  summpipe::ModelRegistry registry =
      summpipe::default_registry(adapters_ptr, opts.budget, nullptr);
  registry.retriever_top_k = opts.top_k;

  summpipe::CandidatePool pool;
  if (models_csv.empty()) {
    pool = summpipe::assemble(dataset.flags, registry);
  } else {
    for (const std::string& id : split_csv(models_csv)) {
      pool.candidates.push_back(parse_pipeline_id(id, registry));
    }
  }

  summpipe::SelectionConfig selection;
  selection.metrics = split_csv(opts.metrics_csv);
  selection.jobs = opts.jobs;
  // A single full-dataset round scores every candidate without
  // elimination semantics getting involved.
  selection.initial_resource = dataset.size();
  selection.max_rounds = 1;

  std::optional<summpipe::EmbeddingTable> embeddings;
  std::optional<summpipe::SynonymTable> synonyms;
  const summpipe::MetricResources resources =
      metric_resources(opts, &embeddings, &synonyms);

  const summpipe::CellEvalFn evaluate =
      summpipe::make_pipeline_evaluator(pool, selection, resources, adapters_ptr);

  const std::vector<std::string> ids = pool.ids();
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  std::size_t name_width = 9;
  for (const std::string& id : ids) name_width = std::max(name_width, id.size());
  std::cout << std::string(name_width + 2, ' ');
  for (const std::string& metric : selection.metrics) {
    std::cout << metric << "  ";
  }
  std::cout << "\n";
  bool adapter_fault = false;
  std::vector<std::string> failures;
  for (std::size_t c = 0; c < pool.candidates.size(); ++c) {
    std::vector<std::vector<double>> per_metric(selection.metrics.size());
    std::string failure;
    for (std::size_t i = 0; i < dataset.instances.size() && failure.empty(); ++i) {
      const summpipe::CellResult cell = evaluate(c, dataset.instances[i]);
      if (!cell.ok) {
        failure = cell.error;
        adapter_fault = adapter_fault || cell.adapter_fault;
        break;
      }
      for (std::size_t m = 0; m < selection.metrics.size(); ++m) {
        per_metric[m].push_back(cell.metric_scores[m]);
      }
    }
    std::cout << ids[c] << std::string(name_width + 2 - ids[c].size(), ' ');
    if (!failure.empty()) {
      std::cout << "FAILED: " << failure << "\n";
      failures.push_back(ids[c] + ": " + failure);
      continue;
    }
    nlohmann::ordered_json row;
    row["model"] = ids[c];
    for (std::size_t m = 0; m < selection.metrics.size(); ++m) {
      double sum = 0.0;
      for (double v : per_metric[m]) sum += v;
      const double mean =
          per_metric[m].empty() ? 0.0 : sum / static_cast<double>(per_metric[m].size());
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.4f", mean);
      std::cout << buf << "  ";
      row[selection.metrics[m]] = {{"mean", mean},
                                   {"per_instance", per_metric[m]}};
    }
    std::cout << "\n";
    rows.push_back(std::move(row));
  }
  if (!out.empty()) {
    ensure_out_dir(out);
    write_text((std::filesystem::path(out) / "evaluate.json").string(),
               rows.dump(2) + "\n");
  }
  if (!failures.empty() && rows.empty()) {
    if (adapter_fault) throw AdapterError("all models failed: " + failures.front());
    throw DataError("all models failed: " + failures.front());
  }
  return 0;
}

int cmd_summarize(const CommonOptions& opts, const std::string& model,
                  const std::string& out) {
  const summpipe::Dataset dataset = load_dataset(opts);
  auto config = resolve_adapter_config(opts);
  summpipe::AdapterManager adapters(config ? *config : summpipe::AdapterConfig{});
  summpipe::AdapterManager* adapters_ptr = config ? &adapters : nullptr;
  summpipe::ModelRegistry registry =
      summpipe::default_registry(adapters_ptr, opts.budget, nullptr);
  registry.retriever_top_k = opts.top_k;
  const summpipe::PipelineSpec spec = parse_pipeline_id(model, registry);

  std::ostringstream lines;
  for (const summpipe::SummInstance& instance : dataset.instances) {
    nlohmann::ordered_json line;
    line["model"] = model;
    line["summary"] =
        summpipe::run_pipeline(spec, instance, adapters_ptr, opts.jobs);
    lines << line.dump() << "\n";
  }
  if (out.empty()) {
    std::cout << lines.str();
  } else {
    write_text(out, lines.str());
  }
  return 0;
}

int cmd_export_summvis(const CommonOptions& opts, const std::string& models_csv,
                       const std::string& out) {
  if (out.empty()) throw UsageError("--out is required for this command");
  const summpipe::Dataset dataset = load_dataset(opts);
  auto config = resolve_adapter_config(opts);
  summpipe::AdapterManager adapters(config ? *config : summpipe::AdapterConfig{});
  summpipe::AdapterManager* adapters_ptr = config ? &adapters : nullptr;
  summpipe::ModelRegistry registry =
      summpipe::default_registry(adapters_ptr, opts.budget, nullptr);
  registry.retriever_top_k = opts.top_k;

  std::vector<std::string> ids = split_csv(models_csv);
  if (ids.empty()) throw UsageError("--models is required (comma-separated ids)");

  std::map<std::string, std::vector<std::string>> outputs;
  for (const std::string& id : ids) {
    const summpipe::PipelineSpec spec = parse_pipeline_id(id, registry);
    std::vector<std::string> summaries;
    for (const summpipe::SummInstance& instance : dataset.instances) {
      summaries.push_back(
          summpipe::run_pipeline(spec, instance, adapters_ptr, opts.jobs));
    }
    outputs[id] = std::move(summaries);
  }
  summpipe::export_summvis(dataset.instances, outputs, out);
  std::cout << "wrote " << dataset.instances.size() << " lines to " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"summpipe: assemble, select and evaluate summarization pipelines"};
  app.require_subcommand(1);

  CommonOptions common;
  std::string list_what;
  std::string describe_name;
  std::uint64_t d = 8, k = 2, seed = 0;
  int max_rounds = 10;
  std::string out_dir;
  std::string out_path;
  std::string models_csv;
  std::string model_id = "textrank";

  auto add_dataset_flags = [&common](CLI::App* cmd) {
    cmd->add_option("--dataset", common.dataset_path, "JSONL dataset path");
    cmd->add_flag("--query-based", common.query_based,
                  "instances carry a query and pipelines get a retriever");
    cmd->add_flag("--dialogue", common.dialogue,
                  "sources are dialogue turn lists");
    cmd->add_flag("--multi-doc", common.multi_doc,
                  "sources are document lists");
  };
  auto add_model_flags = [&common](CLI::App* cmd) {
    cmd->add_option("--registry", common.registry_path,
                    "adapter registry config (default: $SUMMPIPE_REGISTRY)");
    cmd->add_option("--budget", common.budget, "summary sentence budget")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--top-k", common.top_k, "retriever unit count")
        ->check(CLI::PositiveNumber);
  };
  auto add_metric_flags = [&common](CLI::App* cmd) {
    cmd->add_option("--metrics", common.metrics_csv,
                    "comma-separated metric names");
    cmd->add_option("--embeddings", common.embeddings_path,
                    "word embedding file for rouge-we/bertscore");
    cmd->add_option("--synonyms", common.synonyms_path,
                    "synonym table for meteor");
    cmd->add_flag("--stem", common.stem, "stem tokens inside rouge metrics");
  };

  CLI::App* list_cmd = app.add_subcommand("list", "list registered names");
  list_cmd->add_option("what", list_what, "models | metrics | datasets")
      ->required();

  CLI::App* describe_cmd =
      app.add_subcommand("describe", "describe a model, metric or dataset");
  describe_cmd->add_option("name", describe_name, "registered name")->required();

  CLI::App* assemble_cmd = app.add_subcommand(
      "assemble", "show the candidate pool for a set of dataset attributes");
  add_dataset_flags(assemble_cmd);
  add_model_flags(assemble_cmd);

  CLI::App* select_cmd = app.add_subcommand(
      "select", "iterative evaluation with Pareto elimination");
  add_dataset_flags(select_cmd);
  add_model_flags(select_cmd);
  add_metric_flags(select_cmd);
  select_cmd->add_option("--d", d, "initial per-round sample size")
      ->check(CLI::PositiveNumber);
  select_cmd->add_option("--k", k, "per-round sample growth factor")
      ->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1024}));
  select_cmd->add_option("--seed", seed, "sampling seed");
  select_cmd->add_option("--max-rounds", max_rounds, "round cap")
      ->check(CLI::PositiveNumber);
  select_cmd->add_option("--jobs", common.jobs, "parallel evaluation workers")
      ->check(CLI::PositiveNumber);
  select_cmd->add_option("--out", out_dir, "output directory")->required();

  CLI::App* evaluate_cmd =
      app.add_subcommand("evaluate", "score models over a whole dataset");
  add_dataset_flags(evaluate_cmd);
  add_model_flags(evaluate_cmd);
  add_metric_flags(evaluate_cmd);
  evaluate_cmd->add_option("--models", models_csv,
                           "comma-separated pipeline ids (default: assembled pool)");
  evaluate_cmd->add_option("--jobs", common.jobs, "parallel evaluation workers")
      ->check(CLI::PositiveNumber);
  evaluate_cmd->add_option("--out", out_dir, "directory for evaluate.json");

  CLI::App* summarize_cmd =
      app.add_subcommand("summarize", "print one summary per instance as JSONL");
  add_dataset_flags(summarize_cmd);
  add_model_flags(summarize_cmd);
  summarize_cmd->add_option("--model", model_id,
                            "pipeline id, e.g. tfidf+flatten+textrank");
  summarize_cmd->add_option("--jobs", common.jobs, "kernel threads")
      ->check(CLI::PositiveNumber);
  summarize_cmd->add_option("--out", out_path, "output file (default: stdout)");

  CLI::App* export_cmd = app.add_subcommand(
      "export-summvis", "write document/reference/predictions JSONL");
  add_dataset_flags(export_cmd);
  add_model_flags(export_cmd);
  export_cmd->add_option("--models", models_csv, "comma-separated pipeline ids")
      ->required();
  export_cmd->add_option("--jobs", common.jobs, "kernel threads")
      ->check(CLI::PositiveNumber);
  export_cmd->add_option("--out", out_path, "output JSONL path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error[1]: " << e.what() << "\n";
    return 1;
  }

  try {
    if (list_cmd->parsed()) return cmd_list(list_what);
    if (describe_cmd->parsed()) return cmd_describe(describe_name);
    if (assemble_cmd->parsed()) return cmd_assemble(common);
    if (select_cmd->parsed()) {
      return cmd_select(common, d, k, seed, max_rounds, out_dir);
    }
    if (evaluate_cmd->parsed()) return cmd_evaluate(common, models_csv, out_dir);
    if (summarize_cmd->parsed()) return cmd_summarize(common, model_id, out_path);
    if (export_cmd->parsed()) {
      return cmd_export_summvis(common, models_csv, out_path);
    }
    throw UsageError("no command given");
  } catch (const UsageError& e) {
    std::cerr << "error[1]: " << e.what() << "\n";
    return 1;
  } catch (const AdapterError& e) {
    std::cerr << "error[3]: " << e.what() << "\n";
    return 3;
  } catch (const DataError& e) {
    std::cerr << "error[2]: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error[2]: " << e.what() << "\n";
    return 2;
  }
}

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

#include "summpipe/selection.hpp"

#include <algorithm>
#include <limits>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "summpipe/errors.hpp"
#include "summpipe/kernels.hpp"

namespace summpipe {

namespace {

using ordered_json = nlohmann::ordered_json;

bool better(double a, double b, bool higher_is_better) {
  return higher_is_better ? a > b : a < b;
}

double mean_of(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return values.empty() ? 0.0 : sum / static_cast<double>(values.size());
}

}  // namespace

std::vector<std::string> CandidatePool::ids() const {
  std::vector<std::string> out;
  out.reserve(candidates.size());
  for (const PipelineSpec& spec : candidates) out.push_back(spec.id());
  return out;
}

void pareto_filter(const ScoreMatrix& scores,
                   const std::vector<std::string>& pool_ids,
                   std::vector<std::string>* survivors,
                   std::vector<Elimination>* eliminated) {
  survivors->clear();
  eliminated->clear();

  std::vector<bool> directions;
  for (const std::string& metric : scores.metric_names) {
    directions.push_back(metric_info(metric).higher_is_better);
  }
  auto mean = [&scores](const std::string& id, const std::string& metric) {
    auto row = scores.means.find(id);
    if (row == scores.means.end()) {
      throw UsageError("pareto_filter: no scores for candidate '" + id + "'");
    }
    auto cell = row->second.find(metric);
    if (cell == row->second.end()) {
      throw UsageError("pareto_filter: candidate '" + id +
                       "' has no score for metric '" + metric + "'");
    }
    return cell->second;
  };

  // Dominance is decided against the full pre-pass snapshot; a dominator
  // may itself be eliminated in the same pass.
  for (const std::string& id : pool_ids) {
    std::string dominated_by;
    for (const std::string& other : pool_ids) {
      if (other == id) continue;
      bool dominates = true;
      for (std::size_t m = 0; m < scores.metric_names.size(); ++m) {
        const std::string& metric = scores.metric_names[m];
        if (!better(mean(other, metric), mean(id, metric), directions[m])) {
          dominates = false;
          break;
        }
      }
      if (dominates) {
        dominated_by = other;
        break;
      }
    }
    if (dominated_by.empty()) {
      survivors->push_back(id);
    } else {
      eliminated->push_back({id, dominated_by});
    }
  }
}

SelectionResult run_selection(const std::vector<std::string>& pool_ids,
                              const Dataset& dataset,
                              const SelectionConfig& config,
                              const CellEvalFn& evaluate) {
  if (pool_ids.empty()) throw UsageError("selection: empty candidate pool");
  {
    std::unordered_set<std::string> seen;
    for (const std::string& id : pool_ids) {
      if (!seen.insert(id).second) {
        throw UsageError("selection: duplicate candidate id '" + id + "'");
      }
    }
  }
  if (config.initial_resource < 1) throw UsageError("selection: d must be >= 1");
  if (config.resource_factor < 2) throw UsageError("selection: k must be > 1");
  if (config.metrics.empty()) throw UsageError("selection: at least one metric");
  if (config.max_rounds < 1) throw UsageError("selection: max_rounds must be >= 1");
  for (const std::string& metric : config.metrics) {
    metric_info(metric);  // throws on unknown names
  }
  for (std::size_t i = 0; i < dataset.instances.size(); ++i) {
    const auto& ref = dataset.instances[i].reference;
    if (!ref || ref->empty()) {
      throw DataError("selection: instance " + std::to_string(i + 1) +
                      " has no reference summary");
    }
  }

  SelectionResult result;
  result.pool_ids = pool_ids;

  // Active candidates as indices into pool_ids, in pool order.
  std::vector<std::size_t> active(pool_ids.size());
  for (std::size_t i = 0; i < active.size(); ++i) active[i] = i;

  std::uint64_t resource = config.initial_resource;
  const std::size_t dataset_size = dataset.size();

  for (int round = 1; round <= config.max_rounds; ++round) {
    SelectionRound record;
    record.round = round;
    record.sample_seed = config.seed + static_cast<std::uint64_t>(round - 1);
    const std::size_t want =
        resource < dataset_size ? static_cast<std::size_t>(resource) : dataset_size;
    const InstanceSet round_sample = sample(dataset, want, record.sample_seed);
    record.sample_size = round_sample.indices.size();
    record.instance_indices = round_sample.indices;

    // Round barrier: every (candidate, instance) cell lands before any
    // aggregation or filtering below.
    const std::size_t rows = active.size();
    const std::size_t cols = round_sample.indices.size();
    std::vector<CellResult> cells(rows * cols);
    kernels::map_grid(
        rows, cols,
        [&](std::size_t r, std::size_t c) {
          cells[r * cols + c] = evaluate(
              active[r], dataset.instances[round_sample.indices[c]]);
        },
        config.jobs);

    record.scores.metric_names = config.metrics;
    std::vector<std::size_t> healthy;
    bool adapter_fault = false;
    for (std::size_t r = 0; r < rows; ++r) {
      const std::string& id = pool_ids[active[r]];
      std::string failure;
      for (std::size_t c = 0; c < cols && failure.empty(); ++c) {
        const CellResult& cell = cells[r * cols + c];
        if (!cell.ok) {
          failure = cell.error.empty() ? "evaluation failed" : cell.error;
          adapter_fault = adapter_fault || cell.adapter_fault;
        } else if (cell.metric_scores.size() != config.metrics.size()) {
          failure = "evaluator returned " +
                    std::to_string(cell.metric_scores.size()) + " scores for " +
                    std::to_string(config.metrics.size()) + " metrics";
        }
      }
      if (!failure.empty()) {
        record.failed.push_back({id, failure});
        continue;
      }
      healthy.push_back(active[r]);
      auto& per_metric = record.scores.per_instance[id];
      for (std::size_t m = 0; m < config.metrics.size(); ++m) {
        auto& values = per_metric[config.metrics[m]];
        values.reserve(cols);
        for (std::size_t c = 0; c < cols; ++c) {
          values.push_back(cells[r * cols + c].metric_scores[m]);
        }
        record.scores.means[id][config.metrics[m]] = mean_of(values);
      }
    }

    if (healthy.empty()) {
      result.rounds.push_back(std::move(record));
      const std::string msg = "selection: every candidate failed in round " +
                              std::to_string(round);
      if (adapter_fault) throw AdapterError(msg);
      throw DataError(msg);
    }

    std::vector<std::string> healthy_ids;
    for (std::size_t index : healthy) healthy_ids.push_back(pool_ids[index]);
    std::vector<std::string> survivor_ids;
    pareto_filter(record.scores, healthy_ids, &survivor_ids, &record.eliminated);

    std::vector<std::size_t> next_active;
    for (std::size_t index : active) {
      if (std::find(survivor_ids.begin(), survivor_ids.end(),
                    pool_ids[index]) != survivor_ids.end()) {
        next_active.push_back(index);
      }
    }
    active = std::move(next_active);

    const bool no_elimination = record.eliminated.empty() && record.failed.empty();
    const bool full_dataset = record.sample_size == dataset_size;
    result.rounds.push_back(std::move(record));
    if (no_elimination || full_dataset) break;

    if (resource > std::numeric_limits<std::uint64_t>::max() / config.resource_factor) {
      resource = std::numeric_limits<std::uint64_t>::max();
    } else {
      resource *= config.resource_factor;
    }
  }

  for (std::size_t index : active) result.survivors.push_back(pool_ids[index]);
  return result;
}

CellEvalFn make_pipeline_evaluator(const CandidatePool& pool,
                                   const SelectionConfig& config,
                                   const MetricResources& resources,
                                   AdapterManager* adapters) {
  auto metric_fns = std::make_shared<std::vector<MetricFn>>();
  for (const std::string& name : config.metrics) {
    metric_fns->push_back(resolve_metric(name, resources));
  }
  // The grid is already parallel over cells, so each pipeline runs its
  // kernels single-threaded.
  const std::vector<PipelineSpec> candidates = pool.candidates;
  return [candidates, metric_fns, adapters](std::size_t candidate_index,
                                            const SummInstance& instance) {
    CellResult cell;
    try {
      const std::string summary = run_pipeline(candidates[candidate_index],
                                               instance, adapters, /*threads=*/1);
      for (const MetricFn& fn : *metric_fns) {
        cell.metric_scores.push_back(fn(summary, *instance.reference).value);
      }
    } catch (const AdapterError& e) {
      cell.ok = false;
      cell.adapter_fault = true;
      cell.error = e.what();
    } catch (const std::exception& e) {
      cell.ok = false;
      cell.error = e.what();
    }
    return cell;
  };
}

SelectionResult select(const CandidatePool& pool, const Dataset& dataset,
                       const SelectionConfig& config,
                       const MetricResources& resources,
                       AdapterManager* adapters) {
  return run_selection(
      CandidatePool(pool).ids(), dataset, config,
      make_pipeline_evaluator(pool, config, resources, adapters));
}

std::string selection_result_to_json(const SelectionResult& result,
                                     const SelectionConfig& config, int indent) {
  ordered_json doc;
  doc["config"] = {{"initial_resource", config.initial_resource},
                   {"resource_factor", config.resource_factor},
                   {"metrics", config.metrics},
                   {"seed", config.seed},
                   {"max_rounds", config.max_rounds}};
  doc["pool"] = result.pool_ids;
  doc["survivors"] = result.survivors;
  doc["rounds"] = ordered_json::array();
  for (const SelectionRound& round : result.rounds) {
    ordered_json r;
    r["round"] = round.round;
    r["sample_size"] = round.sample_size;
    r["sample_seed"] = round.sample_seed;
    r["instances"] = round.instance_indices;
    ordered_json scores = ordered_json::object();
    // Candidates in pool order, not map order, for readable stable output.
    for (const std::string& id : result.pool_ids) {
      auto row = round.scores.per_instance.find(id);
      if (row == round.scores.per_instance.end()) continue;
      ordered_json per_metric = ordered_json::object();
      for (const std::string& metric : round.scores.metric_names) {
        per_metric[metric] = {
            {"mean", round.scores.means.at(id).at(metric)},
            {"per_instance", row->second.at(metric)}};
      }
      scores[id] = std::move(per_metric);
    }
    r["metrics"] = round.scores.metric_names;
    r["scores"] = std::move(scores);
    r["eliminated"] = ordered_json::array();
    for (const Elimination& e : round.eliminated) {
      r["eliminated"].push_back({{"id", e.id}, {"dominated_by", e.dominated_by}});
    }
    r["failed"] = ordered_json::array();
    for (const CandidateFailure& f : round.failed) {
      r["failed"].push_back({{"id", f.id}, {"reason", f.reason}});
    }
    doc["rounds"].push_back(std::move(r));
  }
  return doc.dump(indent) + "\n";
}

SelectionResult selection_result_from_json(const std::string& text) {
  ordered_json doc = ordered_json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw DataError("selection report: malformed JSON");
  }
  try {
    SelectionResult result;
    result.pool_ids = doc.at("pool").get<std::vector<std::string>>();
    result.survivors = doc.at("survivors").get<std::vector<std::string>>();
    for (const auto& r : doc.at("rounds")) {
      SelectionRound round;
      round.round = r.at("round").get<int>();
      round.sample_size = r.at("sample_size").get<std::size_t>();
      round.sample_seed = r.at("sample_seed").get<std::uint64_t>();
      round.instance_indices =
          r.at("instances").get<std::vector<std::size_t>>();
      round.scores.metric_names =
          r.at("metrics").get<std::vector<std::string>>();
      for (const auto& [id, per_metric] : r.at("scores").items()) {
        for (const auto& [metric, cell] : per_metric.items()) {
          round.scores.means[id][metric] = cell.at("mean").get<double>();
          round.scores.per_instance[id][metric] =
              cell.at("per_instance").get<std::vector<double>>();
        }
      }
      for (const auto& e : r.at("eliminated")) {
        round.eliminated.push_back({e.at("id").get<std::string>(),
                                    e.at("dominated_by").get<std::string>()});
      }
      for (const auto& f : r.at("failed")) {
        round.failed.push_back({f.at("id").get<std::string>(),
                                f.at("reason").get<std::string>()});
      }
      result.rounds.push_back(std::move(round));
    }
    return result;
  } catch (const ordered_json::exception& e) {
    throw DataError(std::string("selection report: ") + e.what());
  }
}

}  // namespace summpipe

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

#ifndef SUMMPIPE_SELECTION_HPP
#define SUMMPIPE_SELECTION_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "summpipe/corpus.hpp"
#include "summpipe/metrics.hpp"
#include "summpipe/summarize.hpp"

namespace summpipe {

/// Ordered candidate pool; ids are the pipeline ids and must be unique.
struct CandidatePool {
  std::vector<PipelineSpec> candidates;

  std::vector<std::string> ids() const;
};

struct SelectionConfig {
  std::uint64_t initial_resource = 8;   // d
  std::uint64_t resource_factor = 2;    // k, > 1
  std::vector<std::string> metrics;
  std::uint64_t seed = 0;
  int max_rounds = 10;
  int jobs = 1;
};

/// Scores for one evaluation round. Means are the arithmetic mean of the
/// per-instance scores.
struct ScoreMatrix {
  std::vector<std::string> metric_names;
  // candidate id -> metric name -> per-instance scores (sample order)
  std::map<std::string, std::map<std::string, std::vector<double>>> per_instance;
  std::map<std::string, std::map<std::string, double>> means;
};

struct Elimination {
  std::string id;
  std::string dominated_by;
};

struct CandidateFailure {
  std::string id;
  std::string reason;
};

struct SelectionRound {
  int round = 0;
  std::size_t sample_size = 0;
  std::uint64_t sample_seed = 0;
  std::vector<std::size_t> instance_indices;
  ScoreMatrix scores;
  std::vector<Elimination> eliminated;
  std::vector<CandidateFailure> failed;
};

struct SelectionResult {
  std::vector<std::string> pool_ids;
  std::vector<std::string> survivors;
  std::vector<SelectionRound> rounds;
};

/// Removes every candidate strictly beaten on all metrics by some other
/// candidate in the same snapshot; ties never eliminate. The direction of
/// "better" comes from each metric's registry flag. Returns survivors in
/// pool order plus one elimination record per removed candidate.
void pareto_filter(const ScoreMatrix& scores,
                   const std::vector<std::string>& pool_ids,
                   std::vector<std::string>* survivors,
                   std::vector<Elimination>* eliminated);

/// Per-cell evaluation hook: scores one candidate on one instance, one
/// score per configured metric. ok=false marks the whole candidate failed.
struct CellResult {
  bool ok = true;
  std::string error;
  bool adapter_fault = false;
  std::vector<double> metric_scores;
};
using CellEvalFn = std::function<CellResult(std::size_t candidate_index,
                                            const SummInstance& instance)>;

/// Iterative evaluation with Pareto elimination: each round samples
/// min(d * k^r, |dataset|) instances with seed + r, evaluates all
/// surviving candidates in parallel (round barrier before filtering), and
/// stops when a round eliminates nothing, after a full-dataset round, or
/// at max_rounds. Failed candidates leave the pool with a recorded reason
/// instead of an elimination.
SelectionResult run_selection(const std::vector<std::string>& pool_ids,
                              const Dataset& dataset,
                              const SelectionConfig& config,
                              const CellEvalFn& evaluate);

/// The pipeline-backed entry point: candidates are run with run_pipeline
/// and scored with the resolved metrics.
SelectionResult select(const CandidatePool& pool, const Dataset& dataset,
                       const SelectionConfig& config,
                       const MetricResources& resources,
                       AdapterManager* adapters = nullptr);

/// Builds a CellEvalFn from the pipeline executor + metric set (exposed so
/// tests can wrap or replace the summary stage).
CellEvalFn make_pipeline_evaluator(const CandidatePool& pool,
                                   const SelectionConfig& config,
                                   const MetricResources& resources,
                                   AdapterManager* adapters);

/// JSON report for the result (the schema the report module and the
/// `select` command consume). Deterministic byte output for equal inputs.
std::string selection_result_to_json(const SelectionResult& result,
                                     const SelectionConfig& config,
                                     int indent = 2);
SelectionResult selection_result_from_json(const std::string& text);

}  // namespace summpipe

#endif  // SUMMPIPE_SELECTION_HPP

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

#ifndef SUMMPIPE_METRICS_HPP
#define SUMMPIPE_METRICS_HPP

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace summpipe {

/// Result of one metric computation. `value` is the headline score in
/// [0, 1]; precision/recall/f1 are populated where the metric defines them.
struct MetricScore {
  std::string metric;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
  double value = 0.0;
};

struct MetricInfo {
  std::string name;
  bool higher_is_better = true;
  std::string description;
};

/// word -> dense vector, all vectors the same dimension.
struct EmbeddingTable {
  std::unordered_map<std::string, std::vector<double>> vectors;
  std::size_t dim = 0;

  const std::vector<double>* find(const std::string& word) const;
};

using SynonymTable = std::unordered_map<std::string, std::unordered_set<std::string>>;

/// Text format: one entry per line, `word v1 v2 ... vd`.
EmbeddingTable load_embeddings(const std::string& path);

/// Text format: `word<TAB>syn1,syn2,...` per line.
SynonymTable load_synonyms(const std::string& path);

// ---- the five metric families ----

/// Clipped n-gram overlap. recall = overlap/|ref n-grams|, precision =
/// overlap/|cand n-grams|, f1 = 2pr/(p+r); headline value = f1.
MetricScore rouge_n(std::string_view candidate, std::string_view reference,
                    std::size_t n, bool stem = false);

/// Longest-common-subsequence variant: r = LCS/|ref|, p = LCS/|cand|.
MetricScore rouge_l(std::string_view candidate, std::string_view reference,
                    bool stem = false);

/// Geometric mean of clipped modified precisions for n = 1..max_n with
/// epsilon smoothing of zero counts, times the brevity penalty
/// min(1, exp(1 - r_len/c_len)). An empty candidate scores 0.
MetricScore bleu(std::string_view candidate,
                 const std::vector<std::string>& references,
                 std::size_t max_n = 4);

/// Word-alignment score: greedy exact -> stem -> synonym matching,
/// F_mean = 10PR/(R+9P), chunk penalty 0.5*(chunks/matches)^3.
MetricScore meteor_lite(std::string_view candidate, std::string_view reference,
                        const SynonymTable* synonyms = nullptr);

/// ROUGE-1 with soft word matching: identical tokens match with weight 1,
/// other pairs with embedding cosine when it reaches tau. The matching is
/// greedy by descending weight, which is deterministic and near-optimal on
/// summary-length inputs.
MetricScore rouge_we(std::string_view candidate, std::string_view reference,
                     const EmbeddingTable& table, double tau = 0.8);

/// Greedy contextual-embedding match over externally provided token
/// vectors: R is the mean over reference tokens of the best cosine against
/// the candidate tokens, P symmetric, F1 harmonic. Optional idf weights
/// turn the means into weighted means.
MetricScore bertscore(const std::vector<std::vector<double>>& candidate_vectors,
                      const std::vector<std::vector<double>>& reference_vectors,
                      const std::vector<double>* candidate_idf = nullptr,
                      const std::vector<double>* reference_idf = nullptr);

// ---- registry ----

/// The five metric families with direction flags and descriptions.
const std::vector<MetricInfo>& metric_families();

/// Concrete evaluator names accepted by --metrics: rouge-1, rouge-2,
/// rouge-l, bleu, meteor, rouge-we, bertscore.
const std::vector<std::string>& metric_names();

/// Direction flag for a family or concrete metric name.
const MetricInfo& metric_info(const std::string& name);

/// Resources some metrics need; unset tables make those metrics
/// unavailable.
struct MetricResources {
  const EmbeddingTable* embeddings = nullptr;
  const SynonymTable* synonyms = nullptr;
  bool stem = false;
  double rouge_we_tau = 0.8;
};

using MetricFn = std::function<MetricScore(std::string_view candidate,
                                           std::string_view reference)>;

/// Resolves a metric name to an evaluator over (candidate, reference)
/// text. Throws UsageError for unknown names and DataError when a needed
/// resource is missing.
MetricFn resolve_metric(const std::string& name, const MetricResources& res);

}  // namespace summpipe

#endif  // SUMMPIPE_METRICS_HPP

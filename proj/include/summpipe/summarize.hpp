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

#ifndef SUMMPIPE_SUMMARIZE_HPP
#define SUMMPIPE_SUMMARIZE_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "summpipe/adapter.hpp"
#include "summpipe/corpus.hpp"

namespace summpipe {

enum class ModelKind { textrank, lexrank, external };

/// A base single-document summarizer. budget counts sentences for the
/// extractive models; external adapters receive their caps through their
/// own command lines.
struct ModelSpec {
  ModelKind kind = ModelKind::textrank;
  std::string external_name;     // set iff kind == external
  std::size_t budget = 3;
  double damping = 0.85;         // textrank + lexrank
  double tolerance = 1e-6;
  int max_iterations = 100;
  double lexrank_threshold = 0.1;

  std::string name() const;
};

enum class RetrieverKind { tfidf, bm25 };
enum class MultiDocStrategy { combine_then_summarize, summarize_then_combine };
enum class DialogueHandler { flatten };

/// An assembled pipeline: optional retrieval, dialogue flattening and
/// multi-document stage around a base model. Stage presence mirrors the
/// dataset flags the pipeline was built for.
struct PipelineSpec {
  std::optional<RetrieverKind> retriever;
  std::size_t top_k = 5;
  std::optional<DialogueHandler> dialogue_handler;
  std::optional<MultiDocStrategy> multidoc_strategy;
  ModelSpec base;

  /// Stable id, stages outermost-first, e.g. "bm25+flatten+textrank".
  std::string id() const;
};

struct ModelCard {
  std::string name;
  bool is_extractive = false;
  bool is_neural = false;
  std::string description;
};

struct RankedSentences {
  std::vector<std::string> sentences;
  std::vector<double> scores;   // stationary distribution, sums to 1
  int iterations = 0;
  bool converged = false;
};

/// TextRank sentence scores: nodes are sentences, edge weight is
/// |shared content words| / (ln|Si| + ln|Sj|), stopwords removed.
RankedSentences textrank_scores(const std::vector<std::string>& sentences,
                                const ModelSpec& spec, int threads = 1);

/// Continuous LexRank scores: TF-IDF cosine edges kept at or above the
/// threshold, degree-weighted damped centrality.
RankedSentences lexrank_scores(const std::vector<std::string>& sentences,
                               const ModelSpec& spec, int threads = 1);

/// Extracts the budget top-scoring sentences, returned in document order.
std::string textrank_summarize(std::string_view doc, const ModelSpec& spec,
                               int threads = 1);
std::string lexrank_summarize(const std::vector<std::string>& docs,
                              const ModelSpec& spec, int threads = 1);

/// combine_then_summarize joins with blank lines and summarizes once;
/// summarize_then_combine gives every document ceil(budget/|docs|)
/// sentences and concatenates in source order.
std::string multidoc_summarize(const std::vector<std::string>& docs,
                               MultiDocStrategy strategy, const ModelSpec& base,
                               AdapterManager* adapters, int threads = 1);

/// Ranks units against the query. BM25 uses k1 = 1.5, b = 0.75 and
/// idf = ln(1 + (N - df + 0.5)/(df + 0.5)). Descending score, ties by
/// original position, so an all-zero round falls back to document order.
std::vector<std::size_t> retrieve_topk(std::string_view query,
                                       const std::vector<std::string>& units,
                                       RetrieverKind method, std::size_t k);

/// One "speaker : utterance" line per turn.
std::string flatten_dialogue(const std::vector<DialogueTurn>& turns);

/// Runs a full pipeline over one instance: retrieval (per document for
/// multi-doc sources, over flattened utterance lines for dialogues), then
/// the dialogue/multi-doc stage, then the base model.
std::string run_pipeline(const PipelineSpec& spec, const SummInstance& instance,
                         AdapterManager* adapters = nullptr, int threads = 1);

}  // namespace summpipe

#endif  // SUMMPIPE_SUMMARIZE_HPP

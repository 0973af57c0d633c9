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

#include "summpipe/assembly.hpp"

#include <sstream>

#include "summpipe/errors.hpp"

namespace summpipe {

ModelRegistry default_registry(AdapterManager* adapters, std::size_t budget,
                               RegistryBuildReport* report) {
  ModelRegistry registry;

  ModelSpec textrank;
  textrank.kind = ModelKind::textrank;
  textrank.budget = budget;
  registry.base_models.push_back(textrank);
  registry.base_cards.push_back(
      {"textrank", /*is_extractive=*/true, /*is_neural=*/false,
       "Graph-based extractive ranker over the sentence-overlap graph. "
       "Strengths: fast, deterministic, no training data, output is always "
       "grammatical source text. Weaknesses: cannot paraphrase or compress, "
       "favors longer sentences, redundant picks on repetitive input."});

  ModelSpec lexrank;
  lexrank.kind = ModelKind::lexrank;
  lexrank.budget = budget;
  registry.base_models.push_back(lexrank);
  registry.base_cards.push_back(
      {"lexrank", true, false,
       "Centrality-based extractive ranker with TF-IDF cosine edges. "
       "Strengths: robust on multi-document input, thresholded edges damp "
       "noise, deterministic. Weaknesses: extract-only, needs enough "
       "sentences for a meaningful graph, threshold is corpus-sensitive."});

  if (adapters != nullptr) {
    for (const std::string& name : adapters->names()) {
      std::string error;
      // A candidate pool must never crash mid-selection because an adapter
      // cannot start, so unhealthy adapters are skipped up front.
      if (!adapters->health_check(name, &error)) {
        if (report != nullptr) report->skipped.push_back(name + ": " + error);
        continue;
      }
      ModelSpec external;
      external.kind = ModelKind::external;
      external.external_name = name;
      external.budget = budget;
      registry.base_models.push_back(external);
      registry.base_cards.push_back(
          {name, false, true,
           "External summarizer '" + name +
               "' served by a subprocess adapter. Strengths: can be abstractive "
               "and task-tuned. Weaknesses: slower than native models, quality "
               "and determinism depend on the backing implementation."});
    }
  }

  registry.retrievers = {RetrieverKind::tfidf, RetrieverKind::bm25};
  registry.multidoc_strategies = {MultiDocStrategy::combine_then_summarize,
                                  MultiDocStrategy::summarize_then_combine};
  registry.dialogue_handlers = {DialogueHandler::flatten};
  return registry;
}

CandidatePool assemble(const DatasetFlags& flags, const ModelRegistry& registry) {
  if (registry.base_models.empty()) {
    throw UsageError("assemble: registry has no base models");
  }
  // Stage factors apply only when their flag is set; an unset flag
  // contributes the single "absent" option. Order: retriever outermost,
  // then dialogue handler, then multi-doc strategy, then base model.
  std::vector<std::optional<RetrieverKind>> retrievers = {std::nullopt};
  if (flags.is_query_based) {
    if (registry.retrievers.empty()) {
      throw UsageError("assemble: query-based dataset but no retrievers");
    }
    retrievers.clear();
    for (RetrieverKind r : registry.retrievers) retrievers.emplace_back(r);
  }
  std::vector<std::optional<DialogueHandler>> handlers = {std::nullopt};
  if (flags.is_dialogue_based) {
    if (registry.dialogue_handlers.empty()) {
      throw UsageError("assemble: dialogue dataset but no dialogue handlers");
    }
    handlers.clear();
    for (DialogueHandler h : registry.dialogue_handlers) handlers.emplace_back(h);
  }
  std::vector<std::optional<MultiDocStrategy>> strategies = {std::nullopt};
  if (flags.is_multi_document) {
    if (registry.multidoc_strategies.empty()) {
      throw UsageError("assemble: multi-document dataset but no strategies");
    }
    strategies.clear();
    for (MultiDocStrategy s : registry.multidoc_strategies) {
      strategies.emplace_back(s);
    }
  }

  CandidatePool pool;
  for (const auto& retriever : retrievers) {
    for (const auto& handler : handlers) {
      for (const auto& strategy : strategies) {
        for (const ModelSpec& base : registry.base_models) {
          PipelineSpec spec;
          spec.retriever = retriever;
          spec.top_k = registry.retriever_top_k;
          spec.dialogue_handler = handler;
          spec.multidoc_strategy = strategy;
          spec.base = base;
          pool.candidates.push_back(std::move(spec));
        }
      }
    }
  }
  return pool;
}

std::string explain(const CandidatePool& pool, const ModelRegistry& registry) {
  std::ostringstream out;
  if (pool.candidates.empty()) {
    out << "warning: empty candidate pool\n";
    return out.str();
  }
  for (const PipelineSpec& spec : pool.candidates) {
    out << spec.id() << "\n";
    if (spec.retriever) {
      out << "  retrieval: "
          << (*spec.retriever == RetrieverKind::tfidf ? "TF-IDF" : "BM25")
          << " top-" << spec.top_k << " relevant units for the query\n";
    }
    if (spec.dialogue_handler) {
      out << "  dialogue: flatten turns to \"speaker : utterance\" lines\n";
    }
    if (spec.multidoc_strategy) {
      out << "  multi-doc: "
          << (*spec.multidoc_strategy == MultiDocStrategy::combine_then_summarize
                  ? "concatenate documents, then summarize once"
                  : "summarize each document, then concatenate")
          << "\n";
    }
    const std::string base_name = spec.base.name();
    bool card_found = false;
    for (std::size_t i = 0; i < registry.base_cards.size(); ++i) {
      if (registry.base_cards[i].name == base_name) {
        out << "  base: " << base_name
            << (registry.base_cards[i].is_extractive ? " (extractive)" : "")
            << (registry.base_cards[i].is_neural ? " (neural)" : "") << "\n"
            << "    " << registry.base_cards[i].description << "\n";
        card_found = true;
        break;
      }
    }
    if (!card_found) {
      out << "  base: " << base_name << "\n";
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace summpipe

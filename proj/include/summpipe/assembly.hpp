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

#ifndef SUMMPIPE_ASSEMBLY_HPP
#define SUMMPIPE_ASSEMBLY_HPP

#include <string>
#include <vector>

#include "summpipe/adapter.hpp"
#include "summpipe/corpus.hpp"
#include "summpipe/selection.hpp"
#include "summpipe/summarize.hpp"

namespace summpipe {

/// Everything a pool can be assembled from. Stage entries carry cards so
/// `explain` and `describe` can say what each piece does.
struct ModelRegistry {
  std::vector<ModelSpec> base_models;
  std::vector<ModelCard> base_cards;          // parallel to base_models
  std::vector<RetrieverKind> retrievers;
  std::vector<MultiDocStrategy> multidoc_strategies;
  std::vector<DialogueHandler> dialogue_handlers;
  std::size_t retriever_top_k = 5;
};

/// Native models plus any configured external adapters that pass the
/// startup health check; failures are reported through `skipped`.
struct RegistryBuildReport {
  std::vector<std::string> skipped;           // "name: reason" lines
};
ModelRegistry default_registry(AdapterManager* adapters = nullptr,
                               std::size_t budget = 3,
                               RegistryBuildReport* report = nullptr);

/// Cartesian pool construction from the dataset flags: retrievers when
/// query-based, dialogue handlers when dialogue, multi-doc strategies when
/// multi-document, always crossed with every base model. Deterministic
/// order: stages outermost-first, registry order within a stage.
CandidatePool assemble(const DatasetFlags& flags, const ModelRegistry& registry);

/// Human-readable listing: one block per candidate with its stage chain
/// and the base model's strengths/weaknesses.
std::string explain(const CandidatePool& pool, const ModelRegistry& registry);

}  // namespace summpipe

#endif  // SUMMPIPE_ASSEMBLY_HPP

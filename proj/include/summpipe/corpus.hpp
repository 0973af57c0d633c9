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

#ifndef SUMMPIPE_CORPUS_HPP
#define SUMMPIPE_CORPUS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace summpipe {

struct DialogueTurn {
  std::string speaker;
  std::string utterance;

  bool operator==(const DialogueTurn&) const = default;
};

/// A source is one plain document, a list of documents, or a list of
/// dialogue turns. A dataset never mixes shapes.
using Source =
    std::variant<std::string, std::vector<std::string>, std::vector<DialogueTurn>>;

/// One evaluation example: source text(s), optional query, optional
/// reference summary.
struct SummInstance {
  Source source;
  std::optional<std::string> query;
  std::optional<std::string> reference;

  bool operator==(const SummInstance&) const = default;
};

struct DatasetFlags {
  bool is_query_based = false;
  bool is_dialogue_based = false;
  bool is_multi_document = false;
  std::string domain;
  std::string language;

  bool operator==(const DatasetFlags&) const = default;
};

/// Registry metadata for one of the embedded datasets. Lengths are kept in
/// reported length units (the registry does not restate whether those are
/// tokens or words).
struct DatasetInfo {
  std::string name;
  std::string domain;
  std::uint64_t size = 0;
  double src_length = 0.0;
  double tgt_length = 0.0;
  DatasetFlags flags;
  std::vector<std::string> languages;
};

struct Dataset {
  DatasetFlags flags;
  std::vector<SummInstance> instances;
  std::string provenance;

  std::size_t size() const { return instances.size(); }
};

/// Indices drawn from a Dataset plus the seed that drew them. Indices are
/// unique and in bounds.
struct InstanceSet {
  std::vector<std::size_t> indices;
  std::uint64_t seed = 0;

  std::size_t size() const { return indices.size(); }
};

struct LoadOptions {
  bool allow_empty_utterances = false;
};

/// Reads one instance per line from a UTF-8 JSONL file and validates every
/// line against the dataset flags. Errors carry the 1-based line number.
Dataset load_jsonl(const std::string& path, const DatasetFlags& flags,
                   const LoadOptions& opts = {});

/// One JSONL line per instance, using the same schema load_jsonl reads.
std::string serialize_instance(const SummInstance& inst);
void save_jsonl(const Dataset& dataset, const std::string& path);

/// Case-insensitive lookup into the embedded 10-entry dataset registry.
/// Unknown names raise DataError listing the available names.
const DatasetInfo& registry_lookup(const std::string& name);
const std::vector<DatasetInfo>& dataset_registry();

/// Draws min(n, |dataset|) unique indices uniformly without replacement.
/// Deterministic for a fixed (seed, n, dataset size) on every platform.
InstanceSet sample(const Dataset& dataset, std::size_t n, std::uint64_t seed);

/// Joins any source shape into one text: document lists with blank lines,
/// dialogue turns as "speaker : utterance" lines.
std::string source_as_text(const Source& source);

}  // namespace summpipe

#endif  // SUMMPIPE_CORPUS_HPP

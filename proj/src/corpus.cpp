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

#include "summpipe/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "summpipe/errors.hpp"

namespace summpipe {

namespace {

using nlohmann::json;

std::string lower(std::string s) {
  for (char& c : s) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return s;
}

[[noreturn]] void line_error(const std::string& path, std::size_t line,
                             const std::string& msg) {
  throw DataError(path + ":" + std::to_string(line) + ": " + msg);
}

Source parse_source(const json& src, const DatasetFlags& flags,
                    const LoadOptions& opts, const std::string& path,
                    std::size_t line) {
  if (src.is_string()) {
    if (flags.is_dialogue_based) {
      line_error(path, line, "dialogue dataset requires a list of {speaker, utterance} turns");
    }
    if (flags.is_multi_document) {
      line_error(path, line, "multi-document dataset requires a list of documents");
    }
    std::string text = src.get<std::string>();
    if (text.empty()) line_error(path, line, "source must be non-empty");
    return text;
  }
  if (!src.is_array()) {
    line_error(path, line, "source must be a string or a list");
  }
  if (src.empty()) line_error(path, line, "source list must be non-empty");

  if (src[0].is_object()) {
    if (!flags.is_dialogue_based) {
      line_error(path, line, "turn-list source in a non-dialogue dataset");
    }
    std::vector<DialogueTurn> turns;
    for (const json& item : src) {
      if (!item.is_object()) {
        line_error(path, line, "source mixes dialogue turns with other shapes");
      }
      if (!item.contains("speaker") || !item["speaker"].is_string()) {
        line_error(path, line, "dialogue turn missing speaker field");
      }
      if (!item.contains("utterance") || !item["utterance"].is_string()) {
        line_error(path, line, "dialogue turn missing utterance field");
      }
      DialogueTurn turn{item["speaker"].get<std::string>(),
                        item["utterance"].get<std::string>()};
      if (turn.speaker.empty()) {
        line_error(path, line, "dialogue turn has empty speaker");
      }
      if (turn.utterance.empty() && !opts.allow_empty_utterances) {
        line_error(path, line, "dialogue turn has empty utterance");
      }
      turns.push_back(std::move(turn));
    }
    return turns;
  }

  if (flags.is_dialogue_based) {
    line_error(path, line, "dialogue dataset requires {speaker, utterance} objects");
  }
  std::vector<std::string> docs;
  for (const json& item : src) {
    if (!item.is_string()) {
      line_error(path, line, "source mixes documents with other shapes");
    }
    docs.push_back(item.get<std::string>());
    if (docs.back().empty()) line_error(path, line, "empty document in source list");
  }
  if (!flags.is_multi_document && docs.size() != 1) {
    line_error(path, line, "document list in a single-document dataset");
  }
  return docs;
}

}  // namespace

Dataset load_jsonl(const std::string& path, const DatasetFlags& flags,
                   const LoadOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset file: " + path);

  Dataset dataset;
  dataset.flags = flags;
  dataset.provenance = path;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded()) line_error(path, lineno, "malformed JSON");
    if (!obj.is_object()) line_error(path, lineno, "line is not a JSON object");
    if (!obj.contains("source")) line_error(path, lineno, "missing source field");

    SummInstance inst;
    inst.source = parse_source(obj["source"], flags, opts, path, lineno);
    if (obj.contains("query") && !obj["query"].is_null()) {
      if (!obj["query"].is_string()) line_error(path, lineno, "query must be a string");
      inst.query = obj["query"].get<std::string>();
    }
    if (obj.contains("summary") && !obj["summary"].is_null()) {
      if (!obj["summary"].is_string()) line_error(path, lineno, "summary must be a string");
      inst.reference = obj["summary"].get<std::string>();
    }
    if (flags.is_query_based && (!inst.query || inst.query->empty())) {
      line_error(path, lineno, "query-based dataset requires a non-empty query");
    }
    dataset.instances.push_back(std::move(inst));
  }
  if (dataset.instances.empty()) {
    throw DataError(path + ": dataset file is empty");
  }
  return dataset;
}

std::string serialize_instance(const SummInstance& inst) {
  json obj;
  if (const auto* text = std::get_if<std::string>(&inst.source)) {
    obj["source"] = *text;
  } else if (const auto* docs = std::get_if<std::vector<std::string>>(&inst.source)) {
    obj["source"] = *docs;
  } else {
    const auto& turns = std::get<std::vector<DialogueTurn>>(inst.source);
    json arr = json::array();
    for (const DialogueTurn& t : turns) {
      arr.push_back({{"speaker", t.speaker}, {"utterance", t.utterance}});
    }
    obj["source"] = std::move(arr);
  }
  if (inst.query) obj["query"] = *inst.query;
  if (inst.reference) obj["summary"] = *inst.reference;
  return obj.dump();
}

void save_jsonl(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write dataset file: " + path);
  for (const SummInstance& inst : dataset.instances) {
    out << serialize_instance(inst) << '\n';
  }
}

const std::vector<DatasetInfo>& dataset_registry() {
  auto flags = [](bool query, bool multi, bool dialogue, std::string domain,
                  std::string language = "En") {
    DatasetFlags f;
    f.is_query_based = query;
    f.is_multi_document = multi;
    f.is_dialogue_based = dialogue;
    f.domain = std::move(domain);
    f.language = std::move(language);
    return f;
  };
  static const std::vector<DatasetInfo> registry = {
      {"CNN/DM(3.0.0)", "News", 300'000, 781, 56,
       flags(false, false, false, "News"), {"En"}},
      {"Multi-News", "News", 56'000, 2100, 263.8,
       flags(false, true, false, "News"), {"En"}},
      {"SAMSum", "Open-domain", 16'000, 94, 20,
       flags(false, false, true, "Open-domain"), {"En"}},
      {"XSum", "News", 226'000, 431, 23.3,
       flags(false, false, false, "News"), {"En"}},
      {"ScisummNet", "Scientific articles", 1'000, 4700, 150,
       flags(false, false, false, "Scientific articles"), {"En"}},
      {"QMSum", "Meetings", 1'000, 9000, 69.6,
       flags(true, false, true, "Meetings"), {"En"}},
      {"ArXiv", "Scientific papers", 215'000, 4900, 220,
       flags(false, false, false, "Scientific papers"), {"En"}},
      {"PubMedQA", "Biomedial", 273'500, 239, 43,
       flags(true, false, false, "Biomedial"), {"En"}},
      {"SummScreen", "TV shows", 26'900, 6600, 337.4,
       flags(false, false, true, "TV shows"), {"En"}},
      {"MLSum", "News", 1'500'000, 635, 31.8,
       flags(false, false, false, "News", "Fr"), {"Fr", "De", "Es", "Ru", "Tr"}},
  };
  return registry;
}

const DatasetInfo& registry_lookup(const std::string& name) {
  const std::string key = lower(name);
  for (const DatasetInfo& info : dataset_registry()) {
    std::string full = lower(info.name);
    if (key == full) return info;
    // "CNN/DM" matches "CNN/DM(3.0.0)"
    auto paren = full.find('(');
    if (paren != std::string::npos && key == full.substr(0, paren)) return info;
  }
  std::ostringstream msg;
  msg << "unknown dataset '" << name << "'; available:";
  for (const DatasetInfo& info : dataset_registry()) msg << " " << info.name;
  throw DataError(msg.str());
}

InstanceSet sample(const Dataset& dataset, std::size_t n, std::uint64_t seed) {
  if (dataset.instances.empty()) throw DataError("sample: dataset is empty");
  if (n == 0) throw DataError("sample: n must be >= 1");

  const std::size_t size = dataset.size();
  const std::size_t take = std::min(n, size);

  std::vector<std::size_t> indices(size);
  for (std::size_t i = 0; i < size; ++i) indices[i] = i;

  // Partial Fisher-Yates with rejection-sampled bounds; std::shuffle and
  // the distributions are implementation-defined, this is not.
  std::mt19937_64 rng(seed);
  auto bounded = [&rng](std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = rng();
    while (x >= limit) x = rng();
    return x % bound;
  };
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(bounded(size - i));
    std::swap(indices[i], indices[j]);
  }
  indices.resize(take);

  InstanceSet set;
  set.indices = std::move(indices);
  set.seed = seed;
  return set;
}

std::string source_as_text(const Source& source) {
  if (const auto* text = std::get_if<std::string>(&source)) return *text;
  if (const auto* docs = std::get_if<std::vector<std::string>>(&source)) {
    std::string out;
    for (std::size_t i = 0; i < docs->size(); ++i) {
      if (i > 0) out += "\n\n";
      out += (*docs)[i];
    }
    return out;
  }
  const auto& turns = std::get<std::vector<DialogueTurn>>(source);
  std::string out;
  for (std::size_t i = 0; i < turns.size(); ++i) {
    if (i > 0) out += '\n';
    out += turns[i].speaker;
    out += " : ";
    out += turns[i].utterance;
  }
  return out;
}

}  // namespace summpipe

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

#include "summpipe/summarize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "summpipe/errors.hpp"
#include "summpipe/kernels.hpp"
#include "summpipe/textproc.hpp"

namespace summpipe {

namespace {

std::string strategy_token(MultiDocStrategy s) {
  return s == MultiDocStrategy::combine_then_summarize ? "combine-then-summarize"
                                                       : "summarize-then-combine";
}

std::vector<std::string> content_tokens(const std::string& sentence) {
  TokenizeOptions opts;
  opts.drop_stopwords = true;
  return tokenize(sentence, opts).tokens;
}

/// Indices of the `budget` best-scoring sentences, ascending. Ties go to
/// the earlier sentence, so an all-equal score vector selects document
/// order.
std::vector<std::size_t> pick_top(const std::vector<double>& scores,
                                  std::size_t budget) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&scores](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  order.resize(std::min(budget, order.size()));
  std::sort(order.begin(), order.end());
  return order;
}

std::string join_selected(const std::vector<std::string>& sentences,
                          const std::vector<std::size_t>& indices,
                          const char* sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (i > 0) out += sep;
    out += sentences[indices[i]];
  }
  return out;
}

std::string extractive_from_scores(const RankedSentences& ranked,
                                   std::size_t budget) {
  return join_selected(ranked.sentences, pick_top(ranked.scores, budget));
}

std::string run_base(const std::string& text, const ModelSpec& spec,
                     const std::optional<std::string>& query,
                     AdapterManager* adapters, int threads) {
  switch (spec.kind) {
    case ModelKind::textrank:
      return textrank_summarize(text, spec, threads);
    case ModelKind::lexrank:
      return lexrank_summarize({text}, spec, threads);
    case ModelKind::external:
      if (adapters == nullptr) {
        throw AdapterError("model '" + spec.external_name +
                           "' needs an adapter manager");
      }
      return adapters->summarize(spec.external_name, text, query);
  }
  throw UsageError("unknown model kind");
}

}  // namespace

std::string ModelSpec::name() const {
  switch (kind) {
    case ModelKind::textrank:
      return "textrank";
    case ModelKind::lexrank:
      return "lexrank";
    case ModelKind::external:
      return external_name;
  }
  return "unknown";
}

std::string PipelineSpec::id() const {
  std::string out;
  if (retriever) {
    out += *retriever == RetrieverKind::tfidf ? "tfidf" : "bm25";
    out += '+';
  }
  if (dialogue_handler) out += "flatten+";
  if (multidoc_strategy) {
    out += strategy_token(*multidoc_strategy);
    out += '+';
  }
  out += base.name();
  return out;
}

RankedSentences textrank_scores(const std::vector<std::string>& sentences,
                                const ModelSpec& spec, int threads) {
  RankedSentences out;
  out.sentences = sentences;
  const std::size_t n = sentences.size();
  if (n == 0) return out;

  std::vector<std::vector<std::string>> tokens;
  tokens.reserve(n);
  for (const std::string& s : sentences) tokens.push_back(content_tokens(s));
  std::vector<std::unordered_set<std::string>> types(n);
  for (std::size_t i = 0; i < n; ++i) {
    types[i].insert(tokens[i].begin(), tokens[i].end());
  }

  const auto weights = kernels::pairwise_matrix(
      n,
      [&](std::size_t i, std::size_t j) {
        if (tokens[i].empty() || tokens[j].empty()) return 0.0;
        const double denom = std::log(static_cast<double>(tokens[i].size())) +
                             std::log(static_cast<double>(tokens[j].size()));
        if (denom <= 0.0) return 0.0;  // two one-word sentences
        std::size_t shared = 0;
        for (const std::string& t : types[i]) {
          if (types[j].count(t) > 0) ++shared;
        }
        return static_cast<double>(shared) / denom;
      },
      threads);

  const auto stationary = kernels::stationary_scores(
      weights, n, spec.damping, spec.tolerance, spec.max_iterations, threads);
  out.scores = stationary.scores;
  out.iterations = stationary.iterations;
  out.converged = stationary.converged;
  return out;
}

RankedSentences lexrank_scores(const std::vector<std::string>& sentences,
                               const ModelSpec& spec, int threads) {
  RankedSentences out;
  out.sentences = sentences;
  const std::size_t n = sentences.size();
  if (n == 0) return out;

  std::vector<TokenSeq> token_seqs;
  token_seqs.reserve(n);
  for (const std::string& s : sentences) token_seqs.push_back(tokenize(s));
  const TfIdfModel model = tfidf_fit(token_seqs);
  std::vector<SparseVector> vectors;
  vectors.reserve(n);
  for (const TokenSeq& seq : token_seqs) {
    vectors.push_back(tfidf_vector(model, seq));
  }

  const auto weights = kernels::pairwise_matrix(
      n,
      [&](std::size_t i, std::size_t j) {
        const double sim = cosine(vectors[i], vectors[j]);
        return sim >= spec.lexrank_threshold ? sim : 0.0;
      },
      threads);

  const auto stationary = kernels::stationary_scores(
      weights, n, spec.damping, spec.tolerance, spec.max_iterations, threads);
  out.scores = stationary.scores;
  out.iterations = stationary.iterations;
  out.converged = stationary.converged;
  return out;
}

std::string textrank_summarize(std::string_view doc, const ModelSpec& spec,
                               int threads) {
  const auto sentences = split_sentences(doc);
  if (sentences.empty()) return "";
  return extractive_from_scores(textrank_scores(sentences, spec, threads),
                                spec.budget);
}

std::string lexrank_summarize(const std::vector<std::string>& docs,
                              const ModelSpec& spec, int threads) {
  std::vector<std::string> sentences;
  for (const std::string& doc : docs) {
    for (std::string& s : split_sentences(doc)) sentences.push_back(std::move(s));
  }
  if (sentences.empty()) return "";
  return extractive_from_scores(lexrank_scores(sentences, spec, threads),
                                spec.budget);
}

std::string multidoc_summarize(const std::vector<std::string>& docs,
                               MultiDocStrategy strategy, const ModelSpec& base,
                               AdapterManager* adapters, int threads) {
  if (docs.empty()) throw DataError("multidoc_summarize: no documents");
  if (strategy == MultiDocStrategy::combine_then_summarize) {
    std::string joined;
    for (std::size_t i = 0; i < docs.size(); ++i) {
      if (i > 0) joined += "\n\n";
      joined += docs[i];
    }
    return run_base(joined, base, std::nullopt, adapters, threads);
  }

  // summarize_then_combine: per-document budget is ceil(budget / #docs),
  // partial summaries concatenated in source order.
  ModelSpec per_doc = base;
  per_doc.budget = (base.budget + docs.size() - 1) / docs.size();
  std::string out;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    std::string part;
    try {
      part = run_base(docs[i], per_doc, std::nullopt, adapters, threads);
    } catch (const AdapterError& e) {
      throw AdapterError("document " + std::to_string(i + 1) + ": " + e.what());
    }
    if (!part.empty()) {
      if (!out.empty()) out += ' ';
      out += part;
    }
  }
  return out;
}

std::vector<std::size_t> retrieve_topk(std::string_view query,
                                       const std::vector<std::string>& units,
                                       RetrieverKind method, std::size_t k) {
  if (k == 0) throw UsageError("retrieve_topk: k must be >= 1");
  if (units.empty()) throw DataError("retrieve_topk: no units to rank");

  std::vector<TokenSeq> unit_tokens;
  unit_tokens.reserve(units.size());
  for (const std::string& u : units) unit_tokens.push_back(tokenize(u));
  const TokenSeq query_tokens = tokenize(query);

  std::vector<double> scores(units.size(), 0.0);
  if (method == RetrieverKind::tfidf) {
    const TfIdfModel model = tfidf_fit(unit_tokens);
    const SparseVector query_vec = tfidf_vector(model, query_tokens);
    for (std::size_t i = 0; i < units.size(); ++i) {
      scores[i] = cosine(query_vec, tfidf_vector(model, unit_tokens[i]));
    }
  } else {
    constexpr double k1 = 1.5;
    constexpr double b = 0.75;
    const double n_docs = static_cast<double>(units.size());
    double avgdl = 0.0;
    for (const TokenSeq& seq : unit_tokens) {
      avgdl += static_cast<double>(seq.tokens.size());
    }
    avgdl /= n_docs;

    // Distinct query terms in first-appearance order keep the float
    // summation order stable.
    std::vector<std::string> terms;
    std::unordered_set<std::string> seen;
    for (const std::string& t : query_tokens.tokens) {
      if (seen.insert(t).second) terms.push_back(t);
    }
    for (const std::string& term : terms) {
      std::size_t df = 0;
      for (const TokenSeq& seq : unit_tokens) {
        if (std::find(seq.tokens.begin(), seq.tokens.end(), term) !=
            seq.tokens.end()) {
          ++df;
        }
      }
      if (df == 0) continue;
      const double dfd = static_cast<double>(df);
      const double idf = std::log(1.0 + (n_docs - dfd + 0.5) / (dfd + 0.5));
      for (std::size_t i = 0; i < units.size(); ++i) {
        const auto& tokens = unit_tokens[i].tokens;
        const double tf = static_cast<double>(
            std::count(tokens.begin(), tokens.end(), term));
        if (tf == 0.0) continue;
        const double dl = static_cast<double>(tokens.size());
        const double denom =
            tf + k1 * (1.0 - b + (avgdl > 0.0 ? b * dl / avgdl : 0.0));
        scores[i] += idf * tf * (k1 + 1.0) / denom;
      }
    }
  }

  std::vector<std::size_t> order(units.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&scores](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  order.resize(std::min(k, order.size()));
  return order;
}

std::string flatten_dialogue(const std::vector<DialogueTurn>& turns) {
  std::string out;
  for (std::size_t i = 0; i < turns.size(); ++i) {
    if (i > 0) out += '\n';
    out += turns[i].speaker;
    out += " : ";
    out += turns[i].utterance;
  }
  return out;
}

namespace {

/// Reduces one document to its top-k sentences (original order) when a
/// retriever and a query are present; otherwise returns the document.
std::string retrieve_within(const std::string& doc, const PipelineSpec& spec,
                            const std::string& query) {
  auto sentences = split_sentences(doc);
  if (sentences.empty()) return doc;
  auto picked = retrieve_topk(query, sentences, *spec.retriever, spec.top_k);
  std::sort(picked.begin(), picked.end());
  return join_selected(sentences, picked);
}

}  // namespace

std::string run_pipeline(const PipelineSpec& spec, const SummInstance& instance,
                         AdapterManager* adapters, int threads) {
  const bool retrieving = spec.retriever.has_value() && instance.query.has_value();

  if (const auto* turns = std::get_if<std::vector<DialogueTurn>>(&instance.source)) {
    // Retrieval ranks the flattened "speaker : utterance" lines, keeping
    // the surviving turns in conversation order.
    std::vector<std::string> lines;
    lines.reserve(turns->size());
    for (const DialogueTurn& turn : *turns) {
      lines.push_back(turn.speaker + " : " + turn.utterance);
    }
    std::string text;
    if (retrieving && !lines.empty()) {
      auto picked = retrieve_topk(*instance.query, lines, *spec.retriever,
                                  spec.top_k);
      std::sort(picked.begin(), picked.end());
      text = join_selected(lines, picked, "\n");
    } else {
      text = flatten_dialogue(*turns);
    }
    return run_base(text, spec.base, instance.query, adapters, threads);
  }

  if (const auto* docs = std::get_if<std::vector<std::string>>(&instance.source)) {
    std::vector<std::string> prepared = *docs;
    if (retrieving) {
      for (std::string& doc : prepared) {
        doc = retrieve_within(doc, spec, *instance.query);
      }
    }
    if (spec.multidoc_strategy) {
      return multidoc_summarize(prepared, *spec.multidoc_strategy, spec.base,
                                adapters, threads);
    }
    std::string joined;
    for (std::size_t i = 0; i < prepared.size(); ++i) {
      if (i > 0) joined += "\n\n";
      joined += prepared[i];
    }
    return run_base(joined, spec.base, instance.query, adapters, threads);
  }

  std::string text = std::get<std::string>(instance.source);
  if (retrieving) {
    text = retrieve_within(text, spec, *instance.query);
  }
  return run_base(text, spec.base, instance.query, adapters, threads);
}

}  // namespace summpipe

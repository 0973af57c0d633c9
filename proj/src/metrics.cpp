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

#include "summpipe/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "summpipe/errors.hpp"
#include "summpipe/textproc.hpp"

namespace summpipe {

namespace {

constexpr double kBleuEpsilon = 1e-9;

double harmonic_f1(double p, double r) {
  return (p + r > 0.0) ? 2.0 * p * r / (p + r) : 0.0;
}

MetricScore prf(std::string name, double p, double r) {
  MetricScore score;
  score.metric = std::move(name);
  score.precision = p;
  score.recall = r;
  score.f1 = harmonic_f1(p, r);
  score.value = *score.f1;
  return score;
}

std::vector<std::string> metric_tokens(std::string_view text, bool stem) {
  TokenizeOptions opts;
  opts.stem = stem;
  return tokenize(text, opts).tokens;
}

double dense_cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace

const std::vector<double>* EmbeddingTable::find(const std::string& word) const {
  auto it = vectors.find(word);
  return it == vectors.end() ? nullptr : &it->second;
}

EmbeddingTable load_embeddings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embedding file: " + path);
  EmbeddingTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string word;
    row >> word;
    std::vector<double> vec;
    double v;
    while (row >> v) vec.push_back(v);
    if (word.empty() || vec.empty()) {
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": expected `word v1 v2 ... vd`");
    }
    if (table.dim == 0) {
      table.dim = vec.size();
    } else if (vec.size() != table.dim) {
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": vector has dimension " + std::to_string(vec.size()) +
                      ", table has " + std::to_string(table.dim));
    }
    table.vectors.insert_or_assign(std::move(word), std::move(vec));
  }
  if (table.vectors.empty()) throw DataError(path + ": no embeddings loaded");
  return table;
}

SynonymTable load_synonyms(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open synonym file: " + path);
  SynonymTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size()) {
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": expected `word<TAB>syn1,syn2,...`");
    }
    std::string word = line.substr(0, tab);
    auto& set = table[word];
    std::size_t start = tab + 1;
    while (start <= line.size()) {
      auto comma = line.find(',', start);
      if (comma == std::string::npos) comma = line.size();
      if (comma > start) set.insert(line.substr(start, comma - start));
      start = comma + 1;
    }
  }
  return table;
}

MetricScore rouge_n(std::string_view candidate, std::string_view reference,
                    std::size_t n, bool stem) {
  if (n == 0) throw UsageError("rouge_n: n must be >= 1");
  const auto ref_tokens = metric_tokens(reference, stem);
  if (ref_tokens.empty()) throw DataError("rouge_n: empty reference");
  const auto cand_tokens = metric_tokens(candidate, stem);

  const NGramBag ref_bag = ngrams(ref_tokens, n);
  const NGramBag cand_bag = ngrams(cand_tokens, n);
  double overlap = 0.0;
  for (const auto& [gram, count] : cand_bag.counts) {
    auto it = ref_bag.counts.find(gram);
    if (it != ref_bag.counts.end()) {
      overlap += static_cast<double>(std::min(count, it->second));
    }
  }
  const double p =
      cand_bag.total() > 0 ? overlap / static_cast<double>(cand_bag.total()) : 0.0;
  const double r =
      ref_bag.total() > 0 ? overlap / static_cast<double>(ref_bag.total()) : 0.0;
  return prf("rouge-" + std::to_string(n), p, r);
}

MetricScore rouge_l(std::string_view candidate, std::string_view reference,
                    bool stem) {
  const auto ref_tokens = metric_tokens(reference, stem);
  if (ref_tokens.empty()) throw DataError("rouge_l: empty reference");
  const auto cand_tokens = metric_tokens(candidate, stem);

  const std::size_t m = cand_tokens.size();
  const std::size_t k = ref_tokens.size();
  // Two-row LCS table.
  std::vector<std::size_t> prev(k + 1, 0), cur(k + 1, 0);
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= k; ++j) {
      if (cand_tokens[i - 1] == ref_tokens[j - 1]) {
        cur[j] = prev[j - 1] + 1;
      } else {
        cur[j] = std::max(prev[j], cur[j - 1]);
      }
    }
    std::swap(prev, cur);
  }
  const double lcs = static_cast<double>(prev[k]);
  const double p = m > 0 ? lcs / static_cast<double>(m) : 0.0;
  const double r = lcs / static_cast<double>(k);
  return prf("rouge-l", p, r);
}

MetricScore bleu(std::string_view candidate,
                 const std::vector<std::string>& references, std::size_t max_n) {
  if (max_n == 0) throw UsageError("bleu: max_n must be >= 1");
  if (references.empty()) throw DataError("bleu: at least one reference required");
  std::vector<std::vector<std::string>> ref_tokens;
  for (const std::string& ref : references) {
    ref_tokens.push_back(metric_tokens(ref, false));
    if (ref_tokens.back().empty()) throw DataError("bleu: empty reference");
  }
  MetricScore score;
  score.metric = "bleu";
  const auto cand_tokens = metric_tokens(candidate, false);
  if (cand_tokens.empty()) return score;  // value = 0, no error

  double log_sum = 0.0;
  for (std::size_t n = 1; n <= max_n; ++n) {
    const NGramBag cand_bag = ngrams(cand_tokens, n);
    // Clip each n-gram against its best count over all references.
    double matched = 0.0;
    for (const auto& [gram, count] : cand_bag.counts) {
      std::size_t best = 0;
      for (const auto& tokens : ref_tokens) {
        const NGramBag bag = ngrams(tokens, n);
        auto it = bag.counts.find(gram);
        if (it != bag.counts.end()) best = std::max(best, it->second);
      }
      matched += static_cast<double>(std::min(count, best));
    }
    double p;
    if (cand_bag.total() == 0) {
      p = kBleuEpsilon;
    } else {
      if (matched == 0.0) matched = kBleuEpsilon;
      p = matched / static_cast<double>(cand_bag.total());
    }
    log_sum += std::log(p);
  }

  // Effective reference length: closest to the candidate, ties to shorter.
  const std::size_t c_len = cand_tokens.size();
  std::size_t r_len = ref_tokens.front().size();
  for (const auto& tokens : ref_tokens) {
    const std::size_t len = tokens.size();
    const auto dist = [c_len](std::size_t l) {
      return l > c_len ? l - c_len : c_len - l;
    };
    if (dist(len) < dist(r_len) || (dist(len) == dist(r_len) && len < r_len)) {
      r_len = len;
    }
  }
  const double bp = std::min(
      1.0, std::exp(1.0 - static_cast<double>(r_len) / static_cast<double>(c_len)));
  score.value = bp * std::exp(log_sum / static_cast<double>(max_n));
  return score;
}

MetricScore meteor_lite(std::string_view candidate, std::string_view reference,
                        const SynonymTable* synonyms) {
  const auto ref_tokens = metric_tokens(reference, false);
  if (ref_tokens.empty()) throw DataError("meteor_lite: empty reference");
  const auto cand_tokens = metric_tokens(candidate, false);

  MetricScore score;
  score.metric = "meteor";
  if (cand_tokens.empty()) return score;

  // alignment[i] = index into ref_tokens matched to candidate token i.
  std::vector<std::ptrdiff_t> alignment(cand_tokens.size(), -1);
  std::vector<bool> ref_used(ref_tokens.size(), false);
  auto run_stage = [&](auto&& matches) {
    for (std::size_t i = 0; i < cand_tokens.size(); ++i) {
      if (alignment[i] >= 0) continue;
      for (std::size_t j = 0; j < ref_tokens.size(); ++j) {
        if (ref_used[j]) continue;
        if (matches(cand_tokens[i], ref_tokens[j])) {
          alignment[i] = static_cast<std::ptrdiff_t>(j);
          ref_used[j] = true;
          break;
        }
      }
    }
  };
  run_stage([](const std::string& a, const std::string& b) { return a == b; });
  run_stage([](const std::string& a, const std::string& b) {
    return porter_stem(a) == porter_stem(b);
  });
  if (synonyms != nullptr) {
    run_stage([synonyms](const std::string& a, const std::string& b) {
      auto in = [synonyms](const std::string& w, const std::string& s) {
        auto it = synonyms->find(w);
        return it != synonyms->end() && it->second.count(s) > 0;
      };
      return in(a, b) || in(b, a);
    });
  }

  std::size_t matches = 0;
  for (auto j : alignment) {
    if (j >= 0) ++matches;
  }
  if (matches == 0) return score;

  const double p = static_cast<double>(matches) / static_cast<double>(cand_tokens.size());
  const double r = static_cast<double>(matches) / static_cast<double>(ref_tokens.size());
  const double f_mean = 10.0 * p * r / (r + 9.0 * p);

  // A chunk is a maximal run of matches adjacent in both strings.
  std::size_t chunks = 0;
  std::ptrdiff_t prev_ref = -2;
  bool in_chunk = false;
  for (std::size_t i = 0; i < alignment.size(); ++i) {
    if (alignment[i] < 0) {
      in_chunk = false;
      continue;
    }
    if (!in_chunk || alignment[i] != prev_ref + 1) ++chunks;
    in_chunk = true;
    prev_ref = alignment[i];
  }
  const double frag = static_cast<double>(chunks) / static_cast<double>(matches);
  const double penalty = 0.5 * frag * frag * frag;

  score.precision = p;
  score.recall = r;
  score.f1 = f_mean;
  score.value = f_mean * (1.0 - penalty);
  return score;
}

MetricScore rouge_we(std::string_view candidate, std::string_view reference,
                     const EmbeddingTable& table, double tau) {
  const auto ref_tokens = metric_tokens(reference, false);
  if (ref_tokens.empty()) throw DataError("rouge_we: empty reference");
  const auto cand_tokens = metric_tokens(candidate, false);

  struct Edge {
    double weight;
    std::size_t cand;
    std::size_t ref;
  };
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < cand_tokens.size(); ++i) {
    const std::vector<double>* cv = table.find(cand_tokens[i]);
    for (std::size_t j = 0; j < ref_tokens.size(); ++j) {
      if (cand_tokens[i] == ref_tokens[j]) {
        edges.push_back({1.0, i, j});
        continue;
      }
      if (cv == nullptr) continue;
      const std::vector<double>* rv = table.find(ref_tokens[j]);
      if (rv == nullptr) continue;
      if (cv->size() != rv->size()) {
        throw DataError("rouge_we: embedding dimension mismatch");
      }
      const double cos = dense_cosine(*cv, *rv);
      if (cos >= tau) edges.push_back({cos, i, j});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    if (a.cand != b.cand) return a.cand < b.cand;
    return a.ref < b.ref;
  });
  std::vector<bool> cand_used(cand_tokens.size(), false);
  std::vector<bool> ref_used(ref_tokens.size(), false);
  double overlap = 0.0;
  for (const Edge& e : edges) {
    if (cand_used[e.cand] || ref_used[e.ref]) continue;
    cand_used[e.cand] = true;
    ref_used[e.ref] = true;
    overlap += e.weight;
  }
  const double p =
      cand_tokens.empty() ? 0.0 : overlap / static_cast<double>(cand_tokens.size());
  const double r = overlap / static_cast<double>(ref_tokens.size());
  MetricScore score = prf("rouge-we", p, r);
  return score;
}

MetricScore bertscore(const std::vector<std::vector<double>>& candidate_vectors,
                      const std::vector<std::vector<double>>& reference_vectors,
                      const std::vector<double>* candidate_idf,
                      const std::vector<double>* reference_idf) {
  if (candidate_vectors.empty() || reference_vectors.empty()) {
    throw DataError("bertscore: empty vector sequence");
  }
  const std::size_t dim = candidate_vectors.front().size();
  for (const auto& v : candidate_vectors) {
    if (v.size() != dim) throw DataError("bertscore: dimension mismatch");
  }
  for (const auto& v : reference_vectors) {
    if (v.size() != dim) throw DataError("bertscore: dimension mismatch");
  }
  if (candidate_idf != nullptr && candidate_idf->size() != candidate_vectors.size()) {
    throw DataError("bertscore: candidate idf length mismatch");
  }
  if (reference_idf != nullptr && reference_idf->size() != reference_vectors.size()) {
    throw DataError("bertscore: reference idf length mismatch");
  }

  auto greedy_mean = [](const std::vector<std::vector<double>>& from,
                        const std::vector<std::vector<double>>& to,
                        const std::vector<double>* idf) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < from.size(); ++i) {
      double best = 0.0;
      for (const auto& other : to) {
        best = std::max(best, dense_cosine(from[i], other));
      }
      const double w = idf != nullptr ? (*idf)[i] : 1.0;
      num += w * best;
      den += w;
    }
    return den > 0.0 ? num / den : 0.0;
  };
  const double r = greedy_mean(reference_vectors, candidate_vectors, reference_idf);
  const double p = greedy_mean(candidate_vectors, reference_vectors, candidate_idf);
  MetricScore score = prf("bertscore", p, r);
  return score;
}

const std::vector<MetricInfo>& metric_families() {
  static const std::vector<MetricInfo> families = {
      {"rouge", true,
       "N-gram, word-sequence and LCS overlap with the reference; higher is better."},
      {"bleu", true,
       "Clipped n-gram precision with a brevity penalty; higher is better."},
      {"meteor", true,
       "Stem- and synonym-aware word alignment with a fragmentation penalty; "
       "higher is better."},
      {"rouge-we", true,
       "ROUGE-1 with embedding-cosine soft word matching; higher is better."},
      {"bertscore", true,
       "Greedy token-level cosine over contextual embedding vectors; higher is "
       "better."},
  };
  return families;
}

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names = {
      "rouge-1", "rouge-2", "rouge-l", "bleu", "meteor", "rouge-we", "bertscore"};
  return names;
}

const MetricInfo& metric_info(const std::string& name) {
  static const std::vector<MetricInfo> concrete = {
      {"rouge-1", true, "Unigram overlap F1 with the reference; higher is better."},
      {"rouge-2", true, "Bigram overlap F1 with the reference; higher is better."},
      {"rouge-l", true,
       "Longest-common-subsequence F1 with the reference; higher is better."},
  };
  for (const MetricInfo& info : concrete) {
    if (info.name == name) return info;
  }
  for (const MetricInfo& info : metric_families()) {
    if (info.name == name) return info;
  }
  throw UsageError("unknown metric '" + name + "'");
}

MetricFn resolve_metric(const std::string& name, const MetricResources& res) {
  const bool stem = res.stem;
  if (name == "rouge-1" || name == "rouge-2") {
    const std::size_t n = name == "rouge-1" ? 1 : 2;
    return [n, stem](std::string_view c, std::string_view r) {
      return rouge_n(c, r, n, stem);
    };
  }
  if (name == "rouge-l") {
    return [stem](std::string_view c, std::string_view r) {
      return rouge_l(c, r, stem);
    };
  }
  if (name == "bleu") {
    return [](std::string_view c, std::string_view r) {
      return bleu(c, {std::string(r)});
    };
  }
  if (name == "meteor") {
    const SynonymTable* synonyms = res.synonyms;
    return [synonyms](std::string_view c, std::string_view r) {
      return meteor_lite(c, r, synonyms);
    };
  }
  if (name == "rouge-we") {
    if (res.embeddings == nullptr) {
      throw DataError("metric 'rouge-we' requires an embedding table");
    }
    const EmbeddingTable* table = res.embeddings;
    const double tau = res.rouge_we_tau;
    return [table, tau](std::string_view c, std::string_view r) {
      return rouge_we(c, r, *table, tau);
    };
  }
  if (name == "bertscore") {
    if (res.embeddings == nullptr) {
      throw DataError("metric 'bertscore' requires an embedding table");
    }
    const EmbeddingTable* table = res.embeddings;
    return [table](std::string_view c, std::string_view r) {
      // Token vectors come from the static table; out-of-vocabulary tokens
      // become zero vectors, which contribute zero similarity.
      auto vectors = [table](std::string_view text) {
        std::vector<std::vector<double>> out;
        for (const std::string& tok : metric_tokens(text, false)) {
          const std::vector<double>* v = table->find(tok);
          out.push_back(v != nullptr ? *v : std::vector<double>(table->dim, 0.0));
        }
        return out;
      };
      const auto ref_vectors = vectors(r);
      if (ref_vectors.empty()) throw DataError("bertscore: empty reference");
      const auto cand_vectors = vectors(c);
      if (cand_vectors.empty()) {
        MetricScore score;
        score.metric = "bertscore";
        score.precision = 0.0;
        score.recall = 0.0;
        score.f1 = 0.0;
        return score;
      }
      return bertscore(cand_vectors, ref_vectors);
    };
  }
  throw UsageError("unknown metric '" + name + "'");
}

}  // namespace summpipe

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

#include "summpipe/textproc.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include "summpipe/errors.hpp"

namespace summpipe {

namespace {

bool is_ascii_alnum(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

bool is_word_byte(unsigned char c) {
  // Non-ASCII bytes are treated as letters, which keeps multibyte UTF-8
  // sequences inside one token.
  return is_ascii_alnum(c) || c >= 0x80;
}

bool is_space(unsigned char c) { return std::isspace(c) != 0; }

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

// Abbreviations whose trailing period does not end a sentence. Single
// letters are intentionally absent: "A. B" does split.
const std::unordered_set<std::string>& abbreviation_guard() {
  static const std::unordered_set<std::string> guard = {
      "mr",   "mrs",  "ms",   "dr",   "prof", "rev",  "gen",  "sen",
      "rep",  "hon",  "st",   "jr",   "sr",   "messrs", "vs", "etc",
      "inc",  "ltd",  "co",   "corp", "dept", "univ", "fig",  "figs",
      "no",   "nos",  "vol",  "vols", "sec",  "chap", "ch",   "pp",
      "ed",   "eds",  "approx", "est", "al",  "resp"};
  return guard;
}

std::string_view trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && is_space(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

std::size_t NGramBag::total() const {
  std::size_t t = 0;
  for (const auto& [key, count] : counts) t += count;
  return t;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> sentences;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;

    // Lookahead: whitespace, then an uppercase letter or digit.
    std::size_t next = i + 1;
    if (next >= text.size()) continue;
    if (!is_space(static_cast<unsigned char>(text[next]))) continue;
    while (next < text.size() && is_space(static_cast<unsigned char>(text[next]))) {
      ++next;
    }
    if (next >= text.size()) continue;
    unsigned char follow = static_cast<unsigned char>(text[next]);
    if (!((follow >= 'A' && follow <= 'Z') || (follow >= '0' && follow <= '9'))) {
      continue;
    }

    if (c == '.') {
      std::size_t we = i;
      std::size_t wb = we;
      while (wb > start && is_ascii_alnum(static_cast<unsigned char>(text[wb - 1]))) {
        --wb;
      }
      if (we > wb &&
          abbreviation_guard().count(to_lower_ascii(text.substr(wb, we - wb)))) {
        continue;
      }
    }

    std::string_view sent = trim(text.substr(start, i + 1 - start));
    if (!sent.empty()) sentences.emplace_back(sent);
    start = next;
  }
  std::string_view tail = trim(text.substr(start));
  if (!tail.empty()) sentences.emplace_back(tail);
  return sentences;
}

TokenSeq tokenize(std::string_view text, const TokenizeOptions& opts) {
  TokenSeq seq;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_word_byte(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t b = i;
    while (i < text.size() && is_word_byte(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    std::string surface(text.substr(b, i - b));
    std::string token = opts.lowercase ? to_lower_ascii(surface) : surface;
    if (opts.drop_stopwords && is_stopword(token)) continue;
    if (opts.stem) token = porter_stem(token);
    seq.tokens.push_back(std::move(token));
    seq.surfaces.push_back(std::move(surface));
  }
  return seq;
}

NGramBag ngrams(const std::vector<std::string>& tokens, std::size_t n) {
  NGramBag bag;
  bag.n = n;
  if (n == 0 || tokens.size() < n) return bag;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (std::size_t j = 1; j < n; ++j) {
      key += '\x1f';
      key += tokens[i + j];
    }
    ++bag.counts[key];
  }
  return bag;
}

const std::vector<std::string>& stopword_list() {
  static const std::vector<std::string> words = {
      "a",        "about",    "above",     "after",    "again",      "against",
      "all",      "am",       "an",        "and",      "any",        "are",
      "as",       "at",       "be",        "because",  "been",       "before",
      "being",    "below",    "between",   "both",     "but",        "by",
      "can",      "cannot",   "could",     "did",      "do",         "does",
      "doing",    "down",     "during",    "each",     "few",        "for",
      "from",     "further",  "had",       "has",      "have",       "having",
      "he",       "her",      "here",      "hers",     "herself",    "him",
      "himself",  "his",      "how",       "i",        "if",         "in",
      "into",     "is",       "it",        "its",      "itself",     "just",
      "me",       "more",     "most",      "my",       "myself",     "no",
      "nor",      "not",      "now",       "of",       "off",        "on",
      "once",     "only",     "or",        "other",    "our",        "ours",
      "ourselves", "out",     "over",      "own",      "same",       "she",
      "should",   "so",       "some",      "such",     "than",       "that",
      "the",      "their",    "theirs",    "them",     "themselves", "then",
      "there",    "these",    "they",      "this",     "those",      "through",
      "to",       "too",      "under",     "until",    "up",         "very",
      "was",      "we",       "were",      "what",     "when",       "where",
      "which",    "while",    "who",       "whom",     "why",        "will",
      "with",     "would",    "you",       "your",     "yours",      "yourself",
      "yourselves", "also",   "although",  "among",    "else",       "ever",
      "every",    "however",  "neither",   "either",   "onto",       "per",
      "since",    "though",   "toward",    "towards",  "unless",     "upon",
      "via",      "within",   "without",   "yet",      "whether",    "might"};
  return words;
}

bool is_stopword(std::string_view token) {
  static const std::unordered_set<std::string> set(stopword_list().begin(),
                                                   stopword_list().end());
  return set.count(std::string(token)) > 0;
}

std::vector<std::string> load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open stopword list: " + path);
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view t = trim(line);
    if (!t.empty()) words.emplace_back(t);
  }
  return words;
}

TfIdfModel tfidf_fit(const std::vector<TokenSeq>& docs) {
  if (docs.empty()) throw DataError("tfidf_fit: empty corpus");
  TfIdfModel model;
  model.n_docs = docs.size();
  std::unordered_set<std::string> seen;
  for (const TokenSeq& doc : docs) {
    seen.clear();
    for (const std::string& t : doc.tokens) {
      if (seen.insert(t).second) ++model.df[t];
    }
  }
  return model;
}

SparseVector tfidf_vector(const TfIdfModel& model, const TokenSeq& tokens) {
  if (!model.fitted()) throw DataError("tfidf_vector: model not fitted");
  std::unordered_map<std::string, std::size_t> tf;
  for (const std::string& t : tokens.tokens) ++tf[t];
  SparseVector vec;
  const double n = static_cast<double>(model.n_docs);
  for (const auto& [term, count] : tf) {
    auto it = model.df.find(term);
    const double df = it == model.df.end() ? 0.0 : static_cast<double>(it->second);
    const double idf = std::log((1.0 + n) / (1.0 + df)) + 1.0;
    vec[term] = static_cast<double>(count) * idf;
  }
  return vec;
}

double cosine(const SparseVector& u, const SparseVector& v) {
  const SparseVector& small = u.size() <= v.size() ? u : v;
  const SparseVector& large = u.size() <= v.size() ? v : u;
  double dot = 0.0;
  for (const auto& [term, w] : small) {
    auto it = large.find(term);
    if (it != large.end()) dot += w * it->second;
  }
  double nu = 0.0;
  double nv = 0.0;
  for (const auto& [term, w] : u) nu += w * w;
  for (const auto& [term, w] : v) nv += w * w;
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return dot / (std::sqrt(nu) * std::sqrt(nv));
}

}  // namespace summpipe

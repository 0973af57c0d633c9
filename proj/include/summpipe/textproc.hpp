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

#ifndef SUMMPIPE_TEXTPROC_HPP
#define SUMMPIPE_TEXTPROC_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace summpipe {

/// Tokenized text: normalized word forms plus the raw surface forms they
/// came from. The two vectors are always the same length.
struct TokenSeq {
  std::vector<std::string> tokens;
  std::vector<std::string> surfaces;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
};

/// Multiset of n-grams. Keys are the n tokens joined with '\x1f'.
struct NGramBag {
  std::size_t n = 1;
  std::unordered_map<std::string, std::size_t> counts;

  std::size_t total() const;
};

/// Document-frequency statistics fitted over a collection of token
/// sequences. df(t) is the number of fitted documents containing t.
struct TfIdfModel {
  std::unordered_map<std::string, std::size_t> df;
  std::size_t n_docs = 0;

  bool fitted() const { return n_docs > 0; }
};

using SparseVector = std::unordered_map<std::string, double>;

struct TokenizeOptions {
  bool lowercase = true;
  bool stem = false;
  bool drop_stopwords = false;
};

/// Splits text into sentences. Boundaries sit at '.', '!' or '?' followed
/// by whitespace and an uppercase letter or digit; a fixed abbreviation
/// list suppresses false boundaries after e.g. "Dr.". Each sentence is a
/// trimmed substring of the input, so joining the result and collapsing
/// whitespace reproduces the input.
std::vector<std::string> split_sentences(std::string_view text);

/// Splits on runs of non-alphanumeric characters (bytes >= 0x80 count as
/// word characters). Options apply in order lowercase -> stopword-drop ->
/// stem. Surfaces keep the original spelling.
TokenSeq tokenize(std::string_view text, const TokenizeOptions& opts = {});

/// Sliding-window n-gram multiset; fewer than n tokens yields an empty bag.
NGramBag ngrams(const std::vector<std::string>& tokens, std::size_t n);

/// Porter (1980) stemmer. Words shorter than 3 characters are returned
/// unchanged.
std::string porter_stem(std::string_view word);

/// The embedded English stopword list (exactly 150 entries).
const std::vector<std::string>& stopword_list();
bool is_stopword(std::string_view token);

/// Loads a custom stopword list, one token per line, UTF-8.
std::vector<std::string> load_stopwords(const std::string& path);

/// Fits document frequencies over a corpus. Throws DataError on an empty
/// corpus.
TfIdfModel tfidf_fit(const std::vector<TokenSeq>& docs);

/// weight(t) = tf(t) * (ln((1+N)/(1+df(t))) + 1). The smoothed idf keeps
/// single-document corpora away from all-zero vectors. Throws DataError if
/// the model is unfitted.
SparseVector tfidf_vector(const TfIdfModel& model, const TokenSeq& tokens);

/// Cosine similarity in [0, 1] for nonnegative weights; a zero vector has
/// similarity 0 with everything.
double cosine(const SparseVector& u, const SparseVector& v);

}  // namespace summpipe

#endif  // SUMMPIPE_TEXTPROC_HPP

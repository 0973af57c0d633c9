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

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "summpipe/errors.hpp"
#include "summpipe/metrics.hpp"

#include "test_support.hpp"

using namespace summpipe;

namespace {

// The oracles below deliberately avoid the library's text pipeline: the
// test sentences are lowercase space-joined words, so plain whitespace
// splitting reproduces tokenization independently.
std::vector<std::string> split_ws(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::map<std::vector<std::string>, std::size_t> window_counts(
    const std::vector<std::string>& tokens, std::size_t n) {
  std::map<std::vector<std::string>, std::size_t> counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    counts[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)]++;
  }
  return counts;
}

struct PRF {
  double p, r, f1;
};

PRF rouge_n_oracle(const std::string& cand, const std::string& ref, std::size_t n) {
  const auto cand_counts = window_counts(split_ws(cand), n);
  const auto ref_counts = window_counts(split_ws(ref), n);
  double overlap = 0, cand_total = 0, ref_total = 0;
  for (const auto& [gram, c] : cand_counts) {
    cand_total += c;
    auto it = ref_counts.find(gram);
    if (it != ref_counts.end()) overlap += std::min(c, it->second);
  }
  for (const auto& [gram, c] : ref_counts) ref_total += c;
  const double p = cand_total > 0 ? overlap / cand_total : 0.0;
  const double r = ref_total > 0 ? overlap / ref_total : 0.0;
  const double f1 = (p + r > 0) ? 2 * p * r / (p + r) : 0.0;
  return {p, r, f1};
}

bool is_subsequence(const std::vector<std::string>& needle,
                    const std::vector<std::string>& hay) {
  std::size_t i = 0;
  for (const auto& token : hay) {
    if (i < needle.size() && token == needle[i]) ++i;
  }
  return i == needle.size();
}

// Exponential LCS: enumerate every candidate subsequence by bitmask.
// Only usable for |candidate| <= ~16; the tests stay at <= 10.
std::size_t lcs_oracle(const std::vector<std::string>& cand,
                       const std::vector<std::string>& ref) {
  std::size_t best = 0;
  const std::size_t n = cand.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::string> sub;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i)) sub.push_back(cand[i]);
    }
    if (sub.size() > best && is_subsequence(sub, ref)) best = sub.size();
  }
  return best;
}

double bleu_oracle(const std::string& cand, const std::string& ref,
                   std::size_t max_n) {
  const auto cand_tokens = split_ws(cand);
  const auto ref_tokens = split_ws(ref);
  if (cand_tokens.empty()) return 0.0;
  constexpr double eps = 1e-9;
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= max_n; ++n) {
    const auto cand_counts = window_counts(cand_tokens, n);
    const auto ref_counts = window_counts(ref_tokens, n);
    double total = 0, matched = 0;
    for (const auto& [gram, c] : cand_counts) {
      total += c;
      auto it = ref_counts.find(gram);
      if (it != ref_counts.end()) matched += std::min(c, it->second);
    }
    double p;
    if (total == 0) {
      p = eps;
    } else {
      if (matched == 0) matched = eps;
      p = matched / total;
    }
    log_sum += std::log(p);
  }
  const double c_len = static_cast<double>(cand_tokens.size());
  const double r_len = static_cast<double>(ref_tokens.size());
  const double bp = std::min(1.0, std::exp(1.0 - r_len / c_len));
  return bp * std::exp(log_sum / static_cast<double>(max_n));
}

}  // namespace

TEST_SUITE("rouge_n") {
  TEST_CASE("identity scores 1") {
    const auto s = rouge_n("the quick brown fox", "the quick brown fox", 1);
    CHECK(s.value == 1.0);
    CHECK(*s.precision == 1.0);
    CHECK(*s.recall == 1.0);
  }

  TEST_CASE("hand fixture: a b c vs a b d") {
    const auto s = rouge_n("a b c", "a b d", 1);
    CHECK(*s.precision == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(*s.recall == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(*s.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  }

  TEST_CASE("hand fixture: the cat sat vs the cat ate on the mat") {
    const auto s = rouge_n("the cat sat", "the cat ate on the mat", 1);
    CHECK(*s.recall == doctest::Approx(2.0 / 6.0).epsilon(1e-12));
    CHECK(*s.precision == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(*s.f1 == doctest::Approx(4.0 / 9.0).epsilon(1e-12));
    CHECK(s.value == *s.f1);
  }

  TEST_CASE("empty reference raises, n = 0 is a usage error") {
    CHECK_THROWS_AS(rouge_n("text", "", 1), DataError);
    CHECK_THROWS_AS(rouge_n("text", "...", 1), DataError);
    CHECK_THROWS_AS(rouge_n("a", "b", 0), UsageError);
  }

  TEST_CASE("f1 is symmetric under swapping candidate and reference") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
      const auto a = testsupport::random_sentence(rng, 1, 10);
      const auto b = testsupport::random_sentence(rng, 1, 10);
      for (std::size_t n : {std::size_t{1}, std::size_t{2}}) {
        const auto ab = rouge_n(a, b, n);
        const auto ba = rouge_n(b, a, n);
        CHECK(std::fabs(*ab.f1 - *ba.f1) <= 1e-12);
        CHECK(std::fabs(*ab.precision - *ba.recall) <= 1e-12);
      }
    }
  }

  TEST_CASE("matches the clipped-count oracle on random pairs") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 250; ++trial) {
      const auto cand = testsupport::random_sentence(rng, 1, 14);
      const auto ref = testsupport::random_sentence(rng, 1, 14);
      for (std::size_t n : {std::size_t{1}, std::size_t{2}}) {
        const PRF want = rouge_n_oracle(cand, ref, n);
        const auto got = rouge_n(cand, ref, n);
        CAPTURE(cand);
        CAPTURE(ref);
        CHECK(std::fabs(*got.precision - want.p) <= 1e-9);
        CHECK(std::fabs(*got.recall - want.r) <= 1e-9);
        CHECK(std::fabs(got.value - want.f1) <= 1e-9);
      }
    }
  }

  TEST_CASE("optional stemming folds inflected forms together") {
    const auto plain = rouge_n("the runner was running", "the runner runs", 1);
    const auto stemmed =
        rouge_n("the runner was running", "the runner runs", 1, /*stem=*/true);
    CHECK(stemmed.value > plain.value);
  }
}

TEST_SUITE("rouge_l") {
  TEST_CASE("identity and disjoint extremes") {
    CHECK(rouge_l("one two three", "one two three").value == 1.0);
    CHECK(rouge_l("aa bb", "cc dd").value == 0.0);
  }

  TEST_CASE("hand fixture: a b c d vs a c b d has LCS 3") {
    const auto s = rouge_l("a b c d", "a c b d");
    CHECK(*s.precision == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(*s.recall == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(s.value == doctest::Approx(0.75).epsilon(1e-12));
  }

  TEST_CASE("matches the exponential subsequence oracle on short pairs") {
    std::mt19937_64 rng(555);
    for (int trial = 0; trial < 250; ++trial) {
      const auto cand = testsupport::random_sentence(rng, 1, 10);
      const auto ref = testsupport::random_sentence(rng, 1, 10);
      const auto cand_tokens = split_ws(cand);
      const auto ref_tokens = split_ws(ref);
      const double lcs = static_cast<double>(lcs_oracle(cand_tokens, ref_tokens));
      const double p = lcs / static_cast<double>(cand_tokens.size());
      const double r = lcs / static_cast<double>(ref_tokens.size());
      const auto got = rouge_l(cand, ref);
      CAPTURE(cand);
      CAPTURE(ref);
      CHECK(std::fabs(*got.precision - p) <= 1e-9);
      CHECK(std::fabs(*got.recall - r) <= 1e-9);
    }
  }

  TEST_CASE("empty reference raises") {
    CHECK_THROWS_AS(rouge_l("x", ""), DataError);
  }
}

TEST_SUITE("bleu") {
  TEST_CASE("identity of length >= 4 scores exactly 1") {
    const std::string s = "the quick brown fox jumps";
    CHECK(bleu(s, {s}).value == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("hand fixture: BLEU-1 brevity penalty e^-1") {
    const auto s = bleu("the cat", {"the cat the cat"}, 1);
    CHECK(s.value == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
    CHECK(s.value == doctest::Approx(0.3679).epsilon(1e-4));
  }

  TEST_CASE("zero overlap collapses to (near) zero") {
    CHECK(bleu("aa bb cc dd", {"ee ff gg hh"}).value <= 1e-6);
  }

  TEST_CASE("empty candidate scores 0 without raising") {
    CHECK(bleu("", {"a reference"}).value == 0.0);
  }

  TEST_CASE("empty reference raises") {
    CHECK_THROWS_AS(bleu("text", {""}), DataError);
    CHECK_THROWS_AS(bleu("text", {}), DataError);
  }

  TEST_CASE("multi-reference clipping takes the best count per gram") {
    // "cat" appears twice in the second reference, so the doubled
    // candidate keeps full unigram precision.
    const auto s = bleu("cat cat", {"a cat", "cat cat"}, 1);
    CHECK(*&s.value == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("effective reference length prefers closest, ties to shorter") {
    // Candidate length 3. References of length 2 and 4: both distance 1,
    // shorter wins, so BP = 1 (r_len 2 < c_len 3).
    const auto s = bleu("cat dog bird", {"cat dog", "cat dog bird bird"}, 1);
    CHECK(s.value == doctest::Approx(1.0).epsilon(1e-9));
  }

  TEST_CASE("matches the direct-formula oracle on random pairs") {
    std::mt19937_64 rng(404);
    for (int trial = 0; trial < 250; ++trial) {
      const auto cand = testsupport::random_sentence(rng, 1, 12);
      const auto ref = testsupport::random_sentence(rng, 1, 12);
      const double want = bleu_oracle(cand, ref, 4);
      const auto got = bleu(cand, {ref});
      CAPTURE(cand);
      CAPTURE(ref);
      CHECK(std::fabs(got.value - want) <= 1e-9);
    }
  }
}

TEST_SUITE("meteor_lite") {
  TEST_CASE("hand fixture: identical three-word sentence") {
    const auto s = meteor_lite("the cat sat", "the cat sat");
    // matches=3, chunks=1, penalty = 0.5/27
    CHECK(s.value == doctest::Approx(1.0 - 0.5 / 27.0).epsilon(1e-9));
    CHECK(s.value == doctest::Approx(0.9815).epsilon(1e-4));
  }

  TEST_CASE("stem stage: running vs runs scores exactly one half") {
    const auto s = meteor_lite("running", "runs");
    CHECK(s.value == doctest::Approx(0.5).epsilon(1e-12));
  }

  TEST_CASE("zero overlap scores zero") {
    CHECK(meteor_lite("aa bb", "cc dd").value == 0.0);
    CHECK(meteor_lite("", "cc dd").value == 0.0);
  }

  TEST_CASE("synonym stage fires only with a table") {
    const auto table = load_synonyms(testsupport::data_path("synonyms.tsv"));
    CHECK(meteor_lite("car", "auto").value == 0.0);
    const auto s = meteor_lite("car", "auto", &table);
    CHECK(s.value == doctest::Approx(0.5).epsilon(1e-12));
    // and symmetric lookup direction
    CHECK(meteor_lite("auto", "car", &table).value ==
          doctest::Approx(0.5).epsilon(1e-12));
  }

  TEST_CASE("chunk counting: scrambled order pays a penalty") {
    const auto in_order = meteor_lite("one two three four", "one two three four");
    const auto scrambled = meteor_lite("four three two one", "one two three four");
    // Same matches (4/4), different chunk counts -> lower score.
    CHECK(*scrambled.precision == 1.0);
    CHECK(*scrambled.recall == 1.0);
    CHECK(scrambled.value < in_order.value);
    // 4 chunks of 4 matches: penalty = 0.5 * 1^3 = 0.5
    CHECK(scrambled.value == doctest::Approx(0.5).epsilon(1e-12));
  }

  TEST_CASE("F-mean weights recall nine to one") {
    // candidate covers half the reference: P=1, R=0.5
    const auto s = meteor_lite("alpha beta", "alpha beta gamma delta");
    const double f_mean = 10.0 * 1.0 * 0.5 / (0.5 + 9.0 * 1.0);
    CHECK(*s.f1 == doctest::Approx(f_mean).epsilon(1e-12));
  }

  TEST_CASE("empty reference raises") {
    CHECK_THROWS_AS(meteor_lite("x", ""), DataError);
  }
}

TEST_SUITE("rouge_we") {
  EmbeddingTable table() {
    return load_embeddings(testsupport::data_path("embeddings.txt"));
  }

  TEST_CASE("two-word fixture with cosine 0.9") {
    const auto t = table();
    const auto s = rouge_we("boat", "ship", t);
    CHECK(*s.precision == doctest::Approx(0.9).epsilon(1e-9));
    CHECK(*s.recall == doctest::Approx(0.9).epsilon(1e-9));
    CHECK(*s.f1 == doctest::Approx(0.9).epsilon(1e-9));
  }

  TEST_CASE("identical tokens bypass the embedding entirely") {
    const auto t = table();
    const auto exact = rouge_we("zzz yyy", "zzz yyy", t);
    CHECK(exact.value == 1.0);
  }

  TEST_CASE("below-threshold pairs and OOV pairs contribute nothing") {
    const auto t = table();
    CHECK(rouge_we("dog", "car", t).value == 0.0);     // cos 0.6 < 0.8
    CHECK(rouge_we("zzz", "qqq", t).value == 0.0);     // both OOV
  }

  TEST_CASE("tau above 1 degenerates to exact rouge-1") {
    const auto t = table();
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
      const auto cand = testsupport::random_sentence(rng, 1, 10);
      const auto ref = testsupport::random_sentence(rng, 1, 10);
      const auto soft = rouge_we(cand, ref, t, /*tau=*/1.01);
      const auto hard = rouge_n(cand, ref, 1);
      CAPTURE(cand);
      CAPTURE(ref);
      CHECK(std::fabs(soft.value - hard.value) <= 1e-12);
      CHECK(std::fabs(*soft.precision - *hard.precision) <= 1e-12);
      CHECK(std::fabs(*soft.recall - *hard.recall) <= 1e-12);
    }
  }

  TEST_CASE("soft match beats hard rouge-1 when near-synonyms appear") {
    const auto t = table();
    const auto soft = rouge_we("the boat left", "the ship left", t);
    const auto hard = rouge_n("the boat left", "the ship left", 1);
    CHECK(soft.value > hard.value);
  }

  TEST_CASE("empty reference raises") {
    const auto t = table();
    CHECK_THROWS_AS(rouge_we("x", "", t), DataError);
  }
}

TEST_SUITE("bertscore") {
  TEST_CASE("identical sequences score 1") {
    const std::vector<std::vector<double>> vecs = {{1, 0}, {0.5, 0.5}};
    const auto s = bertscore(vecs, vecs);
    CHECK(s.value == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("mutually orthogonal sequences score 0") {
    const std::vector<std::vector<double>> a = {{1, 0, 0}};
    const std::vector<std::vector<double>> b = {{0, 1, 0}, {0, 0, 1}};
    CHECK(bertscore(a, b).value == 0.0);
  }

  TEST_CASE("2x2 fixture matches the exhaustive max oracle") {
    // cos(c0, r0) = 1, cos(c0, r1) = 0; cos(c1, r0) = 0, cos(c1, r1) ~ 0.5
    const std::vector<std::vector<double>> cand = {{1, 0}, {0, 1}};
    const std::vector<std::vector<double>> ref = {
        {1, 0}, {std::sqrt(3.0) / 2.0, 0.5}};
    const auto s = bertscore(cand, ref);
    // R: r0 best = 1 (vs c0); r1 best = max(sqrt(3)/2, 0.5)
    const double r = (1.0 + std::sqrt(3.0) / 2.0) / 2.0;
    // P: c0 best = 1; c1 best = 0.5
    const double p = (1.0 + 0.5) / 2.0;
    CHECK(*s.recall == doctest::Approx(r).epsilon(1e-12));
    CHECK(*s.precision == doctest::Approx(p).epsilon(1e-12));
    CHECK(s.value == doctest::Approx(2 * p * r / (p + r)).epsilon(1e-12));
  }

  TEST_CASE("idf weights reweight the means") {
    const std::vector<std::vector<double>> cand = {{1, 0}, {0, 1}};
    const std::vector<std::vector<double>> ref = {{1, 0}, {0, -1}};
    // Unweighted: P = (1 + 0)/2 (cos(c1, r1) = -1 clamps at best 0 vs r0? no:
    // best over refs of cos; cos(c1, r0) = 0, cos(c1, r1) = -1 -> best 0).
    const auto plain = bertscore(cand, ref);
    CHECK(*plain.precision == doctest::Approx(0.5).epsilon(1e-12));
    const std::vector<double> cand_idf = {1.0, 0.0};  // ignore the second token
    const auto weighted = bertscore(cand, ref, &cand_idf, nullptr);
    CHECK(*weighted.precision == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("dimension mismatch and empty input raise") {
    const std::vector<std::vector<double>> a = {{1, 0}};
    const std::vector<std::vector<double>> bad = {{1, 0, 0}};
    CHECK_THROWS_AS(bertscore(a, bad), DataError);
    CHECK_THROWS_AS(bertscore({}, a), DataError);
    CHECK_THROWS_AS(bertscore(a, {}), DataError);
    const std::vector<double> idf = {1.0, 2.0};
    CHECK_THROWS_AS(bertscore(a, a, &idf, nullptr), DataError);
  }
}

TEST_SUITE("metric registry") {
  TEST_CASE("five ascending families with direction in the description") {
    const auto& families = metric_families();
    REQUIRE(families.size() == 5);
    for (const auto& info : families) {
      CAPTURE(info.name);
      CHECK(info.higher_is_better);
      CHECK_FALSE(info.description.empty());
      CHECK(info.description.find("higher is better") != std::string::npos);
    }
  }

  TEST_CASE("metric_names lists the seven concrete evaluators") {
    const auto& names = metric_names();
    CHECK(names == std::vector<std::string>{"rouge-1", "rouge-2", "rouge-l",
                                            "bleu", "meteor", "rouge-we",
                                            "bertscore"});
    for (const auto& name : names) {
      CHECK(metric_info(name).higher_is_better);
    }
  }

  TEST_CASE("metric_info rejects unknown names") {
    CHECK_THROWS_AS(metric_info("energy"), UsageError);
  }
}

TEST_SUITE("resolve_metric") {
  TEST_CASE("plain metrics resolve without resources") {
    MetricResources res;
    for (const char* name : {"rouge-1", "rouge-2", "rouge-l", "bleu", "meteor"}) {
      CAPTURE(name);
      const MetricFn fn = resolve_metric(name, res);
      const MetricScore s = fn("the cat sat", "the cat sat");
      CHECK(s.value > 0.0);
    }
  }

  TEST_CASE("resolved rouge-1 equals the direct call") {
    MetricResources res;
    const MetricFn fn = resolve_metric("rouge-1", res);
    CHECK(fn("a b c", "a b d").value ==
          rouge_n("a b c", "a b d", 1).value);
  }

  TEST_CASE("stem flag routes through to the rouge family") {
    MetricResources res;
    res.stem = true;
    const MetricFn fn = resolve_metric("rouge-1", res);
    CHECK(fn("running", "runs").value == 1.0);
  }

  TEST_CASE("rouge-we needs embeddings, bertscore needs embeddings") {
    MetricResources res;
    CHECK_THROWS_AS(resolve_metric("rouge-we", res), DataError);
    CHECK_THROWS_AS(resolve_metric("bertscore", res), DataError);

    const EmbeddingTable table =
        load_embeddings(testsupport::data_path("embeddings.txt"));
    res.embeddings = &table;
    CHECK(resolve_metric("rouge-we", res)("boat", "ship").value ==
          doctest::Approx(0.9).epsilon(1e-9));
    // bertscore over static vectors: identical words -> 1.
    CHECK(resolve_metric("bertscore", res)("boat car", "boat car").value ==
          doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("unknown names are usage errors") {
    MetricResources res;
    CHECK_THROWS_AS(resolve_metric("rouge-9", res), UsageError);
  }

  TEST_CASE("resolved bertscore treats OOV words as zero vectors") {
    const EmbeddingTable table =
        load_embeddings(testsupport::data_path("embeddings.txt"));
    MetricResources res;
    res.embeddings = &table;
    const MetricFn fn = resolve_metric("bertscore", res);
    // OOV on both sides -> all-zero vectors -> cosine 0 everywhere.
    CHECK(fn("zzz", "qqq").value == 0.0);
    // Empty candidate scores 0; empty reference is a data error.
    CHECK(fn("", "boat").value == 0.0);
    CHECK_THROWS_AS(fn("boat", ""), DataError);
  }

  TEST_CASE("every headline value stays within the unit interval") {
    std::mt19937_64 rng(999);
    MetricResources res;
    const EmbeddingTable table =
        load_embeddings(testsupport::data_path("embeddings.txt"));
    const SynonymTable synonyms =
        load_synonyms(testsupport::data_path("synonyms.tsv"));
    res.embeddings = &table;
    res.synonyms = &synonyms;
    std::vector<MetricFn> fns;
    for (const auto& name : metric_names()) {
      fns.push_back(resolve_metric(name, res));
    }
    for (int trial = 0; trial < 60; ++trial) {
      const auto cand = testsupport::random_sentence(rng, 0, 10);
      const auto ref = testsupport::random_sentence(rng, 1, 10);
      for (const auto& fn : fns) {
        const double v = fn(cand, ref).value;
        CHECK(v >= 0.0);
        CHECK(v <= 1.0 + 1e-12);
      }
    }
  }
}

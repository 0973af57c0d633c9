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

// Release gate: ten independently checkable criteria, one line each.
// Returns nonzero when any criterion fails. Oracles are implemented here
// from first principles instead of calling back into the library paths
// they are meant to check.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "summpipe/adapter.hpp"
#include "summpipe/assembly.hpp"
#include "summpipe/corpus.hpp"
#include "summpipe/errors.hpp"
#include "summpipe/metrics.hpp"
#include "summpipe/selection.hpp"
#include "summpipe/summarize.hpp"
#include "summpipe/textproc.hpp"

#include "test_support.hpp"

#ifndef SUMMPIPE_CLI_PATH
#define SUMMPIPE_CLI_PATH "summpipe"
#endif

namespace {

using namespace summpipe;
namespace fs = std::filesystem;

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;  // keep the first failure
    ok = false;
  }
  void expect(bool condition, const std::string& why) {
    if (!condition) fail(why);
  }
};

// ---- shared helpers -------------------------------------------------------

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
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    counts[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)]++;
  }
  return counts;
}

struct RunResult {
  int exit_code = -1;
  std::string stdout_text;
  std::string stderr_text;
};

// Runs the CLI through the shell with stdout/stderr captured in files.
RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const std::string base =
      (fs::temp_directory_path() / ("summpipe-accept-" + std::to_string(::getpid()) +
                                    "-" + std::to_string(counter++)))
          .string();
  const std::string out_file = base + ".out";
  const std::string err_file = base + ".err";
  const std::string command = std::string("'") + SUMMPIPE_CLI_PATH + "' " + args +
                              " >'" + out_file + "' 2>'" + err_file + "'";
  const int status = std::system(command.c_str());
  RunResult result;
  if (status == -1) {
    result.exit_code = -1;
  } else if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else {
    result.exit_code = 128;
  }
  result.stdout_text = fs::exists(out_file) ? testsupport::read_file(out_file) : "";
  result.stderr_text = fs::exists(err_file) ? testsupport::read_file(err_file) : "";
  fs::remove(out_file);
  fs::remove(err_file);
  return result;
}

std::string quoted(const std::string& path) { return "'" + path + "'"; }

// ---- criterion 1: registry fidelity ---------------------------------------

Outcome check_registry_fidelity() {
  Outcome out;
  struct Row {
    const char* name;
    const char* domain;
    std::uint64_t size;
    double src_len;
    double tgt_len;
    bool query, multi, dialogue;
    std::vector<const char*> languages;
  };
  // The ten rows restated by hand; any drift in the embedded registry
  // breaks the comparison below.
  const std::vector<Row> rows = {
      {"CNN/DM(3.0.0)", "News", 300'000, 781, 56, false, false, false, {"En"}},
      {"Multi-News", "News", 56'000, 2100, 263.8, false, true, false, {"En"}},
      {"SAMSum", "Open-domain", 16'000, 94, 20, false, false, true, {"En"}},
      {"XSum", "News", 226'000, 431, 23.3, false, false, false, {"En"}},
      {"ScisummNet", "Scientific articles", 1'000, 4700, 150, false, false,
       false, {"En"}},
      {"QMSum", "Meetings", 1'000, 9000, 69.6, true, false, true, {"En"}},
      {"ArXiv", "Scientific papers", 215'000, 4900, 220, false, false, false,
       {"En"}},
      {"PubMedQA", "Biomedial", 273'500, 239, 43, true, false, false, {"En"}},
      {"SummScreen", "TV shows", 26'900, 6600, 337.4, false, false, true, {"En"}},
      {"MLSum", "News", 1'500'000, 635, 31.8, false, false, false,
       {"Fr", "De", "Es", "Ru", "Tr"}},
  };

  const auto& registry = dataset_registry();
  out.expect(registry.size() == rows.size(), "registry row count");
  for (const Row& row : rows) {
    const DatasetInfo* info = nullptr;
    try {
      info = &registry_lookup(row.name);
    } catch (const std::exception& e) {
      out.fail(std::string("lookup '") + row.name + "': " + e.what());
      continue;
    }
    out.expect(info->name == row.name, std::string(row.name) + ": name");
    out.expect(info->domain == row.domain, std::string(row.name) + ": domain");
    out.expect(info->size == row.size, std::string(row.name) + ": size");
    out.expect(info->src_length == row.src_len, std::string(row.name) + ": src length");
    out.expect(info->tgt_length == row.tgt_len, std::string(row.name) + ": tgt length");
    out.expect(info->flags.is_query_based == row.query,
               std::string(row.name) + ": query flag");
    out.expect(info->flags.is_multi_document == row.multi,
               std::string(row.name) + ": multi-doc flag");
    out.expect(info->flags.is_dialogue_based == row.dialogue,
               std::string(row.name) + ": dialogue flag");
    std::vector<std::string> langs(row.languages.begin(), row.languages.end());
    out.expect(info->languages == langs, std::string(row.name) + ": languages");
  }
  return out;
}

// ---- criterion 2: metric oracles ------------------------------------------

Outcome check_metric_oracles() {
  Outcome out;
  std::mt19937_64 rng(20'260'822);
  constexpr double kTol = 1e-9;

  for (int trial = 0; trial < 500; ++trial) {
    const std::string cand = testsupport::random_sentence(rng, 1, 10);
    const std::string ref = testsupport::random_sentence(rng, 1, 10);
    const auto cand_tokens = split_ws(cand);
    const auto ref_tokens = split_ws(ref);

    // rouge-1 / rouge-2 against clipped-count enumeration.
    for (std::size_t n : {std::size_t{1}, std::size_t{2}}) {
      const auto cand_counts = window_counts(cand_tokens, n);
      const auto ref_counts = window_counts(ref_tokens, n);
      double overlap = 0, cand_total = 0, ref_total = 0;
      for (const auto& [gram, c] : cand_counts) {
        cand_total += static_cast<double>(c);
        auto it = ref_counts.find(gram);
        if (it != ref_counts.end())
          overlap += static_cast<double>(std::min(c, it->second));
      }
      for (const auto& [gram, c] : ref_counts) ref_total += static_cast<double>(c);
      const double p = cand_total > 0 ? overlap / cand_total : 0.0;
      const double r = ref_total > 0 ? overlap / ref_total : 0.0;
      const double f1 = (p + r > 0) ? 2 * p * r / (p + r) : 0.0;
      const MetricScore got = rouge_n(cand, ref, n);
      if (std::fabs(got.value - f1) > kTol ||
          std::fabs(*got.precision - p) > kTol ||
          std::fabs(*got.recall - r) > kTol) {
        out.fail("rouge-" + std::to_string(n) + " mismatch on \"" + cand +
                 "\" vs \"" + ref + "\"");
      }
    }

    // rouge-l against exponential subsequence enumeration (<= 10 tokens).
    {
      std::size_t best = 0;
      const std::size_t m = cand_tokens.size();
      for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
        std::vector<const std::string*> sub;
        for (std::size_t i = 0; i < m; ++i) {
          if (mask & (std::size_t{1} << i)) sub.push_back(&cand_tokens[i]);
        }
        if (sub.size() <= best) continue;
        std::size_t j = 0;
        for (const auto& token : ref_tokens) {
          if (j < sub.size() && token == *sub[j]) ++j;
        }
        if (j == sub.size()) best = sub.size();
      }
      const double p = static_cast<double>(best) / static_cast<double>(m);
      const double r =
          static_cast<double>(best) / static_cast<double>(ref_tokens.size());
      const double f1 = (p + r > 0) ? 2 * p * r / (p + r) : 0.0;
      const MetricScore got = rouge_l(cand, ref);
      if (std::fabs(*got.precision - p) > kTol ||
          std::fabs(*got.recall - r) > kTol ||
          std::fabs(got.value - f1) > kTol) {
        out.fail("rouge-l mismatch on \"" + cand + "\" vs \"" + ref + "\"");
      }
    }

    // bleu against direct formula evaluation with the same smoothing.
    {
      constexpr double eps = 1e-9;
      double log_sum = 0.0;
      for (std::size_t n = 1; n <= 4; ++n) {
        const auto cand_counts = window_counts(cand_tokens, n);
        const auto ref_counts = window_counts(ref_tokens, n);
        double total = 0, matched = 0;
        for (const auto& [gram, c] : cand_counts) {
          total += static_cast<double>(c);
          auto it = ref_counts.find(gram);
          if (it != ref_counts.end())
            matched += static_cast<double>(std::min(c, it->second));
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
      const double bp = std::min(
          1.0, std::exp(1.0 - static_cast<double>(ref_tokens.size()) /
                                  static_cast<double>(cand_tokens.size())));
      const double want = bp * std::exp(log_sum / 4.0);
      const MetricScore got = bleu(cand, {ref});
      if (std::fabs(got.value - want) > kTol) {
        out.fail("bleu mismatch on \"" + cand + "\" vs \"" + ref + "\"");
      }
    }
  }
  return out;
}

// ---- criterion 3: hand-computed fixtures ----------------------------------

Outcome check_hand_fixtures() {
  Outcome out;
  const auto close4 = [](double got, double want) {
    return std::fabs(got - want) < 0.5e-4;
  };
  const MetricScore r1 = rouge_n("the cat sat", "the cat ate on the mat", 1);
  out.expect(close4(r1.value, 4.0 / 9.0), "rouge-1 f1 != 4/9");
  out.expect(close4(*r1.recall, 2.0 / 6.0), "rouge-1 recall != 2/6");
  out.expect(close4(*r1.precision, 2.0 / 3.0), "rouge-1 precision != 2/3");

  const MetricScore b1 = bleu("the cat", {"the cat the cat"}, 1);
  out.expect(close4(b1.value, 0.3679), "bleu-1 != 0.3679");

  const MetricScore m = meteor_lite("the cat sat", "the cat sat");
  out.expect(close4(m.value, 0.9815), "meteor != 0.9815");

  out.expect(close4(meteor_lite("running", "runs").value, 0.5),
             "meteor stem match != 0.5");
  out.expect(close4(rouge_l("a b c d", "a c b d").value, 0.75),
             "rouge-l != 0.75");

  const EmbeddingTable table =
      load_embeddings(testsupport::data_path("embeddings.txt"));
  out.expect(close4(rouge_we("boat", "ship", table).value, 0.9),
             "rouge-we != 0.9");
  return out;
}

// ---- criterion 4: pareto brute force --------------------------------------

Outcome check_pareto() {
  Outcome out;
  const std::vector<std::string> metrics = {"rouge-1", "rouge-2", "rouge-l",
                                            "bleu", "meteor"};
  std::vector<std::string> ids;
  for (int i = 0; i < 10; ++i) ids.push_back("c" + std::to_string(i));

  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> level(0, 4);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::vector<double>> means(10, std::vector<double>(5));
    ScoreMatrix matrix;
    matrix.metric_names = metrics;
    for (std::size_t i = 0; i < 10; ++i) {
      for (std::size_t k = 0; k < 5; ++k) {
        means[i][k] = static_cast<double>(level(rng)) / 4.0;
        matrix.means[ids[i]][metrics[k]] = means[i][k];
      }
    }
    std::vector<std::string> survivors;
    std::vector<Elimination> eliminated;
    pareto_filter(matrix, ids, &survivors, &eliminated);

    std::set<std::string> front;
    for (std::size_t i = 0; i < 10; ++i) {
      bool dominated = false;
      for (std::size_t j = 0; j < 10 && !dominated; ++j) {
        if (i == j) continue;
        bool all = true;
        for (std::size_t k = 0; k < 5; ++k) {
          if (!(means[j][k] > means[i][k])) {
            all = false;
            break;
          }
        }
        dominated = all;
      }
      if (!dominated) front.insert(ids[i]);
    }
    const std::set<std::string> got(survivors.begin(), survivors.end());
    if (got != front) {
      out.fail("front mismatch at trial " + std::to_string(trial));
      break;
    }
  }
  return out;
}

// ---- criterion 5: full-budget exactness -----------------------------------

Outcome check_full_budget() {
  Outcome out;
  Dataset dataset;
  for (int i = 0; i < 6; ++i) {
    SummInstance inst;
    inst.source = "doc " + std::to_string(i);
    inst.reference = "ref " + std::to_string(i);
    dataset.instances.push_back(inst);
  }
  const std::vector<std::string> pool = {"a", "b", "c"};
  SelectionConfig config;
  config.initial_resource = dataset.size();  // d >= |dataset|
  config.metrics = {"rouge-1", "bleu"};
  const CellEvalFn evaluate = [](std::size_t candidate, const SummInstance&) {
    CellResult cell;
    switch (candidate) {
      case 0: cell.metric_scores = {0.9, 0.3}; break;   // a
      case 1: cell.metric_scores = {0.3, 0.9}; break;   // b
      default: cell.metric_scores = {0.5, 0.2}; break;  // c, beaten by a
    }
    return cell;
  };

  std::string first_bytes;
  for (int rerun = 0; rerun < 5; ++rerun) {
    const SelectionResult result = run_selection(pool, dataset, config, evaluate);
    out.expect(result.survivors == std::vector<std::string>{"a", "b"},
               "survivors are not the Pareto front {a, b}");
    out.expect(result.rounds.size() == 1, "full-budget run took extra rounds");
    if (!result.rounds.empty()) {
      out.expect(result.rounds[0].sample_size == dataset.size(),
                 "round 1 did not see the full dataset");
      out.expect(result.rounds[0].eliminated.size() == 1 &&
                     result.rounds[0].eliminated[0].id == "c",
                 "c was not the single elimination");
    }
    const std::string bytes = selection_result_to_json(result, config);
    if (rerun == 0) {
      first_bytes = bytes;
    } else {
      out.expect(bytes == first_bytes,
                 "rerun " + std::to_string(rerun + 1) + " diverged");
    }
  }
  return out;
}

// ---- criterion 6: successive-halving audit --------------------------------

Outcome check_halving_audit() {
  Outcome out;
  const Dataset dataset =
      load_jsonl(testsupport::data_path("single12.jsonl"), DatasetFlags{});
  out.expect(dataset.size() == 12, "end-to-end fixture must have 12 instances");

  CandidatePool pool;
  pool.candidates.push_back(PipelineSpec{});
  PipelineSpec lexrank;
  lexrank.base.kind = ModelKind::lexrank;
  pool.candidates.push_back(lexrank);
  MetricResources resources;

  for (std::uint64_t seed : {0ULL, 7ULL, 41ULL, 113ULL}) {
    for (std::uint64_t d : {2ULL, 4ULL}) {
      SelectionConfig config;
      config.initial_resource = d;
      config.resource_factor = 2;
      config.metrics = {"rouge-1", "bleu"};
      config.seed = seed;

      const SelectionResult result = select(pool, dataset, config, resources);
      std::vector<std::string> active = result.pool_ids;
      std::uint64_t want = d;
      for (std::size_t r = 0; r < result.rounds.size(); ++r) {
        const SelectionRound& round = result.rounds[r];
        out.expect(round.sample_size ==
                       std::min<std::uint64_t>(want, dataset.size()),
                   "round size != min(|D|, d*k^r)");
        out.expect(round.sample_seed == seed + r, "sample seed drift");
        // Survivor chain: scored candidates must be a subset of the
        // candidates still active after the previous round.
        for (const auto& [id, per_metric] : round.scores.per_instance) {
          out.expect(std::find(active.begin(), active.end(), id) != active.end(),
                     "scored candidate '" + id + "' was already out");
        }
        std::set<std::string> removed;
        for (const auto& e : round.eliminated) removed.insert(e.id);
        for (const auto& f : round.failed) removed.insert(f.id);
        std::vector<std::string> next;
        for (const std::string& id : active) {
          if (removed.count(id) == 0) next.push_back(id);
        }
        active = next;
        want *= config.resource_factor;
      }
      out.expect(result.survivors == active, "audit trail and survivors differ");
      out.expect(!result.survivors.empty(), "no survivors");
    }
  }
  return out;
}

// ---- criterion 7: assembly counts -----------------------------------------

Outcome check_assembly_counts() {
  Outcome out;
  const ModelRegistry registry = default_registry();
  const std::size_t bases = registry.base_models.size();
  out.expect(bases == 2, "native registry must hold 2 base models");

  DatasetFlags qmsum_like;
  qmsum_like.is_query_based = true;
  qmsum_like.is_dialogue_based = true;
  out.expect(assemble(qmsum_like, registry).candidates.size() == 4,
             "query+dialogue flags must yield 4 pipelines");

  DatasetFlags multinews_like;
  multinews_like.is_multi_document = true;
  out.expect(assemble(multinews_like, registry).candidates.size() == 2 * bases,
             "multi-doc flags must yield strategies x bases");

  out.expect(assemble(DatasetFlags{}, registry).candidates.size() == bases,
             "flag-free assembly must yield the base models only");

  for (int mask = 0; mask < 8; ++mask) {
    DatasetFlags flags;
    flags.is_query_based = (mask & 1) != 0;
    flags.is_dialogue_based = (mask & 2) != 0;
    flags.is_multi_document = (mask & 4) != 0;
    const std::size_t want =
        (flags.is_query_based ? registry.retrievers.size() : 1) *
        (flags.is_dialogue_based ? registry.dialogue_handlers.size() : 1) *
        (flags.is_multi_document ? registry.multidoc_strategies.size() : 1) *
        bases;
    out.expect(assemble(flags, registry).candidates.size() == want,
               "stage-product law broken for mask " + std::to_string(mask));
  }
  return out;
}

// ---- criterion 8: graph-ranking numerics ----------------------------------

Outcome check_graph_numerics() {
  Outcome out;

  // Dense power-iteration oracle on a <= 6-sentence fixture. The weight
  // matrix is derived by hand from the content-word overlaps.
  {
    const std::vector<std::string> sentences = {
        "cat dog bird", "cat dog fish", "fish bird whale", "whale squid",
    };
    const double l3 = std::log(3.0), l2 = std::log(2.0);
    std::vector<std::vector<double>> w(4, std::vector<double>(4, 0.0));
    w[0][1] = w[1][0] = 2.0 / (l3 + l3);
    w[0][2] = w[2][0] = 1.0 / (l3 + l3);
    w[1][2] = w[2][1] = 1.0 / (l3 + l3);
    w[2][3] = w[3][2] = 1.0 / (l3 + l2);

    std::vector<double> degree(4, 0.0);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) degree[i] += w[i][j];
    }
    std::vector<double> p(4, 0.25), next(4);
    for (int iter = 0; iter < 100000; ++iter) {
      double dangling = 0.0, delta = 0.0;
      for (int j = 0; j < 4; ++j) {
        if (degree[j] == 0.0) dangling += p[j];
      }
      for (int i = 0; i < 4; ++i) {
        double acc = 0.15 / 4.0 + 0.85 * dangling / 4.0;
        for (int j = 0; j < 4; ++j) {
          if (degree[j] > 0.0) acc += 0.85 * w[j][i] / degree[j] * p[j];
        }
        next[i] = acc;
        delta += std::fabs(next[i] - p[i]);
      }
      p = next;
      if (delta < 1e-13) break;
    }
    double sum = 0.0;
    for (double v : p) sum += v;
    for (double& v : p) v /= sum;

    ModelSpec spec;
    spec.tolerance = 1e-12;
    spec.max_iterations = 20000;
    const RankedSentences ranked = textrank_scores(sentences, spec);
    for (int i = 0; i < 4; ++i) {
      out.expect(std::fabs(ranked.scores[static_cast<std::size_t>(i)] - p[i]) <=
                     1e-6,
                 "textrank score " + std::to_string(i) + " off the oracle");
    }
  }

  // Sum-to-one and convergence bounds on random fixtures, both models.
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::string> sentences;
    const std::size_t n = 2 + rng() % 14;
    for (std::size_t i = 0; i < n; ++i) {
      sentences.push_back(testsupport::random_sentence(rng, 3, 9));
    }
    for (ModelKind kind : {ModelKind::textrank, ModelKind::lexrank}) {
      ModelSpec spec;
      spec.kind = kind;
      const RankedSentences ranked = kind == ModelKind::textrank
                                         ? textrank_scores(sentences, spec)
                                         : lexrank_scores(sentences, spec);
      double sum = 0.0;
      for (double s : ranked.scores) sum += s;
      out.expect(std::fabs(sum - 1.0) <= 1e-6, "scores do not sum to 1");
      out.expect(ranked.converged, "ranking did not converge");
      out.expect(ranked.iterations <= 100, "convergence exceeded 100 iterations");
    }
  }

  // Extractive guarantee over a 50-document random corpus.
  for (int doc_i = 0; doc_i < 50; ++doc_i) {
    std::vector<std::string> sentences;
    const std::size_t n = 3 + rng() % 10;
    for (std::size_t i = 0; i < n; ++i) {
      std::string s = testsupport::random_sentence(rng, 3, 8);
      s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
      s += '.';
      sentences.push_back(s);
    }
    std::string doc;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      if (i > 0) doc += ' ';
      doc += sentences[i];
    }
    ModelSpec spec;
    spec.kind = doc_i % 2 == 0 ? ModelKind::textrank : ModelKind::lexrank;
    spec.budget = 1 + static_cast<std::size_t>(doc_i) % 4;
    const std::string summary = spec.kind == ModelKind::textrank
                                    ? textrank_summarize(doc, spec)
                                    : lexrank_summarize({doc}, spec);
    for (const std::string& s : split_sentences(summary)) {
      out.expect(std::find(sentences.begin(), sentences.end(), s) !=
                     sentences.end(),
                 "summary sentence is not verbatim source text");
    }
  }
  return out;
}

// ---- criterion 9: end-to-end determinism ----------------------------------

Outcome check_cli_determinism() {
  Outcome out;
  testsupport::TempDir dir;
  const std::string dataset = testsupport::data_path("single12.jsonl");
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"run1", "--jobs 1"},
      {"run2", "--jobs 1"},
      {"run4", "--jobs 4"},
  };
  for (const auto& [name, jobs] : runs) {
    const std::string out_dir = dir.file(name);
    const RunResult r = run_cli("select --dataset " + quoted(dataset) +
                                " --metrics rouge-1,bleu --d 4 --k 2 --seed 7 " +
                                jobs + " --out " + quoted(out_dir));
    out.expect(r.exit_code == 0,
               name + " exited " + std::to_string(r.exit_code) + ": " +
                   r.stderr_text);
  }
  if (!out.ok) return out;

  const std::vector<std::string> files = {
      "report.json",        "summary.txt",         "scatter-rouge-1.svg",
      "scatter-rouge-1.json", "scatter-bleu.svg",  "scatter-bleu.json",
      "radar.txt",          "summvis.jsonl",
  };
  for (const std::string& file : files) {
    const fs::path p1 = fs::path(dir.file("run1")) / file;
    out.expect(fs::exists(p1), file + " missing from run1");
    if (!fs::exists(p1)) continue;
    const std::string bytes = testsupport::read_file(p1.string());
    for (const char* other : {"run2", "run4"}) {
      const fs::path po = fs::path(dir.file(other)) / file;
      out.expect(fs::exists(po) &&
                     testsupport::read_file(po.string()) == bytes,
                 file + " differs between run1 and " + other);
    }
  }
  return out;
}

// ---- criterion 10: protocol conformance -----------------------------------

Outcome check_protocol() {
  Outcome out;

  // Direct wire-protocol round trips.
  {
    AdapterProcess echo("echo", {"python3", testsupport::adapter_path("echo.py")},
                        10'000);
    out.expect(echo.summarize("body text", std::nullopt) == "body text",
               "echo adapter altered the source");
  }
  {
    AdapterProcess trunc(
        "truncate", {"python3", testsupport::adapter_path("truncate.py")},
        10'000);
    out.expect(trunc.summarize("One. Two.", std::string("q")) == "[q] One.",
               "truncate adapter ignored the query");
  }
  {
    AdapterProcess err("error", {"python3", testsupport::adapter_path("error.py")},
                       10'000);
    bool threw = false;
    try {
      err.summarize("text", std::nullopt);
    } catch (const AdapterError&) {
      threw = true;
    }
    out.expect(threw, "reported error did not raise");
    out.expect(!err.broken(), "reported error must keep the channel");
  }
  {
    AdapterProcess wrong(
        "wrongid", {"python3", testsupport::adapter_path("wrongid.py")}, 10'000);
    bool threw = false;
    try {
      wrong.summarize("text", std::nullopt);
    } catch (const AdapterError&) {
      threw = true;
    }
    out.expect(threw && wrong.broken(), "id mismatch must break the channel");
  }
  {
    AdapterProcess hang("hang", {"python3", testsupport::adapter_path("hang.py")},
                        300);
    bool threw = false;
    try {
      hang.summarize("text", std::nullopt);
    } catch (const AdapterError& e) {
      threw = std::string(e.what()).find("timeout") != std::string::npos;
    }
    out.expect(threw && hang.broken(), "timeout must raise and break");
  }

  // CLI error surfaces: every adapter fault exits 3 with a diagnostic.
  testsupport::TempDir dir;
  const std::string dataset = testsupport::data_path("single12.jsonl");
  const auto registry_for = [&dir](const std::string& name,
                                   const std::string& script,
                                   const std::string& extra = "") {
    const std::string path = dir.file(name + ".ini");
    testsupport::write_file(
        path, "[adapters]\n" + name + " = python3 " +
                  testsupport::adapter_path(script) + "\n" + extra);
    return path;
  };

  struct Case {
    std::string name;
    std::string script;
    std::string extra;
    std::string needle;  // expected fragment of the diagnostic
  };
  const std::vector<Case> cases = {
      {"err", "error.py", "", "model refused"},
      {"wrongid", "wrongid.py", "", "response id"},
      {"hang", "hang.py", "[settings]\ntimeout_seconds = 0.4\n", "timeout"},
      {"crash", "crash.py", "", "exited"},
  };
  for (const Case& c : cases) {
    const std::string ini = registry_for(c.name, c.script, c.extra);
    const RunResult r = run_cli("summarize --dataset " + quoted(dataset) +
                                " --registry " + quoted(ini) + " --model " +
                                c.name);
    out.expect(r.exit_code == 3,
               c.name + " exited " + std::to_string(r.exit_code) +
                   " instead of 3");
    out.expect(r.stderr_text.find("error[3]:") != std::string::npos,
               c.name + " stderr lacks the error[3] prefix: " + r.stderr_text);
    out.expect(r.stderr_text.find(c.needle) != std::string::npos,
               c.name + " diagnostic lacks '" + c.needle + "': " + r.stderr_text);
  }
  return out;
}

struct Criterion {
  std::string label;
  std::function<Outcome()> run;
  double budget_seconds;  // 0 = no bound pinned
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"registry fidelity (10 rows, every cell)", check_registry_fidelity, 1.0},
      {"metric brute-force oracles (500 pairs)", check_metric_oracles, 30.0},
      {"hand-computed metric fixtures", check_hand_fixtures, 0.0},
      {"pareto_filter vs O(n^2) front (1000 trials)", check_pareto, 5.0},
      {"full-budget selection exactness", check_full_budget, 0.0},
      {"successive-halving audit invariants", check_halving_audit, 0.0},
      {"assembly stage-product counts", check_assembly_counts, 0.0},
      {"graph-ranking numerics", check_graph_numerics, 0.0},
      {"CLI end-to-end determinism", check_cli_determinism, 60.0},
      {"adapter protocol conformance", check_protocol, 0.0},
  };

  bool all_ok = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].run();
    } catch (const std::exception& e) {
      outcome.fail(std::string("unexpected exception: ") + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (criteria[i].budget_seconds > 0 && elapsed > criteria[i].budget_seconds) {
      outcome.fail("took " + std::to_string(elapsed) + "s, budget " +
                   std::to_string(criteria[i].budget_seconds) + "s");
    }
    std::ostringstream line;
    line << "criterion " << std::setw(2) << (i + 1) << "/" << criteria.size()
         << "  " << std::left << std::setw(46) << criteria[i].label
         << (outcome.ok ? "pass" : "FAIL") << "  (" << std::fixed
         << std::setprecision(2) << elapsed << "s)";
    std::cout << line.str() << "\n";
    if (!outcome.ok) {
      std::cout << "    -> " << outcome.detail << "\n";
      all_ok = false;
    }
  }
  std::cout << (all_ok ? "acceptance: all criteria passed"
                       : "acceptance: FAILURES above")
            << "\n";
  return all_ok ? 0 : 1;
}

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

// Benchmarks the serial reference kernels against the OpenMP paths and
// checks that both produce identical bytes while at it.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "summpipe/kernels.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<std::vector<double>> random_vectors(std::size_t n, std::size_t dim,
                                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  // Nonnegative entries keep the cosines nonnegative, matching the
  // term-frequency vectors the stationary kernel sees in practice.
  std::uniform_real_distribution<double> value(0.0, 1.0);
  std::vector<std::vector<double>> out(n, std::vector<double>(dim));
  for (auto& row : out) {
    for (double& v : row) v = value(rng);
  }
  return out;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na <= 0.0 || nb <= 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

bool identical(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

void report(const char* name, double serial_s, double parallel_s, bool match) {
  std::printf("%-20s serial %8.3fs  parallel %8.3fs  speedup %5.2fx  %s\n", name,
              serial_s, parallel_s, parallel_s > 0 ? serial_s / parallel_s : 0.0,
              match ? "bit-identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t n = 600;
  int threads = 0;  // 0 = library default (all cores)
  if (argc > 1) n = static_cast<std::size_t>(std::stoul(argv[1]));
  if (argc > 2) threads = std::stoi(argv[2]);

  const auto vectors = random_vectors(n, 64, 17);
  const auto pair_fn = [&vectors](std::size_t i, std::size_t j) {
    return cosine(vectors[i], vectors[j]);
  };

  bool all_match = true;

  {
    auto start = Clock::now();
    const auto serial = summpipe::kernels::pairwise_matrix(n, pair_fn, 1);
    const double serial_s = seconds_since(start);
    start = Clock::now();
    const auto parallel = summpipe::kernels::pairwise_matrix(n, pair_fn, threads);
    const double parallel_s = seconds_since(start);
    const bool match = identical(serial, parallel);
    all_match = all_match && match;
    report("pairwise_matrix", serial_s, parallel_s, match);

    // Reuse the similarity matrix for the stationary-distribution kernel.
    start = Clock::now();
    const auto ranks_serial =
        summpipe::kernels::stationary_scores(serial, n, 0.85, 1e-10, 200, 1);
    const double ranks_serial_s = seconds_since(start);
    start = Clock::now();
    const auto ranks_parallel =
        summpipe::kernels::stationary_scores(serial, n, 0.85, 1e-10, 200, threads);
    const double ranks_parallel_s = seconds_since(start);
    const bool ranks_match = identical(ranks_serial.scores, ranks_parallel.scores);
    all_match = all_match && ranks_match;
    report("stationary_scores", ranks_serial_s, ranks_parallel_s, ranks_match);
  }

  {
    const std::size_t rows = n / 4, cols = 64;
    std::vector<double> serial_out(rows * cols), parallel_out(rows * cols);
    const auto heavy_cell = [&vectors](std::size_t r, std::size_t c) {
      // An artificially heavy cell: a short power series over a cosine.
      double x = cosine(vectors[r % vectors.size()], vectors[c % vectors.size()]);
      double acc = 0.0, term = 1.0;
      for (int p = 0; p < 2000; ++p) {
        term *= x * 0.99;
        acc += term / (p + 1.0);
      }
      return acc;
    };
    auto start = Clock::now();
    summpipe::kernels::map_grid(
        rows, cols,
        [&](std::size_t r, std::size_t c) { serial_out[r * cols + c] = heavy_cell(r, c); },
        1);
    const double serial_s = seconds_since(start);
    start = Clock::now();
    summpipe::kernels::map_grid(
        rows, cols,
        [&](std::size_t r, std::size_t c) { parallel_out[r * cols + c] = heavy_cell(r, c); },
        threads);
    const double parallel_s = seconds_since(start);
    const bool match = identical(serial_out, parallel_out);
    all_match = all_match && match;
    report("map_grid", serial_s, parallel_s, match);
  }

  if (!all_match) {
    std::fprintf(stderr, "serial / parallel outputs diverged\n");
    return 1;
  }
  return 0;
}

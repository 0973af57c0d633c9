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

#ifndef SUMMPIPE_KERNELS_HPP
#define SUMMPIPE_KERNELS_HPP

#include <cstddef>
#include <functional>
#include <vector>

namespace summpipe::kernels {

// Data-parallel inner loops, each with a serial reference path and an
// OpenMP path. Every output slot is written by exactly one task with the
// same inner operation order in both paths, so serial and parallel results
// are bit-identical. threads <= 1 selects the serial path.

using PairFn = std::function<double(std::size_t, std::size_t)>;

/// Symmetric n-by-n matrix (row-major) with fn(i, j) on the off-diagonal
/// and 0 on the diagonal. fn is called once per unordered pair.
std::vector<double> pairwise_matrix_serial(std::size_t n, const PairFn& fn);
std::vector<double> pairwise_matrix(std::size_t n, const PairFn& fn, int threads);

using CellFn = std::function<void(std::size_t row, std::size_t col)>;

/// Runs fn over the rows-by-cols grid. The OpenMP path flattens the grid
/// and must only be given thread-safe fn; exceptions have to be captured
/// inside fn, they must not escape the loop body.
void map_grid_serial(std::size_t rows, std::size_t cols, const CellFn& fn);
void map_grid(std::size_t rows, std::size_t cols, const CellFn& fn, int threads);

struct StationaryResult {
  std::vector<double> scores;  // nonnegative, sums to 1
  int iterations = 0;
  bool converged = false;
};

/// Damped stationary distribution of the weighted graph given by a
/// symmetric matrix: scores satisfy
///   p(i) = (1-damping)/n + damping * sum_j w(j,i)/deg(j) * p(j),
/// with the mass of zero-degree nodes spread uniformly. Iterates from the
/// uniform vector until the L1 delta drops below tol or max_iter is hit.
/// The matrix-vector product is row-parallel.
StationaryResult stationary_scores(const std::vector<double>& weights,
                                   std::size_t n, double damping, double tol,
                                   int max_iter, int threads);

}  // namespace summpipe::kernels

#endif  // SUMMPIPE_KERNELS_HPP

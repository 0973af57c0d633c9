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

#include "summpipe/kernels.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace summpipe::kernels {

std::vector<double> pairwise_matrix_serial(std::size_t n, const PairFn& fn) {
  std::vector<double> out(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double w = fn(i, j);
      out[i * n + j] = w;
      out[j * n + i] = w;
    }
  }
  return out;
}

std::vector<double> pairwise_matrix(std::size_t n, const PairFn& fn, int threads) {
#ifdef _OPENMP
  if (threads > 1) {
    std::vector<double> out(n * n, 0.0);
    const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for num_threads(threads) schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < rows; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      for (std::size_t j = ui + 1; j < n; ++j) {
        const double w = fn(ui, j);
        out[ui * n + j] = w;
        out[j * n + ui] = w;
      }
    }
    return out;
  }
#else
  (void)threads;
#endif
  return pairwise_matrix_serial(n, fn);
}

void map_grid_serial(std::size_t rows, std::size_t cols, const CellFn& fn) {
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      fn(r, c);
    }
  }
}

void map_grid(std::size_t rows, std::size_t cols, const CellFn& fn, int threads) {
#ifdef _OPENMP
  if (threads > 1) {
    const auto total = static_cast<std::ptrdiff_t>(rows * cols);
#pragma omp parallel for num_threads(threads) schedule(dynamic)
    for (std::ptrdiff_t t = 0; t < total; ++t) {
      const auto u = static_cast<std::size_t>(t);
      fn(u / cols, u % cols);
    }
    return;
  }
#else
  (void)threads;
#endif
  map_grid_serial(rows, cols, fn);
}

StationaryResult stationary_scores(const std::vector<double>& weights,
                                   std::size_t n, double damping, double tol,
                                   int max_iter, int threads) {
  StationaryResult result;
  if (n == 0) {
    result.converged = true;
    return result;
  }

  std::vector<double> degree(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      degree[j] += weights[j * n + i];
    }
  }

  const double uniform = 1.0 / static_cast<double>(n);
  std::vector<double> p(n, uniform), next(n, 0.0);

  auto update_row = [&](std::size_t i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (degree[j] > 0.0) {
        acc += weights[j * n + i] / degree[j] * p[j];
      }
    }
    return acc;
  };

  for (int iter = 0; iter < max_iter; ++iter) {
    // Mass sitting on zero-degree nodes is spread uniformly; computed
    // serially so both paths add it in the same order.
    double dangling = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (degree[j] == 0.0) dangling += p[j];
    }
    const double base = (1.0 - damping) * uniform + damping * dangling * uniform;

#ifdef _OPENMP
    if (threads > 1) {
      const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for num_threads(threads) schedule(static)
      for (std::ptrdiff_t i = 0; i < rows; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        next[ui] = base + damping * update_row(ui);
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        next[i] = base + damping * update_row(i);
      }
    }
#else
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = base + damping * update_row(i);
    }
#endif

    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      delta += std::fabs(next[i] - p[i]);
    }
    std::swap(p, next);
    result.iterations = iter + 1;
    if (delta < tol) {
      result.converged = true;
      break;
    }
  }

  double sum = 0.0;
  for (double v : p) sum += v;
  if (sum > 0.0) {
    for (double& v : p) v /= sum;
  }
  result.scores = std::move(p);
  return result;
}

}  // namespace summpipe::kernels

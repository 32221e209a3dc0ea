// Copyright 2026 The sense-align Authors
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

#include "sense_align/assignment.h"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "sense_align/error.h"

namespace sense_align {

RewardMatrix::RewardMatrix(size_t rows, size_t cols)
    : RewardMatrix(rows, cols, std::vector<double>(rows * cols, 0.0)) {}

RewardMatrix::RewardMatrix(size_t rows, size_t cols, std::vector<double> weights)
    : rows_(rows),
      cols_(cols),
      real_rows_(rows),
      real_cols_(cols),
      weights_(std::move(weights)) {
  if (weights_.size() != rows * cols) {
    throw DataError(fmt::format("reward matrix {}x{} given {} weights", rows,
                                cols, weights_.size()));
  }
}

RewardMatrix RewardMatrix::Transposed() const {
  RewardMatrix t(cols_, rows_);
  t.real_rows_ = real_cols_;
  t.real_cols_ = real_rows_;
  for (size_t i = 0; i < rows_; ++i) {
    for (size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

RewardMatrix PadToSquare(const RewardMatrix& m) {
  const size_t n = std::max(m.rows(), m.cols());
  RewardMatrix out(n, n);
  out.real_rows_ = m.real_rows();
  out.real_cols_ = m.real_cols();
  for (size_t i = 0; i < m.rows(); ++i) {
    for (size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  }
  return out;
}

namespace {

// Shortest augmenting path Hungarian method on costs (minimization). Fills
// row->col assignment and dual potentials with cost(i,j) - u[i] - v[j] >= 0,
// equal to zero on matched edges.
void Hungarian(const std::vector<double>& cost, size_t n,
               std::vector<size_t>& row_to_col, std::vector<double>& u,
               std::vector<double>& v) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr size_t kNone = std::numeric_limits<size_t>::max();
  // 1-based internally; column 0 is the virtual source.
  std::vector<double> pu(n + 1, 0.0), pv(n + 1, 0.0);
  std::vector<size_t> col_owner(n + 1, 0), way(n + 1, 0);
  for (size_t i = 1; i <= n; ++i) {
    col_owner[0] = i;
    size_t j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const size_t i0 = col_owner[j0];
      double delta = kInf;
      size_t j1 = kNone;
      for (size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * n + (j - 1)] - pu[i0] - pv[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          pu[col_owner[j]] += delta;
          pv[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (col_owner[j0] != 0);
    do {
      const size_t j1 = way[j0];
      col_owner[j0] = col_owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  row_to_col.assign(n, 0);
  for (size_t j = 1; j <= n; ++j) row_to_col[col_owner[j] - 1] = j - 1;
  u.assign(pu.begin() + 1, pu.end());
  v.assign(pv.begin() + 1, pv.end());
}

// Rewrites a perfect matching of the tight-edge graph into the
// lexicographically smallest one. Every perfect matching of that graph is an
// optimal assignment (complementary slackness), and vice versa.
class LexMinMatcher {
 public:
  LexMinMatcher(std::vector<std::vector<bool>> tight,
                std::vector<size_t> row_to_col)
      : n_(row_to_col.size()),
        tight_(std::move(tight)),
        row_to_col_(std::move(row_to_col)),
        col_to_row_(n_),
        fixed_col_(n_, false) {
    for (size_t i = 0; i < n_; ++i) col_to_row_[row_to_col_[i]] = i;
  }

  std::vector<size_t> Run() {
    for (size_t i = 0; i < n_; ++i) {
      for (size_t j = 0; j < n_; ++j) {
        if (!tight_[i][j] || fixed_col_[j]) continue;
        if (row_to_col_[i] == j || Reroute(i, j)) {
          fixed_col_[j] = true;
          break;
        }
      }
    }
    return row_to_col_;
  }

 private:
  // Moves row i onto column j, finding the displaced row a new column along
  // an alternating path that ends at the column row i gives up.
  bool Reroute(size_t i, size_t j) {
    const size_t displaced = col_to_row_[j];
    target_ = row_to_col_[i];
    blocked_ = j;
    visited_.assign(n_, false);
    if (!Augment(displaced)) return false;
    row_to_col_[i] = j;
    col_to_row_[j] = i;
    return true;
  }

  bool Augment(size_t row) {
    for (size_t y = 0; y < n_; ++y) {
      if (!tight_[row][y] || fixed_col_[y] || y == blocked_ || visited_[y]) {
        continue;
      }
      visited_[y] = true;
      if (y == target_ || Augment(col_to_row_[y])) {
        row_to_col_[row] = y;
        col_to_row_[y] = row;
        return true;
      }
    }
    return false;
  }

  size_t n_;
  std::vector<std::vector<bool>> tight_;
  std::vector<size_t> row_to_col_;
  std::vector<size_t> col_to_row_;
  std::vector<bool> fixed_col_;
  std::vector<bool> visited_;
  size_t target_ = 0;
  size_t blocked_ = 0;
};

double RealWeight(const RewardMatrix& m, const std::vector<size_t>& a) {
  double total = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    if (!m.is_dummy_row(i) && !m.is_dummy_col(a[i])) total += m(i, a[i]);
  }
  return total;
}

double FullWeight(const RewardMatrix& m, const std::vector<size_t>& a) {
  double total = 0.0;
  for (size_t i = 0; i < a.size(); ++i) total += m(i, a[i]);
  return total;
}

}  // namespace

Matching SolveMatching(const RewardMatrix& m) {
  if (!m.square()) {
    throw DataError(fmt::format("matching needs a square matrix, got {}x{}",
                                m.rows(), m.cols()));
  }
  const size_t n = m.rows();
  double scale = 1.0;
  for (double w : m.weights()) {
    if (!std::isfinite(w)) throw DataError("non-finite reward matrix entry");
    scale = std::max(scale, std::abs(w));
  }
  if (n == 0) return {};

  std::vector<double> cost(m.weights().size());
  std::transform(m.weights().begin(), m.weights().end(), cost.begin(),
                 [](double w) { return -w; });
  std::vector<size_t> hungarian;
  std::vector<double> u, v;
  Hungarian(cost, n, hungarian, u, v);

  const double tol = 64.0 * static_cast<double>(n) * DBL_EPSILON * scale;
  std::vector<std::vector<bool>> tight(n, std::vector<bool>(n));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      tight[i][j] = cost[i * n + j] - u[i] - v[j] <= tol;
    }
    tight[i][hungarian[i]] = true;
  }
  std::vector<size_t> best = LexMinMatcher(std::move(tight), hungarian).Run();
  if (FullWeight(m, best) < FullWeight(m, hungarian) - tol) best = hungarian;

  Matching out;
  out.total_weight = RealWeight(m, best);
  out.assignment = std::move(best);
  return out;
}

}  // namespace sense_align

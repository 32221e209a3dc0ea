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

#ifndef SENSE_ALIGN_ASSIGNMENT_H_
#define SENSE_ALIGN_ASSIGNMENT_H_

#include <cstddef>
#include <vector>

namespace sense_align {

// Row-major grid of edge weights w(i, j) between the glosses of two
// inventories. After padding, rows >= real_rows() and cols >= real_cols() are
// zero-weight dummy vertices.
class RewardMatrix {
 public:
  RewardMatrix() = default;
  RewardMatrix(size_t rows, size_t cols);
  RewardMatrix(size_t rows, size_t cols, std::vector<double> weights);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  size_t real_rows() const { return real_rows_; }
  size_t real_cols() const { return real_cols_; }
  bool square() const { return rows_ == cols_; }

  bool is_dummy_row(size_t i) const { return i >= real_rows_; }
  bool is_dummy_col(size_t j) const { return j >= real_cols_; }

  double& operator()(size_t i, size_t j) { return weights_[i * cols_ + j]; }
  double operator()(size_t i, size_t j) const { return weights_[i * cols_ + j]; }

  const std::vector<double>& weights() const { return weights_; }

  RewardMatrix Transposed() const;

  friend bool operator==(const RewardMatrix&, const RewardMatrix&) = default;

 private:
  friend RewardMatrix PadToSquare(const RewardMatrix& m);

  size_t rows_ = 0;
  size_t cols_ = 0;
  size_t real_rows_ = 0;
  size_t real_cols_ = 0;
  std::vector<double> weights_;
};

// Appends zero rows or columns up to max(rows, cols). Original entries are
// untouched and the appended ones are flagged as dummies.
RewardMatrix PadToSquare(const RewardMatrix& m);

// A perfect matching on a square matrix: row i is matched to column
// assignment[i].
struct Matching {
  std::vector<size_t> assignment;
  // Sum of w(i, assignment[i]) over edges whose endpoints are both real.
  double total_weight = 0.0;
};

// Maximum-weight perfect matching (the assignment problem), solved exactly with
// the shortest-augmenting-path Hungarian method in O(n^3). Among optimal
// assignments the lexicographically smallest `assignment` sequence is
// returned. Throws DataError if the matrix is not square or has a non-finite
// entry.
Matching SolveMatching(const RewardMatrix& m);

}  // namespace sense_align

#endif  // SENSE_ALIGN_ASSIGNMENT_H_

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

#ifndef SENSE_ALIGN_HEAD_H_
#define SENSE_ALIGN_HEAD_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sense_align/embedding.h"
#include "sense_align/pairgen.h"

namespace sense_align {

// Comparison features [u, v, |u - v|, u * v] (element-wise), length 4n.
std::vector<double> BuildFeatures(std::span<const float> u,
                                  std::span<const float> v);

struct TrainConfig {
  double learning_rate = 1e-5;
  size_t batch_size = 64;
  size_t epochs = 10;
  double weight_decay = 0.01;
  // Inverted dropout on the feature vector; off for frozen embeddings.
  double dropout = 0.0;
  uint64_t seed = 17;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  // Throws DataError when a field is out of range.
  void Validate() const;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

// Reads a JSON object; absent keys keep their defaults.
TrainConfig ParseTrainConfig(std::string_view json_text);

// Binary semantic-equivalence classifier: logits = W f + b over the 4n
// comparison features, softmax over {not equivalent, equivalent}.
class HeadModel {
 public:
  static constexpr int kFormatVersion = 1;

  HeadModel() = default;
  // Zero-initialized.
  explicit HeadModel(size_t n);

  size_t n() const { return n_; }
  size_t feature_dim() const { return 4 * n_; }

  // Row 0 scores "not equivalent", row 1 "equivalent"; row-major 2 x 4n.
  std::vector<double>& weights() { return weights_; }
  const std::vector<double>& weights() const { return weights_; }
  std::array<double, 2>& bias() { return bias_; }
  const std::array<double, 2>& bias() const { return bias_; }

  TrainConfig& config() { return config_; }
  const TrainConfig& config() const { return config_; }
  std::map<std::string, std::string>& provenance() { return provenance_; }
  const std::map<std::string, std::string>& provenance() const {
    return provenance_;
  }

  std::array<double, 2> Logits(std::span<const double> features) const;

  friend bool operator==(const HeadModel&, const HeadModel&) = default;

 private:
  size_t n_ = 0;
  std::vector<double> weights_;
  std::array<double, 2> bias_{0.0, 0.0};
  TrainConfig config_;
  std::map<std::string, std::string> provenance_;
};

// Numerically stable two-class softmax; returns {p(not eq), p(eq)}.
std::array<double, 2> Softmax2(const std::array<double, 2>& logits);

// p(equivalent | u, v). Throws DataError on a dim mismatch or non-finite
// parameters.
double Predict(const HeadModel& model, std::span<const float> u,
               std::span<const float> v);

struct LabeledExample {
  std::span<const float> u;
  std::span<const float> v;
  bool positive = false;
};

struct LossAndGradient {
  double loss = 0.0;  // mean cross-entropy
  std::vector<double> grad_weights;
  std::array<double, 2> grad_bias{0.0, 0.0};
};

// Analytic gradient of the mean negative log-likelihood. Throws DataError on an
// empty batch.
LossAndGradient ComputeLossAndGradient(const HeadModel& model,
                                       std::span<const LabeledExample> batch);

// Mean cross-entropy over `examples` without dropout.
double MeanLoss(const HeadModel& model, std::span<const LabeledExample> examples);

struct TrainResult {
  HeadModel model;
  // Full-data mean loss after each epoch.
  std::vector<double> epoch_loss;
};

// Mini-batch AdamW (decoupled weight decay on W; the bias is not decayed).
// The example order of each epoch and any dropout masks come from counter
// streams keyed by cfg.seed, so runs are bitwise reproducible. Training
// continues from `init` when given, otherwise from a zero model of width n.
// Zero epochs return the starting model untouched.
TrainResult TrainOnExamples(std::span<const LabeledExample> examples, size_t n,
                            const TrainConfig& cfg,
                            const std::optional<HeadModel>& init = std::nullopt);

// Resolves each pair to store vectors (context c:<gloss>:<i> against
// g:<gloss>, or two c: keys for context-context pairs) and trains.
TrainResult Train(std::span<const PairInstance> pairs,
                  const EmbeddingStore& store, const TrainConfig& cfg,
                  const std::optional<HeadModel>& init = std::nullopt);

// Store keys of the two vectors a pair is scored on.
std::pair<std::string, std::string> PairKeys(const PairInstance& pair);

std::string SerializeModel(const HeadModel& model);
HeadModel ParseModel(std::string_view text);
void SaveModel(const HeadModel& model, const std::filesystem::path& path);
// Throws DataError on a version mismatch, or when `expected_n` is given and
// differs from the model width.
HeadModel LoadModel(const std::filesystem::path& path,
                    std::optional<size_t> expected_n = std::nullopt);

}  // namespace sense_align

#endif  // SENSE_ALIGN_HEAD_H_

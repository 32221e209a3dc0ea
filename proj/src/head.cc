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

#include "sense_align/head.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "sense_align/error.h"
#include "sense_align/jsonl.h"
#include "sense_align/rng.h"

namespace sense_align {

std::vector<double> BuildFeatures(std::span<const float> u,
                                  std::span<const float> v) {
  if (u.size() != v.size()) {
    throw DataError(fmt::format("feature inputs have dims {} and {}", u.size(),
                                v.size()));
  }
  const size_t n = u.size();
  std::vector<double> f(4 * n);
  for (size_t i = 0; i < n; ++i) {
    const double a = u[i], b = v[i];
    f[i] = a;
    f[n + i] = b;
    f[2 * n + i] = std::abs(a - b);
    f[3 * n + i] = a * b;
  }
  return f;
}

void TrainConfig::Validate() const {
  if (!(learning_rate > 0.0) || batch_size == 0 || !(weight_decay >= 0.0) ||
      !(dropout >= 0.0 && dropout < 1.0) || !(beta1 >= 0.0 && beta1 < 1.0) ||
      !(beta2 >= 0.0 && beta2 < 1.0) || !(epsilon > 0.0)) {
    throw DataError("invalid training configuration");
  }
}

TrainConfig ParseTrainConfig(std::string_view json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw DataError(std::string("malformed training config: ") + e.what());
  }
  if (!j.is_object()) throw DataError("training config must be a JSON object");
  TrainConfig cfg;
  try {
    cfg.learning_rate = j.value("learning_rate", cfg.learning_rate);
    cfg.batch_size = j.value("batch_size", cfg.batch_size);
    cfg.epochs = j.value("epochs", cfg.epochs);
    cfg.weight_decay = j.value("weight_decay", cfg.weight_decay);
    cfg.dropout = j.value("dropout", cfg.dropout);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.beta1 = j.value("beta1", cfg.beta1);
    cfg.beta2 = j.value("beta2", cfg.beta2);
    cfg.epsilon = j.value("epsilon", cfg.epsilon);
  } catch (const Json::exception& e) {
    throw DataError(std::string("bad training config field: ") + e.what());
  }
  cfg.Validate();
  return cfg;
}

HeadModel::HeadModel(size_t n) : n_(n), weights_(2 * 4 * n, 0.0) {
  if (n == 0) throw DataError("model width must be positive");
}

std::array<double, 2> HeadModel::Logits(std::span<const double> f) const {
  const size_t d = feature_dim();
  std::array<double, 2> z = bias_;
  for (size_t k = 0; k < 2; ++k) {
    const double* w = weights_.data() + k * d;
    for (size_t i = 0; i < d; ++i) z[k] += w[i] * f[i];
  }
  return z;
}

std::array<double, 2> Softmax2(const std::array<double, 2>& z) {
  const double m = std::max(z[0], z[1]);
  const double e0 = std::exp(z[0] - m);
  const double e1 = std::exp(z[1] - m);
  const double s = e0 + e1;
  return {e0 / s, e1 / s};
}

namespace {

void CheckFinite(const HeadModel& model) {
  auto finite = [](double x) { return std::isfinite(x); };
  if (!std::all_of(model.weights().begin(), model.weights().end(), finite) ||
      !std::all_of(model.bias().begin(), model.bias().end(), finite)) {
    throw DataError("model has non-finite parameters");
  }
}

void CheckWidth(const HeadModel& model, size_t u, size_t v) {
  if (u != model.n() || v != model.n()) {
    throw DataError(fmt::format("model expects dim {}, got {} and {}",
                                model.n(), u, v));
  }
}

// log(1 + e^x) without overflow or loss of tiny values. The two-class
// cross-entropy is Softplus(z_wrong - z_right).
double Softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

// Adds one example's loss and gradient contributions.
double Accumulate(const HeadModel& model, std::span<const double> f,
                  bool positive, LossAndGradient& acc) {
  const auto z = model.Logits(f);
  const int y = positive ? 1 : 0;
  const auto p = Softmax2(z);
  const size_t d = f.size();
  for (size_t k = 0; k < 2; ++k) {
    const double r = p[k] - (static_cast<int>(k) == y ? 1.0 : 0.0);
    double* g = acc.grad_weights.data() + k * d;
    for (size_t i = 0; i < d; ++i) g[i] += r * f[i];
    acc.grad_bias[k] += r;
  }
  return Softplus(z[1 - y] - z[y]);
}

}  // namespace

double Predict(const HeadModel& model, std::span<const float> u,
               std::span<const float> v) {
  CheckWidth(model, u.size(), v.size());
  CheckFinite(model);
  return Softmax2(model.Logits(BuildFeatures(u, v)))[1];
}

LossAndGradient ComputeLossAndGradient(const HeadModel& model,
                                       std::span<const LabeledExample> batch) {
  if (batch.empty()) throw DataError("empty batch");
  LossAndGradient acc;
  acc.grad_weights.assign(model.weights().size(), 0.0);
  for (const LabeledExample& ex : batch) {
    CheckWidth(model, ex.u.size(), ex.v.size());
    acc.loss += Accumulate(model, BuildFeatures(ex.u, ex.v), ex.positive, acc);
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  acc.loss *= inv;
  for (double& g : acc.grad_weights) g *= inv;
  for (double& g : acc.grad_bias) g *= inv;
  return acc;
}

double MeanLoss(const HeadModel& model, std::span<const LabeledExample> examples) {
  if (examples.empty()) throw DataError("no examples");
  double total = 0.0;
  for (const LabeledExample& ex : examples) {
    const auto z = model.Logits(BuildFeatures(ex.u, ex.v));
    const int y = ex.positive ? 1 : 0;
    total += Softplus(z[1 - y] - z[y]);
  }
  return total / static_cast<double>(examples.size());
}

TrainResult TrainOnExamples(std::span<const LabeledExample> examples, size_t n,
                            const TrainConfig& cfg,
                            const std::optional<HeadModel>& init) {
  cfg.Validate();
  TrainResult result;
  if (init) {
    if (init->n() != n) {
      throw DataError(fmt::format("initial model has width {}, data has {}",
                                  init->n(), n));
    }
    result.model = *init;
  } else {
    result.model = HeadModel(n);
  }
  if (cfg.epochs == 0) return result;
  HeadModel& model = result.model;
  model.config() = cfg;
  model.provenance()["bias_term"] = "true";
  if (examples.empty()) throw DataError("no training examples");
  for (const LabeledExample& ex : examples) CheckWidth(model, ex.u.size(), ex.v.size());

  const size_t num_w = model.weights().size();
  std::vector<double> m_w(num_w, 0.0), v_w(num_w, 0.0);
  std::array<double, 2> m_b{0.0, 0.0}, v_b{0.0, 0.0};
  std::vector<size_t> order(examples.size());
  uint64_t step = 0;

  for (size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), size_t{0});
    CounterRng(cfg.seed, "epoch-order", epoch).Shuffle(std::span(order));
    for (size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const size_t end = std::min(order.size(), start + cfg.batch_size);
      LossAndGradient acc;
      acc.grad_weights.assign(num_w, 0.0);
      CounterRng dropout_rng(cfg.seed, "dropout", step);
      const double keep_scale = 1.0 / (1.0 - cfg.dropout);
      for (size_t b = start; b < end; ++b) {
        const LabeledExample& ex = examples[order[b]];
        std::vector<double> f = BuildFeatures(ex.u, ex.v);
        if (cfg.dropout > 0.0) {
          for (double& x : f) {
            x = dropout_rng.Uniform() < cfg.dropout ? 0.0 : x * keep_scale;
          }
        }
        acc.loss += Accumulate(model, f, ex.positive, acc);
      }
      const double inv = 1.0 / static_cast<double>(end - start);
      if (!std::isfinite(acc.loss)) {
        throw DataError(fmt::format(
            "non-finite training loss at epoch {}, batch starting at {}", epoch,
            start));
      }

      ++step;
      const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
      const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
      auto adam = [&](double& param, double grad, double& m, double& v) {
        m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad;
        v = cfg.beta2 * v + (1.0 - cfg.beta2) * grad * grad;
        param -= cfg.learning_rate * (m / bc1) / (std::sqrt(v / bc2) + cfg.epsilon);
      };
      std::vector<double>& w = model.weights();
      for (size_t i = 0; i < num_w; ++i) {
        w[i] -= cfg.learning_rate * cfg.weight_decay * w[i];
        adam(w[i], acc.grad_weights[i] * inv, m_w[i], v_w[i]);
      }
      for (size_t k = 0; k < 2; ++k) {
        adam(model.bias()[k], acc.grad_bias[k] * inv, m_b[k], v_b[k]);
      }
    }
    const double loss = MeanLoss(model, examples);
    if (!std::isfinite(loss)) {
      throw DataError(fmt::format("non-finite training loss after epoch {}", epoch));
    }
    result.epoch_loss.push_back(loss);
  }
  return result;
}

std::pair<std::string, std::string> PairKeys(const PairInstance& pair) {
  std::string u = ContextKey(pair.context.gloss, pair.context.example);
  if (pair.kind == PairKind::kGlossContext) {
    if (!pair.gloss) throw DataError("gloss-context pair without a gloss");
    return {std::move(u), GlossKey(pair.gloss->id)};
  }
  if (!pair.context2) throw DataError("context-context pair without context2");
  return {std::move(u), ContextKey(pair.context2->gloss, pair.context2->example)};
}

TrainResult Train(std::span<const PairInstance> pairs,
                  const EmbeddingStore& store, const TrainConfig& cfg,
                  const std::optional<HeadModel>& init) {
  std::vector<LabeledExample> examples;
  examples.reserve(pairs.size());
  for (const PairInstance& p : pairs) {
    const auto [ku, kv] = PairKeys(p);
    examples.push_back({store.Get(ku).values, store.Get(kv).values,
                        p.label == PairLabel::kPositive});
  }
  return TrainOnExamples(examples, store.dim(), cfg, init);
}

std::string SerializeModel(const HeadModel& model) {
  const size_t d = model.feature_dim();
  const auto& w = model.weights();
  OrderedJson j;
  j["version"] = HeadModel::kFormatVersion;
  j["n"] = model.n();
  j["W"] = {std::vector<double>(w.begin(), w.begin() + d),
            std::vector<double>(w.begin() + d, w.end())};
  j["bias"] = model.bias();
  const TrainConfig& c = model.config();
  j["config"] = {{"learning_rate", c.learning_rate},
                 {"batch_size", c.batch_size},
                 {"epochs", c.epochs},
                 {"weight_decay", c.weight_decay},
                 {"dropout", c.dropout},
                 {"seed", c.seed},
                 {"beta1", c.beta1},
                 {"beta2", c.beta2},
                 {"epsilon", c.epsilon}};
  j["provenance"] = model.provenance();
  return j.dump() + "\n";
}

HeadModel ParseModel(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  }
  try {
    const int version = j.at("version").get<int>();
    if (version != HeadModel::kFormatVersion) {
      throw DataError(fmt::format("model format version {} unsupported (want {})",
                                  version, HeadModel::kFormatVersion));
    }
    HeadModel model(j.at("n").get<size_t>());
    const size_t d = model.feature_dim();
    const Json& rows = j.at("W");
    if (!rows.is_array() || rows.size() != 2) throw DataError("W must have 2 rows");
    for (size_t k = 0; k < 2; ++k) {
      auto row = rows[k].get<std::vector<double>>();
      if (row.size() != d) {
        throw DataError(fmt::format("W row {} has {} values, want {}", k,
                                    row.size(), d));
      }
      std::copy(row.begin(), row.end(), model.weights().begin() + k * d);
    }
    model.bias() = j.at("bias").get<std::array<double, 2>>();
    if (j.contains("config")) {
      model.config() = ParseTrainConfig(j["config"].dump());
    }
    if (j.contains("provenance")) {
      model.provenance() =
          j["provenance"].get<std::map<std::string, std::string>>();
    }
    CheckFinite(model);
    return model;
  } catch (const Json::exception& e) {
    throw DataError(std::string("bad model file: ") + e.what());
  }
}

void SaveModel(const HeadModel& model, const std::filesystem::path& path) {
  WriteFile(path, SerializeModel(model));
}

HeadModel LoadModel(const std::filesystem::path& path,
                    std::optional<size_t> expected_n) {
  HeadModel model = ParseModel(ReadFile(path));
  if (expected_n && *expected_n != model.n()) {
    throw DataError(fmt::format("model width {} does not match embedding dim {}",
                                model.n(), *expected_n));
  }
  return model;
}

}  // namespace sense_align

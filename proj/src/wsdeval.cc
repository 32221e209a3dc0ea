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

#include "sense_align/wsdeval.h"

#include <algorithm>
#include <exception>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "sense_align/error.h"
#include "sense_align/jsonl.h"
#include "sense_align/text.h"

namespace sense_align {

WsdPrediction WsdPredict(const HeadModel& model, const EmbeddingStore& store,
                         const WsdInstance& inst) {
  if (inst.candidates.empty()) {
    throw DataError("instance '" + inst.id + "' has no candidates");
  }
  const EmbeddingVector& context = store.Get(InstanceKey(inst.id));
  WsdPrediction out;
  out.id = inst.id;
  out.probs.reserve(inst.candidates.size());
  for (const GlossId& g : inst.candidates) {
    out.probs.emplace_back(g, Predict(model, context.values,
                                      store.Get(GlossKey(g)).values));
  }
  size_t best = 0;
  for (size_t c = 1; c < out.probs.size(); ++c) {
    const double p = out.probs[c].second;
    const double pb = out.probs[best].second;
    if (p > pb || (p == pb && out.probs[c].first.index < out.probs[best].first.index)) {
      best = c;
    }
  }
  out.predicted = out.probs[best].first;
  return out;
}

std::vector<WsdPrediction> WsdPredictAll(const HeadModel& model,
                                         const EmbeddingStore& store,
                                         std::span<const WsdInstance> instances,
                                         int threads) {
  const long n = static_cast<long>(instances.size());
  std::vector<WsdPrediction> out(instances.size());
  std::vector<std::exception_ptr> errors(instances.size());
#pragma omp parallel for schedule(static) num_threads(threads > 0 ? threads : 1)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = WsdPredict(model, store, instances[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<WsdPrediction> WsdPredictAllSerial(
    const HeadModel& model, const EmbeddingStore& store,
    std::span<const WsdInstance> instances) {
  std::vector<WsdPrediction> out;
  out.reserve(instances.size());
  for (const WsdInstance& inst : instances) {
    out.push_back(WsdPredict(model, store, inst));
  }
  return out;
}

GlossId MostFrequentSense(const SenseCounts& counts, const WsdInstance& inst) {
  if (inst.candidates.empty()) {
    throw DataError("instance '" + inst.id + "' has no candidates");
  }
  auto count_of = [&](const GlossId& g) -> size_t {
    auto it = counts.find(g.ToString());
    return it == counts.end() ? 0 : it->second;
  };
  size_t best = 0;
  for (size_t c = 1; c < inst.candidates.size(); ++c) {
    const size_t n = count_of(inst.candidates[c]);
    const size_t nb = count_of(inst.candidates[best]);
    if (n > nb || (n == nb && n > 0 &&
                   inst.candidates[c].index < inst.candidates[best].index)) {
      best = c;
    }
  }
  return inst.candidates[best];
}

ShotBucketing::ShotBucketing() : bounds_{0, 2, 5, 10} {}

ShotBucketing::ShotBucketing(std::vector<size_t> upper_bounds)
    : bounds_(std::move(upper_bounds)) {
  for (size_t i = 1; i < bounds_.size(); ++i) {
    if (bounds_[i] <= bounds_[i - 1]) {
      throw DataError("bucket bounds must be strictly increasing");
    }
  }
}

size_t ShotBucketing::BucketOf(size_t count) const {
  return static_cast<size_t>(
      std::lower_bound(bounds_.begin(), bounds_.end(), count) - bounds_.begin());
}

std::string ShotBucketing::Label(size_t bucket) const {
  if (bucket >= bounds_.size()) {
    return bounds_.empty() ? "0+" : fmt::format("{}+", bounds_.back());
  }
  const size_t lo = bucket == 0 ? 0 : bounds_[bucket - 1] + 1;
  const size_t hi = bounds_[bucket];
  return lo == hi ? fmt::format("{}", lo) : fmt::format("{}-{}", lo, hi);
}

std::optional<double> ScoreCell::f1() const {
  if (total == 0) return std::nullopt;
  return 100.0 * static_cast<double>(correct) / static_cast<double>(total);
}

EvalReport Score(const std::map<std::string, GlossId>& predictions,
                 std::span<const WsdInstance> gold,
                 const SenseCounts* train_counts,
                 const ShotBucketing& buckets) {
  std::set<std::string> ids;
  for (const WsdInstance& inst : gold) {
    if (!ids.insert(inst.id).second) {
      throw DataError("duplicate instance id '" + inst.id + "'");
    }
  }
  for (const auto& [id, g] : predictions) {
    if (!ids.count(id)) throw DataError("prediction for unknown instance '" + id + "'");
  }

  EvalReport report;
  for (PosTag pos : kAllPosTags) report.per_pos[pos] = {};
  if (train_counts) {
    report.bucketing = buckets;
    report.per_bucket.assign(buckets.size(), {});
  }
  auto count_of = [&](const GlossId& g) -> size_t {
    auto it = train_counts->find(g.ToString());
    return it == train_counts->end() ? 0 : it->second;
  };

  for (const WsdInstance& inst : gold) {
    auto it = predictions.find(inst.id);
    if (it == predictions.end()) {
      throw DataError("missing prediction for instance '" + inst.id + "'");
    }
    const bool correct =
        std::find(inst.gold.begin(), inst.gold.end(), it->second) != inst.gold.end();
    auto tally = [correct](ScoreCell& cell) {
      ++cell.total;
      if (correct) ++cell.correct;
    };
    tally(report.overall);
    tally(report.per_pos[inst.pos]);
    if (train_counts) {
      size_t count = 0;
      for (const GlossId& g : inst.gold) {
        count = std::max(count, count_of(g));
        report.sense_bucket[g.ToString()] = buckets.BucketOf(count_of(g));
      }
      tally(report.per_bucket[buckets.BucketOf(count)]);
    }
  }
  return report;
}

namespace {

OrderedJson CellJson(const ScoreCell& cell) {
  OrderedJson j;
  const auto f1 = cell.f1();
  j["f1"] = f1 ? OrderedJson(*f1) : OrderedJson(nullptr);
  j["correct"] = cell.correct;
  j["total"] = cell.total;
  return j;
}

OrderedJson AccuracyCellJson(const ScoreCell& cell) {
  OrderedJson j;
  if (cell.total == 0) {
    j["accuracy"] = nullptr;
  } else {
    j["accuracy"] = static_cast<double>(cell.correct) / static_cast<double>(cell.total);
  }
  j["correct"] = cell.correct;
  j["judged"] = cell.total;
  return j;
}

}  // namespace

std::string ReportToJson(const EvalReport& report) {
  OrderedJson j;
  j["overall"] = CellJson(report.overall);
  OrderedJson pos;
  for (const auto& [tag, cell] : report.per_pos) {
    pos[std::string(PosName(tag))] = CellJson(cell);
  }
  j["pos"] = pos;
  if (report.bucketing) {
    OrderedJson buckets = OrderedJson::array();
    for (size_t b = 0; b < report.per_bucket.size(); ++b) {
      OrderedJson cell = CellJson(report.per_bucket[b]);
      cell["bucket"] = report.bucketing->Label(b);
      buckets.push_back(std::move(cell));
    }
    j["buckets"] = std::move(buckets);
    OrderedJson senses = OrderedJson::object();
    for (const auto& [sense, b] : report.sense_bucket) {
      senses[sense] = report.bucketing->Label(b);
    }
    j["sense_buckets"] = std::move(senses);
  }
  return j.dump(2) + "\n";
}

AlignmentAccuracy ScoreAlignmentJudgments(
    std::span<const AlignmentLink> links,
    std::span<const AlignmentJudgment> judgments) {
  std::set<std::pair<std::string, std::string>> known;
  for (const AlignmentLink& l : links) {
    known.emplace(l.gloss_a.ToString(), l.gloss_b.ToString());
  }
  AlignmentAccuracy acc;
  for (PosTag pos : kAllPosTags) acc.per_pos[pos] = {};
  for (const AlignmentJudgment& j : judgments) {
    const std::string a = j.gloss_a.ToString();
    const std::string b = j.gloss_b.ToString();
    if (!known.count({a, b}) && !known.count({b, a})) {
      throw DataError("judgment references unknown link " + a + " -> " + b);
    }
    for (ScoreCell* cell : {&acc.per_pos[j.gloss_a.pos], &acc.overall}) {
      ++cell->total;
      if (j.correct) ++cell->correct;
    }
  }
  return acc;
}

std::string AccuracyToJson(const AlignmentAccuracy& acc) {
  OrderedJson j;
  OrderedJson pos;
  for (const auto& [tag, cell] : acc.per_pos) {
    pos[std::string(PosName(tag))] = AccuracyCellJson(cell);
  }
  j["pos"] = pos;
  j["overall"] = AccuracyCellJson(acc.overall);
  return j.dump(2) + "\n";
}

namespace {

std::vector<GlossId> ParseIdList(const Json& rec, const char* key) {
  const Json& arr = RequireField(rec, key);
  if (!arr.is_array()) throw DataError(std::string("'") + key + "' must be an array");
  std::vector<GlossId> ids;
  for (const Json& x : arr) {
    if (!x.is_string()) throw DataError(std::string("'") + key + "' must hold strings");
    ids.push_back(GlossId::Parse(x.get<std::string>()));
  }
  return ids;
}

}  // namespace

std::vector<WsdInstance> ParseWsdInstances(std::string_view text,
                                           std::string_view source) {
  std::vector<WsdInstance> out;
  std::set<std::string> seen;
  ForEachJsonLine(text, source, [&](const Json& rec, size_t) {
    WsdInstance inst;
    inst.id = RequireString(rec, "id");
    if (inst.id.empty()) throw DataError("empty instance id");
    if (!seen.insert(inst.id).second) {
      throw DataError("duplicate instance id '" + inst.id + "'");
    }
    inst.lemma = NormalizeLemma(RequireString(rec, "lemma"));
    inst.pos = ParsePos(RequireString(rec, "pos"));
    inst.context = RequireString(rec, "context");
    const long long start = RequireInteger(rec, "start");
    const long long end = RequireInteger(rec, "end");
    if (start < 0 || start >= end ||
        static_cast<size_t>(end) > CodePointLength(inst.context)) {
      throw DataError("invalid target span");
    }
    inst.span = {static_cast<size_t>(start), static_cast<size_t>(end)};
    inst.candidates = ParseIdList(rec, "candidates");
    inst.gold = ParseIdList(rec, "gold");
    if (inst.candidates.empty()) throw DataError("no candidates");
    if (inst.gold.empty()) throw DataError("no gold senses");
    for (const GlossId& g : inst.gold) {
      if (std::find(inst.candidates.begin(), inst.candidates.end(), g) ==
          inst.candidates.end()) {
        throw DataError("gold sense " + g.ToString() + " is not a candidate");
      }
    }
    out.push_back(std::move(inst));
  });
  return out;
}

std::vector<WsdInstance> LoadWsdInstances(const std::filesystem::path& path) {
  return ParseWsdInstances(ReadFile(path), path.string());
}

std::string SerializePredictions(std::span<const WsdPrediction> predictions) {
  std::string out;
  for (const WsdPrediction& p : predictions) {
    OrderedJson j;
    j["id"] = p.id;
    j["predicted"] = p.predicted.ToString();
    OrderedJson probs = OrderedJson::object();
    for (const auto& [g, prob] : p.probs) probs[g.ToString()] = prob;
    j["probs"] = std::move(probs);
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::map<std::string, GlossId> ParsePredictions(std::string_view text,
                                                std::string_view source) {
  std::map<std::string, GlossId> out;
  ForEachJsonLine(text, source, [&](const Json& rec, size_t) {
    const std::string id = RequireString(rec, "id");
    GlossId g = GlossId::Parse(RequireString(rec, "predicted"));
    if (!out.emplace(id, std::move(g)).second) {
      throw DataError("duplicate prediction for instance '" + id + "'");
    }
  });
  return out;
}

SenseCounts ParseSenseCounts(std::string_view text, std::string_view source) {
  SenseCounts out;
  ForEachJsonLine(text, source, [&](const Json& rec, size_t) {
    const std::string sense = GlossId::Parse(RequireString(rec, "sense")).ToString();
    const long long count = RequireInteger(rec, "count");
    if (count < 0) throw DataError("negative count");
    if (!out.emplace(sense, static_cast<size_t>(count)).second) {
      throw DataError("duplicate count for sense '" + sense + "'");
    }
  });
  return out;
}

std::vector<AlignmentJudgment> ParseJudgments(std::string_view text,
                                              std::string_view source) {
  std::vector<AlignmentJudgment> out;
  ForEachJsonLine(text, source, [&](const Json& rec, size_t) {
    AlignmentJudgment j;
    j.gloss_a = GlossId::Parse(RequireString(rec, "gloss_a"));
    j.gloss_b = GlossId::Parse(RequireString(rec, "gloss_b"));
    const Json& c = RequireField(rec, "correct");
    if (!c.is_boolean()) throw DataError("'correct' must be a boolean");
    j.correct = c.get<bool>();
    out.push_back(std::move(j));
  });
  return out;
}

}  // namespace sense_align

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

#ifndef SENSE_ALIGN_WSDEVAL_H_
#define SENSE_ALIGN_WSDEVAL_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sense_align/alignment.h"
#include "sense_align/embedding.h"
#include "sense_align/head.h"
#include "sense_align/inventory.h"

namespace sense_align {

// One target word to disambiguate. Its context vector is stored under
// InstanceKey(id).
struct WsdInstance {
  std::string id;
  std::string lemma;
  PosTag pos = PosTag::kNoun;
  std::string context;
  TextSpan span;
  std::vector<GlossId> candidates;
  std::vector<GlossId> gold;  // subset of candidates, non-empty
};

struct WsdPrediction {
  std::string id;
  GlossId predicted;
  // Candidate -> p(equivalent), in candidate order.
  std::vector<std::pair<GlossId, double>> probs;
};

// Argmax over candidates of Predict(model, context, gloss); equal
// probabilities resolve to the lowest gloss index.
WsdPrediction WsdPredict(const HeadModel& model, const EmbeddingStore& store,
                         const WsdInstance& inst);

// Instances are spread across OpenMP threads; output keeps input order.
std::vector<WsdPrediction> WsdPredictAll(const HeadModel& model,
                                         const EmbeddingStore& store,
                                         std::span<const WsdInstance> instances,
                                         int threads = 1);

std::vector<WsdPrediction> WsdPredictAllSerial(
    const HeadModel& model, const EmbeddingStore& store,
    std::span<const WsdInstance> instances);

// Training-instance count per sense, keyed by canonical gloss id. Senses not
// listed count as zero.
using SenseCounts = std::map<std::string, size_t>;

// Candidate with the highest count; ties go to the lowest gloss index and
// all-zero counts to the first candidate.
GlossId MostFrequentSense(const SenseCounts& counts, const WsdInstance& inst);

// Buckets by inclusive upper bounds; the default {0, 2, 5, 10} yields
// 0, 1-2, 3-5, 6-10, 10+.
class ShotBucketing {
 public:
  ShotBucketing();
  // Bounds must be strictly increasing.
  explicit ShotBucketing(std::vector<size_t> upper_bounds);

  size_t size() const { return bounds_.size() + 1; }
  size_t BucketOf(size_t count) const;
  std::string Label(size_t bucket) const;

 private:
  std::vector<size_t> bounds_;
};

struct ScoreCell {
  size_t correct = 0;
  size_t total = 0;

  // Percent; absent for an empty cell.
  std::optional<double> f1() const;
};

struct EvalReport {
  ScoreCell overall;
  std::map<PosTag, ScoreCell> per_pos;
  // Present only when training counts were supplied.
  std::optional<ShotBucketing> bucketing;
  std::vector<ScoreCell> per_bucket;
  // Each gold sense's bucket index.
  std::map<std::string, size_t> sense_bucket;
};

// Every instance needs exactly one prediction (instance id -> gloss).
// Multi-gold instances are bucketed by the largest gold training count.
EvalReport Score(const std::map<std::string, GlossId>& predictions,
                 std::span<const WsdInstance> gold,
                 const SenseCounts* train_counts = nullptr,
                 const ShotBucketing& buckets = ShotBucketing());

std::string ReportToJson(const EvalReport& report);

struct AlignmentJudgment {
  GlossId gloss_a;
  GlossId gloss_b;
  bool correct = false;
};

struct AlignmentAccuracy {
  std::map<PosTag, ScoreCell> per_pos;
  ScoreCell overall;
};

// Accuracy = correct / judged, per POS and overall. Throws DataError when a
// judgment names a link that is not in `links` (either orientation).
AlignmentAccuracy ScoreAlignmentJudgments(
    std::span<const AlignmentLink> links,
    std::span<const AlignmentJudgment> judgments);

std::string AccuracyToJson(const AlignmentAccuracy& acc);

// File formats, all line-delimited JSON.
std::vector<WsdInstance> ParseWsdInstances(std::string_view text,
                                           std::string_view source = "<memory>");
std::vector<WsdInstance> LoadWsdInstances(const std::filesystem::path& path);

std::string SerializePredictions(std::span<const WsdPrediction> predictions);
std::map<std::string, GlossId> ParsePredictions(
    std::string_view text, std::string_view source = "<memory>");

// {sense, count} records.
SenseCounts ParseSenseCounts(std::string_view text,
                             std::string_view source = "<memory>");

// {gloss_a, gloss_b, correct} records.
std::vector<AlignmentJudgment> ParseJudgments(
    std::string_view text, std::string_view source = "<memory>");

}  // namespace sense_align

#endif  // SENSE_ALIGN_WSDEVAL_H_

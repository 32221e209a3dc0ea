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

#ifndef SENSE_ALIGN_PAIRGEN_H_
#define SENSE_ALIGN_PAIRGEN_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sense_align/alignment.h"
#include "sense_align/inventory.h"

namespace sense_align {

enum class PairKind { kGlossContext, kContextContext };
enum class PairLabel { kNegative, kPositive };
enum class PairSource { kCrossInventory, kWithinInventory };

std::string_view PairKindName(PairKind kind);
std::string_view PairLabelName(PairLabel label);
std::string_view PairSourceName(PairSource source);

// A target word inside one example sentence of a gloss. `span` is the
// resolved target position, absent when the lemma cannot be located.
struct ContextRef {
  std::string text;
  std::optional<TextSpan> span;
  GlossId gloss;
  size_t example = 0;

  friend bool operator==(const ContextRef&, const ContextRef&) = default;
};

struct GlossRef {
  GlossId id;
  std::string definition;

  friend bool operator==(const GlossRef&, const GlossRef&) = default;
};

// One labeled training example. Gloss-context pairs carry `gloss`;
// context-context pairs carry `context2`.
struct PairInstance {
  PairKind kind = PairKind::kGlossContext;
  PairLabel label = PairLabel::kNegative;
  ContextRef context;
  std::optional<GlossRef> gloss;
  std::optional<ContextRef> context2;
  PairSource source = PairSource::kWithinInventory;

  friend bool operator==(const PairInstance&, const PairInstance&) = default;
};

// Gloss-context pairs across two inventories. Each link (g, g') pairs the
// definition of g with the examples of g' and vice versa as positives; the
// definition of g against examples of the other aligned glosses of the same
// word on the opposite side gives negatives. Glosses that appear in no link
// contribute nothing. Throws DataError when a link references a gloss absent
// from `a` and `b`, or a gloss appears in two links.
std::vector<PairInstance> GenerateCrossInventory(
    std::span<const AlignmentLink> links, const Inventory& a,
    const Inventory& b);

// Gloss-context pairs inside one inventory: definition x own examples are
// positive, definition x examples of the other glosses of the same
// (lemma, pos) are negative.
std::vector<PairInstance> GenerateWithinInventory(const Inventory& inv);

// Context-context pairs over all example sentences of each (lemma, pos).
// Positive: both examples from one gloss, or from two linked glosses.
// Negative: two different glosses of the same inventory, or two glosses of
// different inventories that are both aligned (in that inventory pairing) but
// not to each other. Every unordered example pair is emitted at most once.
std::vector<PairInstance> GenerateContextContext(
    std::span<const Inventory> inventories,
    std::span<const AlignmentLink> links);

struct PairCounts {
  size_t positive = 0;
  size_t negative = 0;
};

PairCounts CountLabels(std::span<const PairInstance> pairs);

struct PairSplit {
  std::vector<PairInstance> train;
  std::vector<PairInstance> dev;
  std::vector<PairInstance> test;
};

// Groups instances by lemma, shuffles the groups under `seed`, and assigns
// round(train_ratio * groups) to train, round(dev_ratio * groups) to dev, and
// the rest to test. Each partition is then shuffled. A lemma never spans two
// partitions.
PairSplit SplitAndShuffle(std::span<const PairInstance> pairs, uint64_t seed,
                          double train_ratio, double dev_ratio);

std::string SerializePairs(std::span<const PairInstance> pairs);
std::vector<PairInstance> ParsePairs(std::string_view text,
                                     std::string_view source = "<memory>");
std::vector<PairInstance> LoadPairs(const std::filesystem::path& path);
void WritePairs(std::span<const PairInstance> pairs,
                const std::filesystem::path& path);

}  // namespace sense_align

#endif  // SENSE_ALIGN_PAIRGEN_H_

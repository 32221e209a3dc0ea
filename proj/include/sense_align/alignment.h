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

#ifndef SENSE_ALIGN_ALIGNMENT_H_
#define SENSE_ALIGN_ALIGNMENT_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sense_align/assignment.h"
#include "sense_align/embedding.h"
#include "sense_align/inventory.h"

namespace sense_align {

inline constexpr double kDefaultAlignThreshold = 0.6;

// A matched pair of glosses for the same (lemma, pos) in two inventories.
struct AlignmentLink {
  GlossId gloss_a;
  GlossId gloss_b;
  double score = 0.0;

  friend bool operator==(const AlignmentLink&, const AlignmentLink&) = default;
};

// w(i, j) = cosine of the stored definition vectors g:<a_i> and g:<b_j>.
RewardMatrix BuildRewardMatrix(std::span<const Gloss> glosses_a,
                               std::span<const Gloss> glosses_b,
                               const EmbeddingStore& store);

// Aligns the glosses of one word: pad, solve, keep real-real edges scoring at
// least `threshold`, ordered by gloss_a index.
std::vector<AlignmentLink> AlignGlosses(std::span<const Gloss> glosses_a,
                                        std::span<const Gloss> glosses_b,
                                        const EmbeddingStore& store,
                                        double threshold);

struct AlignOptions {
  double threshold = kDefaultAlignThreshold;
  int threads = 1;
};

// Runs AlignGlosses over every common (lemma, pos) of `a` and `b`. Words are
// distributed across OpenMP threads; the result is merged in key order and is
// identical for any thread count.
std::vector<AlignmentLink> AlignInventories(const Inventory& a,
                                            const Inventory& b,
                                            const EmbeddingStore& store,
                                            const AlignOptions& options = {});

// Single-threaded reference for AlignInventories.
std::vector<AlignmentLink> AlignInventoriesSerial(const Inventory& a,
                                                  const Inventory& b,
                                                  const EmbeddingStore& store,
                                                  double threshold);

// Every unordered pair (i < j) of `inventories`, processed independently and
// concatenated in pair order.
std::vector<AlignmentLink> AlignAllPairs(std::span<const Inventory> inventories,
                                         const EmbeddingStore& store,
                                         const AlignOptions& options = {});

// Links file: one {lemma, pos, gloss_a, gloss_b, score} record per line, score
// with six decimals.
std::string SerializeLinks(std::span<const AlignmentLink> links);
std::vector<AlignmentLink> ParseLinks(std::string_view text,
                                      std::string_view source = "<memory>");
std::vector<AlignmentLink> LoadLinks(const std::filesystem::path& path);
void WriteLinks(std::span<const AlignmentLink> links,
                const std::filesystem::path& path);

}  // namespace sense_align

#endif  // SENSE_ALIGN_ALIGNMENT_H_

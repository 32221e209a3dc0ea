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

#include "sense_align/alignment.h"

#include <exception>

#include <fmt/format.h>

#include "sense_align/error.h"
#include "sense_align/jsonl.h"

namespace sense_align {

RewardMatrix BuildRewardMatrix(std::span<const Gloss> glosses_a,
                               std::span<const Gloss> glosses_b,
                               const EmbeddingStore& store) {
  std::vector<const EmbeddingVector*> va, vb;
  for (const Gloss& g : glosses_a) va.push_back(&store.Get(GlossKey(g.id)));
  for (const Gloss& g : glosses_b) vb.push_back(&store.Get(GlossKey(g.id)));
  RewardMatrix m(glosses_a.size(), glosses_b.size());
  for (size_t i = 0; i < va.size(); ++i) {
    for (size_t j = 0; j < vb.size(); ++j) m(i, j) = Cosine(*va[i], *vb[j]);
  }
  return m;
}

std::vector<AlignmentLink> AlignGlosses(std::span<const Gloss> glosses_a,
                                        std::span<const Gloss> glosses_b,
                                        const EmbeddingStore& store,
                                        double threshold) {
  const RewardMatrix padded =
      PadToSquare(BuildRewardMatrix(glosses_a, glosses_b, store));
  const Matching matching = SolveMatching(padded);
  std::vector<AlignmentLink> links;
  for (size_t i = 0; i < padded.real_rows(); ++i) {
    const size_t j = matching.assignment[i];
    if (padded.is_dummy_col(j)) continue;
    const double score = padded(i, j);
    if (score < threshold) continue;
    links.push_back({glosses_a[i].id, glosses_b[j].id, score});
  }
  return links;
}

namespace {

void CheckThreshold(double threshold) {
  if (!(threshold >= -1.0 && threshold <= 1.0)) {
    throw DataError(fmt::format("threshold {} outside [-1, 1]", threshold));
  }
}

}  // namespace

std::vector<AlignmentLink> AlignInventories(const Inventory& a,
                                            const Inventory& b,
                                            const EmbeddingStore& store,
                                            const AlignOptions& options) {
  CheckThreshold(options.threshold);
  const std::vector<EntryKey> keys = CommonKeys(a, b);
  const long n = static_cast<long>(keys.size());
  std::vector<std::vector<AlignmentLink>> per_key(keys.size());
  std::vector<std::exception_ptr> errors(keys.size());

#pragma omp parallel for schedule(dynamic, 16) num_threads(options.threads > 0 ? options.threads : 1)
  for (long k = 0; k < n; ++k) {
    try {
      per_key[k] = AlignGlosses(*a.Find(keys[k]), *b.Find(keys[k]), store,
                                options.threshold);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }

  std::vector<AlignmentLink> links;
  for (size_t k = 0; k < keys.size(); ++k) {
    if (errors[k]) std::rethrow_exception(errors[k]);
    links.insert(links.end(), per_key[k].begin(), per_key[k].end());
  }
  return links;
}

std::vector<AlignmentLink> AlignInventoriesSerial(const Inventory& a,
                                                  const Inventory& b,
                                                  const EmbeddingStore& store,
                                                  double threshold) {
  CheckThreshold(threshold);
  std::vector<AlignmentLink> links;
  for (const EntryKey& key : CommonKeys(a, b)) {
    auto word = AlignGlosses(*a.Find(key), *b.Find(key), store, threshold);
    links.insert(links.end(), word.begin(), word.end());
  }
  return links;
}

std::vector<AlignmentLink> AlignAllPairs(std::span<const Inventory> inventories,
                                         const EmbeddingStore& store,
                                         const AlignOptions& options) {
  std::vector<AlignmentLink> links;
  for (size_t i = 0; i < inventories.size(); ++i) {
    for (size_t j = i + 1; j < inventories.size(); ++j) {
      auto pair = AlignInventories(inventories[i], inventories[j], store, options);
      links.insert(links.end(), pair.begin(), pair.end());
    }
  }
  return links;
}

std::string SerializeLinks(std::span<const AlignmentLink> links) {
  std::string out;
  for (const AlignmentLink& l : links) {
    out += fmt::format(R"({{"lemma":{},"pos":"{}","gloss_a":{},"gloss_b":{},"score":{:.6f}}})",
                       Json(l.gloss_a.lemma).dump(), PosName(l.gloss_a.pos),
                       Json(l.gloss_a.ToString()).dump(),
                       Json(l.gloss_b.ToString()).dump(), l.score);
    out += '\n';
  }
  return out;
}

std::vector<AlignmentLink> ParseLinks(std::string_view text,
                                      std::string_view source) {
  std::vector<AlignmentLink> links;
  ForEachJsonLine(text, source, [&](const Json& rec, size_t) {
    AlignmentLink l;
    l.gloss_a = GlossId::Parse(RequireString(rec, "gloss_a"));
    l.gloss_b = GlossId::Parse(RequireString(rec, "gloss_b"));
    const Json& score = RequireField(rec, "score");
    if (!score.is_number()) throw DataError("'score' must be a number");
    l.score = score.get<double>();
    if (l.gloss_a.lemma != l.gloss_b.lemma || l.gloss_a.pos != l.gloss_b.pos) {
      throw DataError("link joins glosses of different words");
    }
    if (l.gloss_a.inventory == l.gloss_b.inventory) {
      throw DataError("link joins glosses of the same inventory");
    }
    links.push_back(std::move(l));
  });
  return links;
}

std::vector<AlignmentLink> LoadLinks(const std::filesystem::path& path) {
  return ParseLinks(ReadFile(path), path.string());
}

void WriteLinks(std::span<const AlignmentLink> links,
                const std::filesystem::path& path) {
  WriteFile(path, SerializeLinks(links));
}

}  // namespace sense_align

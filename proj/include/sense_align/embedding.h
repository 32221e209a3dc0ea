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

#ifndef SENSE_ALIGN_EMBEDDING_H_
#define SENSE_ALIGN_EMBEDDING_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sense_align/inventory.h"

namespace sense_align {

// A fixed-dimension float vector. `zero` marks a vector that could not be
// normalized (all components zero).
struct EmbeddingVector {
  std::vector<float> values;
  bool zero = false;

  size_t dim() const { return values.size(); }

  friend bool operator==(const EmbeddingVector&,
                         const EmbeddingVector&) = default;
};

// Scales to unit L2 norm (64-bit accumulation). A zero vector is left as is
// and flagged.
void Normalize(EmbeddingVector& v);

// Store key conventions.
std::string GlossKey(const GlossId& id);                      // g:<id>
std::string ContextKey(const GlossId& id, size_t example);    // c:<id>:<i>
std::string InstanceKey(std::string_view instance_id);        // x:<id>

// Key -> vector map with a fixed dimension. Records keep insertion order, which
// is also the order they are written in.
class EmbeddingStore {
 public:
  explicit EmbeddingStore(uint32_t dim);

  uint32_t dim() const { return dim_; }
  size_t size() const { return keys_.size(); }

  // Throws DataError on dim mismatch, duplicate key, non-finite values, or a
  // key longer than 65535 bytes.
  void Add(std::string key, EmbeddingVector vec);

  const EmbeddingVector* Find(std::string_view key) const;
  // Throws DataError naming the key when absent.
  const EmbeddingVector& Get(std::string_view key) const;

  const std::vector<std::string>& keys() const { return keys_; }

 private:
  uint32_t dim_;
  std::vector<std::string> keys_;
  std::unordered_map<std::string, EmbeddingVector> records_;
};

// Binary layout (little-endian): "SEMB", version 0x01, u32 dim, u64 count,
// then per record u16 key length, key bytes, dim float32 values.
std::string SerializeStore(const EmbeddingStore& store);
EmbeddingStore ParseStore(std::string_view bytes,
                          std::optional<uint32_t> expected_dim = std::nullopt);

EmbeddingStore LoadStore(const std::filesystem::path& path,
                         std::optional<uint32_t> expected_dim = std::nullopt);
void WriteStore(const EmbeddingStore& store, const std::filesystem::path& path);

// Deterministic hashed bag-of-words. Each token t contributes sign(h) to
// bucket h mod dim, where h = FNV-1a-64 over the 8 little-endian seed bytes
// followed by the token bytes, and the sign is + when bit 63 of h is clear.
// The sum is L2-normalized; no tokens yields a flagged zero vector.
EmbeddingVector BaselineEmbedSentence(std::string_view text, uint32_t dim,
                                      uint64_t seed);

// Target-word vector: mean of the baseline vectors of the tokens overlapping
// the target span, averaged 50/50 with the whole-sentence vector, then
// normalized. Throws DataError when no span is given and the lemma does not
// occur.
EmbeddingVector BaselineEmbedTarget(const ExampleSentence& sentence,
                                    std::string_view lemma, uint32_t dim,
                                    uint64_t seed);

struct BaselineReport {
  size_t glosses = 0;
  size_t contexts = 0;
  // Examples whose target could not be located; they get the whole-sentence
  // vector instead.
  size_t fallback_contexts = 0;
  size_t zero_vectors = 0;
};

// Adds a g: record for every gloss and a c: record for every example of
// `inv`, in inventory order. Vectors are computed across OpenMP threads and
// appended serially, so the store is identical for any thread count.
BaselineReport AddBaselineEmbeddings(const Inventory& inv, uint64_t seed,
                                     EmbeddingStore& store, int threads = 1);

// Single-threaded reference for AddBaselineEmbeddings.
BaselineReport AddBaselineEmbeddingsSerial(const Inventory& inv, uint64_t seed,
                                           EmbeddingStore& store);

// Cosine similarity in [-1, 1], accumulating over index 0..dim-1 in double.
// Throws DataError on dim mismatch or a zero vector.
double Cosine(std::span<const float> u, std::span<const float> v);
inline double Cosine(const EmbeddingVector& u, const EmbeddingVector& v) {
  return Cosine(std::span<const float>(u.values),
                std::span<const float>(v.values));
}

}  // namespace sense_align

#endif  // SENSE_ALIGN_EMBEDDING_H_

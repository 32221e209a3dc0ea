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

#include "sense_align/embedding.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>

#include <fmt/format.h>

#include "sense_align/error.h"
#include "sense_align/jsonl.h"
#include "sense_align/text.h"

namespace sense_align {
namespace {

constexpr char kMagic[4] = {'S', 'E', 'M', 'B'};
constexpr uint8_t kVersion = 0x01;

constexpr uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr uint64_t kFnvPrime = 1099511628211ULL;

template <typename T>
void PutLe(std::string& out, T value) {
  for (size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((static_cast<uint64_t>(value) >> (8 * i)) & 0xFF));
  }
}

class ByteReader {
 public:
  explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}

  template <typename T>
  T Get(const char* what) {
    Need(sizeof(T), what);
    uint64_t v = 0;
    for (size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<uint64_t>(static_cast<uint8_t>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += sizeof(T);
    return static_cast<T>(v);
  }

  std::string_view Take(size_t n, const char* what) {
    Need(n, what);
    std::string_view out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void Need(size_t n, const char* what) const {
    if (bytes_.size() - pos_ < n) {
      throw DataError(fmt::format("truncated embedding file: {} at byte {}",
                                  what, pos_));
    }
  }

  std::string_view bytes_;
  size_t pos_ = 0;
};

uint64_t SeededTokenHash(std::string_view token, uint64_t seed) {
  uint64_t h = kFnvOffset;
  for (size_t i = 0; i < 8; ++i) {
    h ^= (seed >> (8 * i)) & 0xFF;
    h *= kFnvPrime;
  }
  for (unsigned char c : token) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

void AccumulateToken(std::vector<double>& acc, std::string_view token,
                     uint64_t seed) {
  const uint64_t h = SeededTokenHash(token, seed);
  acc[h % acc.size()] += (h >> 63) == 0 ? 1.0 : -1.0;
}

EmbeddingVector NormalizedFrom(const std::vector<double>& acc) {
  double norm2 = 0.0;
  for (double x : acc) norm2 += x * x;
  EmbeddingVector out;
  out.values.resize(acc.size(), 0.0f);
  if (norm2 == 0.0) {
    out.zero = true;
    return out;
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (size_t i = 0; i < acc.size(); ++i) {
    out.values[i] = static_cast<float>(acc[i] * inv);
  }
  return out;
}

}  // namespace

void Normalize(EmbeddingVector& v) {
  double norm2 = 0.0;
  for (float x : v.values) norm2 += static_cast<double>(x) * x;
  if (norm2 == 0.0) {
    v.zero = true;
    return;
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (float& x : v.values) x = static_cast<float>(x * inv);
  v.zero = false;
}

std::string GlossKey(const GlossId& id) { return "g:" + id.ToString(); }

std::string ContextKey(const GlossId& id, size_t example) {
  return fmt::format("c:{}:{}", id.ToString(), example);
}

std::string InstanceKey(std::string_view instance_id) {
  return "x:" + std::string(instance_id);
}

EmbeddingStore::EmbeddingStore(uint32_t dim) : dim_(dim) {
  if (dim == 0) throw DataError("embedding dim must be positive");
}

void EmbeddingStore::Add(std::string key, EmbeddingVector vec) {
  if (vec.dim() != dim_) {
    throw DataError(fmt::format("embedding '{}' has dim {}, store dim is {}",
                                key, vec.dim(), dim_));
  }
  if (key.size() > 0xFFFF) throw DataError("embedding key too long");
  for (float x : vec.values) {
    if (!std::isfinite(x)) {
      throw DataError("non-finite value in embedding '" + key + "'");
    }
  }
  if (records_.count(key)) throw DataError("duplicate embedding key '" + key + "'");
  keys_.push_back(key);
  records_.emplace(std::move(key), std::move(vec));
}

const EmbeddingVector* EmbeddingStore::Find(std::string_view key) const {
  auto it = records_.find(std::string(key));
  return it == records_.end() ? nullptr : &it->second;
}

const EmbeddingVector& EmbeddingStore::Get(std::string_view key) const {
  const EmbeddingVector* v = Find(key);
  if (!v) throw DataError("missing embedding for key '" + std::string(key) + "'");
  return *v;
}

std::string SerializeStore(const EmbeddingStore& store) {
  std::string out(kMagic, sizeof(kMagic));
  out.push_back(static_cast<char>(kVersion));
  PutLe<uint32_t>(out, store.dim());
  PutLe<uint64_t>(out, store.size());
  for (const std::string& key : store.keys()) {
    PutLe<uint16_t>(out, static_cast<uint16_t>(key.size()));
    out += key;
    for (float x : store.Get(key).values) {
      PutLe<uint32_t>(out, std::bit_cast<uint32_t>(x));
    }
  }
  return out;
}

EmbeddingStore ParseStore(std::string_view bytes,
                          std::optional<uint32_t> expected_dim) {
  ByteReader in(bytes);
  if (in.Take(4, "magic") != std::string_view(kMagic, 4)) {
    throw DataError("bad magic: not an embedding file");
  }
  const uint8_t version = in.Get<uint8_t>("version");
  if (version != kVersion) {
    throw DataError(fmt::format("unsupported embedding file version {}", version));
  }
  const uint32_t dim = in.Get<uint32_t>("dim");
  if (expected_dim && *expected_dim != dim) {
    throw DataError(fmt::format("embedding dim {} does not match expected {}",
                                dim, *expected_dim));
  }
  const uint64_t count = in.Get<uint64_t>("record count");
  EmbeddingStore store(dim);
  for (uint64_t r = 0; r < count; ++r) {
    const uint16_t key_len = in.Get<uint16_t>("key length");
    std::string key(in.Take(key_len, "key"));
    EmbeddingVector vec;
    vec.values.resize(dim);
    for (uint32_t i = 0; i < dim; ++i) {
      vec.values[i] = std::bit_cast<float>(in.Get<uint32_t>("vector"));
    }
    vec.zero = std::all_of(vec.values.begin(), vec.values.end(),
                           [](float x) { return x == 0.0f; });
    store.Add(std::move(key), std::move(vec));
  }
  if (in.remaining() != 0) {
    throw DataError(fmt::format("{} trailing bytes after {} records",
                                in.remaining(), count));
  }
  return store;
}

EmbeddingStore LoadStore(const std::filesystem::path& path,
                         std::optional<uint32_t> expected_dim) {
  try {
    return ParseStore(ReadFile(path), expected_dim);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void WriteStore(const EmbeddingStore& store, const std::filesystem::path& path) {
  WriteFile(path, SerializeStore(store));
}

EmbeddingVector BaselineEmbedSentence(std::string_view text, uint32_t dim,
                                      uint64_t seed) {
  if (dim < 8) throw DataError("baseline embedding dim must be at least 8");
  std::vector<double> acc(dim, 0.0);
  for (const Token& t : Tokenize(text)) AccumulateToken(acc, t.text, seed);
  return NormalizedFrom(acc);
}

EmbeddingVector BaselineEmbedTarget(const ExampleSentence& sentence,
                                    std::string_view lemma, uint32_t dim,
                                    uint64_t seed) {
  const auto span = ResolveTargetSpan(sentence, lemma);
  if (!span) {
    throw DataError(fmt::format("target '{}' not found in \"{}\"", lemma,
                                sentence.text));
  }
  const size_t begin = ByteOffsetOf(sentence.text, span->start);
  const size_t end = ByteOffsetOf(sentence.text, span->end);

  std::vector<double> mean(dim, 0.0);
  size_t inside = 0;
  for (const Token& t : Tokenize(sentence.text)) {
    if (t.end <= begin || t.begin >= end) continue;
    const EmbeddingVector tv = BaselineEmbedSentence(t.text, dim, seed);
    for (uint32_t i = 0; i < dim; ++i) mean[i] += tv.values[i];
    ++inside;
  }
  if (inside == 0) {
    throw DataError(fmt::format("target span of \"{}\" covers no tokens",
                                sentence.text));
  }
  const EmbeddingVector whole = BaselineEmbedSentence(sentence.text, dim, seed);
  std::vector<double> mixed(dim);
  for (uint32_t i = 0; i < dim; ++i) {
    mixed[i] = 0.5 * (mean[i] / static_cast<double>(inside)) +
               0.5 * static_cast<double>(whole.values[i]);
  }
  return NormalizedFrom(mixed);
}

namespace {

struct BaselineJob {
  std::string key;
  const Gloss* gloss;
  std::optional<size_t> example;  // absent for the definition
};

std::vector<BaselineJob> BaselineJobs(const Inventory& inv) {
  std::vector<BaselineJob> jobs;
  for (const auto& [key, glosses] : inv.entries()) {
    for (const Gloss& g : glosses) {
      jobs.push_back({GlossKey(g.id), &g, std::nullopt});
      for (size_t e = 0; e < g.examples.size(); ++e) {
        jobs.push_back({ContextKey(g.id, e), &g, e});
      }
    }
  }
  return jobs;
}

// Returns true when the target fallback was taken.
bool RunJob(const BaselineJob& job, uint32_t dim, uint64_t seed,
            EmbeddingVector& out) {
  if (!job.example) {
    out = BaselineEmbedSentence(job.gloss->definition, dim, seed);
    return false;
  }
  const ExampleSentence& ex = job.gloss->examples[*job.example];
  if (!ResolveTargetSpan(ex, job.gloss->id.lemma)) {
    out = BaselineEmbedSentence(ex.text, dim, seed);
    return true;
  }
  out = BaselineEmbedTarget(ex, job.gloss->id.lemma, dim, seed);
  return false;
}

BaselineReport Commit(std::vector<BaselineJob>& jobs,
                      std::vector<EmbeddingVector>& vectors,
                      const std::vector<char>& fallback, EmbeddingStore& store) {
  BaselineReport report;
  for (size_t i = 0; i < jobs.size(); ++i) {
    (jobs[i].example ? report.contexts : report.glosses) += 1;
    if (fallback[i]) ++report.fallback_contexts;
    if (vectors[i].zero) ++report.zero_vectors;
    store.Add(std::move(jobs[i].key), std::move(vectors[i]));
  }
  return report;
}

}  // namespace

BaselineReport AddBaselineEmbeddings(const Inventory& inv, uint64_t seed,
                                     EmbeddingStore& store, int threads) {
  std::vector<BaselineJob> jobs = BaselineJobs(inv);
  std::vector<EmbeddingVector> vectors(jobs.size());
  std::vector<char> fallback(jobs.size(), 0);
  std::vector<std::exception_ptr> errors(jobs.size());
  const long n = static_cast<long>(jobs.size());
  const uint32_t dim = store.dim();
#pragma omp parallel for schedule(static) num_threads(threads > 0 ? threads : 1)
  for (long i = 0; i < n; ++i) {
    try {
      fallback[i] = RunJob(jobs[i], dim, seed, vectors[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return Commit(jobs, vectors, fallback, store);
}

BaselineReport AddBaselineEmbeddingsSerial(const Inventory& inv, uint64_t seed,
                                           EmbeddingStore& store) {
  std::vector<BaselineJob> jobs = BaselineJobs(inv);
  std::vector<EmbeddingVector> vectors(jobs.size());
  std::vector<char> fallback(jobs.size(), 0);
  for (size_t i = 0; i < jobs.size(); ++i) {
    fallback[i] = RunJob(jobs[i], store.dim(), seed, vectors[i]);
  }
  return Commit(jobs, vectors, fallback, store);
}

double Cosine(std::span<const float> u, std::span<const float> v) {
  if (u.size() != v.size()) {
    throw DataError(fmt::format("cosine of vectors with dims {} and {}",
                                u.size(), v.size()));
  }
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (size_t i = 0; i < u.size(); ++i) {
    const double a = u[i], b = v[i];
    dot += a * b;
    nu += a * a;
    nv += b * b;
  }
  if (nu == 0.0 || nv == 0.0) throw DataError("cosine of a zero vector");
  return std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), -1.0, 1.0);
}

}  // namespace sense_align

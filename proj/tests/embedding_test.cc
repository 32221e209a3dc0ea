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

#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <filesystem>
#include <random>

#include "sense_align/error.h"

namespace sense_align {
namespace {

EmbeddingVector Vec(std::vector<float> v) { return EmbeddingVector{std::move(v)}; }

std::string Header(uint32_t dim, uint64_t count) {
  std::string s = "SEMB";
  s.push_back('\x01');
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((dim >> (8 * i)) & 0xFF));
  for (int i = 0; i < 8; ++i) s.push_back(static_cast<char>((count >> (8 * i)) & 0xFF));
  return s;
}

TEST(EmbeddingStoreTest, EmptyFile) {
  const EmbeddingStore store = ParseStore(Header(8, 0));
  EXPECT_EQ(store.dim(), 8u);
  EXPECT_EQ(store.size(), 0u);
}

TEST(EmbeddingStoreTest, SingleRecordBitLayout) {
  EmbeddingStore store(4);
  store.Add("g:a:run:verb:0", Vec({1.0f, -2.0f, 0.5f, 0.0f}));
  const std::string bytes = SerializeStore(store);
  // Header (17) + u16 key length + 14 key bytes + 4 floats.
  ASSERT_EQ(bytes.size(), 17u + 2 + 14 + 16);
  EXPECT_EQ(bytes.substr(0, 17), Header(4, 1));
  EXPECT_EQ(bytes[17], '\x0e');
  EXPECT_EQ(bytes[18], '\x00');
  EXPECT_EQ(bytes.substr(19, 14), "g:a:run:verb:0");
  // -2.0f = 0xC0000000 little-endian.
  EXPECT_EQ(bytes.substr(37, 4), std::string("\x00\x00\x00\xC0", 4));

  const EmbeddingStore back = ParseStore(bytes);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back.Get("g:a:run:verb:0").values, (std::vector<float>{1.0f, -2.0f, 0.5f, 0.0f}));
}

TEST(EmbeddingStoreTest, RoundTripIsBitExactAndOrderPreserving) {
  std::mt19937_64 rng(3);
  std::normal_distribution<float> dist;
  EmbeddingStore store(16);
  for (int r = 0; r < 10; ++r) {
    std::vector<float> v(16);
    for (float& x : v) x = dist(rng);
    v[3] = -0.0f;
    v[5] = std::numeric_limits<float>::denorm_min();
    store.Add("k" + std::to_string(9 - r), Vec(v));
  }
  const auto path = std::filesystem::temp_directory_path() / "sense_align_store.semb";
  WriteStore(store, path);
  const EmbeddingStore back = LoadStore(path, 16u);
  EXPECT_EQ(back.keys(), store.keys());
  for (const std::string& key : store.keys()) {
    const auto& a = store.Get(key).values;
    const auto& b = back.Get(key).values;
    ASSERT_EQ(a.size(), b.size());
    for (size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(std::bit_cast<uint32_t>(a[i]), std::bit_cast<uint32_t>(b[i]));
    }
  }
  EXPECT_EQ(SerializeStore(back), SerializeStore(store));
  std::filesystem::remove(path);
}

TEST(EmbeddingStoreTest, RejectsBadFiles) {
  EmbeddingStore store(2);
  store.Add("a", Vec({1.0f, 2.0f}));
  const std::string good = SerializeStore(store);

  std::string bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_THROW(ParseStore(bad_magic), DataError);

  std::string bad_version = good;
  bad_version[4] = '\x02';
  EXPECT_THROW(ParseStore(bad_version), DataError);

  EXPECT_THROW(ParseStore(good.substr(0, good.size() - 1)), DataError);
  EXPECT_THROW(ParseStore(good + "x"), DataError);
  EXPECT_THROW(ParseStore(good, 3u), DataError);

  // Two copies of the record under a header claiming two.
  std::string dup = Header(2, 2) + good.substr(17) + good.substr(17);
  EXPECT_THROW(ParseStore(dup), DataError);

  std::string nan = good;
  const uint32_t qnan = 0x7FC00000u;
  for (int i = 0; i < 4; ++i) nan[nan.size() - 4 + i] = static_cast<char>((qnan >> (8 * i)) & 0xFF);
  EXPECT_THROW(ParseStore(nan), DataError);
}

TEST(EmbeddingStoreTest, AddValidates) {
  EmbeddingStore store(2);
  EXPECT_THROW(store.Add("a", Vec({1.0f})), DataError);
  EXPECT_THROW(store.Add("a", Vec({1.0f, INFINITY})), DataError);
  store.Add("a", Vec({1.0f, 0.0f}));
  EXPECT_THROW(store.Add("a", Vec({1.0f, 0.0f})), DataError);
  EXPECT_THROW(store.Get("missing"), DataError);
  EXPECT_THROW(EmbeddingStore(0), DataError);
}

TEST(KeyTest, Conventions) {
  const GlossId id{"wn", "run", PosTag::kVerb, 2};
  EXPECT_EQ(GlossKey(id), "g:wn:run:verb:2");
  EXPECT_EQ(ContextKey(id, 1), "c:wn:run:verb:2:1");
  EXPECT_EQ(InstanceKey("d000.s001.t002"), "x:d000.s001.t002");
}

TEST(NormalizeTest, UnitNormOrFlaggedZero) {
  EmbeddingVector v = Vec({3.0f, 4.0f});
  Normalize(v);
  EXPECT_NEAR(v.values[0], 0.6f, 1e-7);
  EXPECT_NEAR(v.values[1], 0.8f, 1e-7);
  EXPECT_FALSE(v.zero);
  EmbeddingVector z = Vec({0.0f, 0.0f});
  Normalize(z);
  EXPECT_TRUE(z.zero);
  EXPECT_EQ(z.values, (std::vector<float>{0.0f, 0.0f}));
}

TEST(CosineTest, Examples) {
  EXPECT_DOUBLE_EQ(Cosine(Vec({1, 0}), Vec({0, 1})), 0.0);
  // Scratchpad value: 32 / sqrt(14 * 77).
  EXPECT_NEAR(Cosine(Vec({1, 2, 3}), Vec({4, 5, 6})), 0.9746318461970762, 1e-12);
  EXPECT_THROW(Cosine(Vec({1, 2}), Vec({1, 2, 3})), DataError);
  EXPECT_THROW(Cosine(Vec({0, 0}), Vec({1, 2})), DataError);
}

TEST(CosinePropertyTest, SymmetryScaleAndRange) {
  std::mt19937_64 rng(11);
  std::normal_distribution<float> dist;
  std::uniform_real_distribution<float> scale(0.01f, 100.0f);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<float> u(1 + trial % 37), v(u.size());
    for (float& x : u) x = dist(rng);
    for (float& x : v) x = dist(rng);
    const double uv = Cosine(Vec(u), Vec(v));
    EXPECT_EQ(uv, Cosine(Vec(v), Vec(u)));
    EXPECT_GE(uv, -1.0);
    EXPECT_LE(uv, 1.0);
    const float a = scale(rng);
    std::vector<float> pos(u), neg(u);
    for (size_t i = 0; i < u.size(); ++i) {
      pos[i] = a * u[i];
      neg[i] = -a * u[i];
    }
    EXPECT_NEAR(Cosine(Vec(u), Vec(pos)), 1.0, 1e-6);
    EXPECT_NEAR(Cosine(Vec(u), Vec(neg)), -1.0, 1e-6);
    EXPECT_NEAR(Cosine(Vec(u), Vec(u)), 1.0, 1e-12);
  }
}

TEST(BaselineEmbedTest, DeterministicAndUnitNorm) {
  const auto a = BaselineEmbedSentence("to look for something", 256, 17);
  const auto b = BaselineEmbedSentence("to look for something", 256, 17);
  EXPECT_EQ(a, b);
  EXPECT_FALSE(a.zero);
  double n2 = 0;
  for (float x : a.values) n2 += static_cast<double>(x) * x;
  EXPECT_NEAR(n2, 1.0, 1e-6);
  EXPECT_DOUBLE_EQ(Cosine(a, b), 1.0);
  EXPECT_NE(a, BaselineEmbedSentence("to look for something", 256, 18));
}

TEST(BaselineEmbedTest, MatchesIndependentReimplementation) {
  // Frozen from a separate scripting reimplementation of the hashing scheme.
  // "to look for something carefully" at dim 256, seed 17 hashes to buckets
  // to:221-, look:207+, for:171-, something:96+, carefully:55-.
  const auto v = BaselineEmbedSentence("to look for something carefully", 256, 17);
  const float c = static_cast<float>(1.0 / std::sqrt(5.0));
  EXPECT_FLOAT_EQ(v.values[221], -c);
  EXPECT_FLOAT_EQ(v.values[207], c);
  EXPECT_FLOAT_EQ(v.values[171], -c);
  EXPECT_FLOAT_EQ(v.values[96], c);
  EXPECT_FLOAT_EQ(v.values[55], -c);
  EXPECT_EQ(std::count(v.values.begin(), v.values.end(), 0.0f), 251);

  // Disjoint vocabularies still meet through one bucket collision.
  EXPECT_NEAR(Cosine(v, BaselineEmbedSentence("quick brown fox", 256, 17)),
              -0.2581988897471611, 1e-7);
  EXPECT_NEAR(Cosine(v, BaselineEmbedSentence("to look for a lost key carefully", 256, 17)),
              0.6761234037828132, 1e-7);
}

TEST(BaselineEmbedTest, WordOrderInvariant) {
  std::mt19937_64 rng(5);
  std::vector<std::string> words{"the", "bank", "of", "the", "river", "was", "steep"};
  const auto join = [](const std::vector<std::string>& w) {
    std::string s;
    for (const auto& x : w) s += x + " ";
    return s;
  };
  const auto ref = BaselineEmbedSentence(join(words), 64, 17);
  for (int i = 0; i < 10; ++i) {
    std::shuffle(words.begin(), words.end(), rng);
    EXPECT_EQ(BaselineEmbedSentence(join(words), 64, 17), ref);
  }
}

TEST(BaselineEmbedTest, EmptyTokenListIsFlaggedZero) {
  const auto v = BaselineEmbedSentence(" -- !", 16, 17);
  EXPECT_TRUE(v.zero);
  EXPECT_THROW(BaselineEmbedSentence("x", 4, 17), DataError);
}

TEST(BaselineTargetTest, SingleTokenEqualsSentenceVector) {
  EXPECT_EQ(BaselineEmbedTarget({"search", std::nullopt}, "search", 64, 17),
            BaselineEmbedSentence("search", 64, 17));
}

TEST(BaselineTargetTest, SpanMatchesIndependentOracle) {
  // Span over tokens 2-3 ("on the") of a 6-token sentence; expected nonzero
  // components frozen from the scratchpad oracle.
  const ExampleSentence s{"she sat on the river bank", TextSpan{8, 14}};
  const auto v = BaselineEmbedTarget(s, "bank", 256, 17);
  const std::vector<std::pair<size_t, float>> want{
      {61, -0.596744954586029f}, {70, -0.26823073625564575f},
      {104, 0.26823073625564575f}, {118, 0.26823073625564575f},
      {199, 0.596744954586029f}, {250, 0.26823073625564575f}};
  size_t nonzero = 0;
  for (float x : v.values) nonzero += x != 0.0f;
  EXPECT_EQ(nonzero, want.size());
  for (const auto& [i, x] : want) EXPECT_NEAR(v.values[i], x, 1e-6) << i;
  EXPECT_NEAR(Cosine(v, BaselineEmbedSentence(s.text, 256, 17)), 0.9252591763854306, 1e-6);
}

TEST(BaselineTargetTest, MissingLemmaIsAnError) {
  EXPECT_THROW(BaselineEmbedTarget({"the river flows", std::nullopt}, "bank", 64, 17),
               DataError);
}

TEST(BaselineInventoryTest, ParallelMatchesSerial) {
  Inventory inv("d");
  for (int w = 0; w < 40; ++w) {
    const std::string lemma = "word" + std::to_string(w);
    inv.AddEntry(lemma, PosTag::kNoun,
                 {{"first sense of " + lemma, {{"a " + lemma + " here", {}}, {"no target", {}}}},
                  {"second sense", {{"the " + lemma, {}}}}});
  }
  EmbeddingStore serial(32), parallel(32);
  const BaselineReport rs = AddBaselineEmbeddingsSerial(inv, 17, serial);
  const BaselineReport rp = AddBaselineEmbeddings(inv, 17, parallel, 4);
  EXPECT_EQ(SerializeStore(serial), SerializeStore(parallel));
  EXPECT_EQ(rs.glosses, 80u);
  EXPECT_EQ(rs.contexts, 120u);
  EXPECT_EQ(rs.fallback_contexts, 40u);
  EXPECT_EQ(rp.fallback_contexts, 40u);
  ASSERT_NE(serial.Find("c:d:word3:noun:0:1"), nullptr);
}

}  // namespace
}  // namespace sense_align

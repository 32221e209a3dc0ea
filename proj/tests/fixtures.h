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

#ifndef SENSE_ALIGN_TESTS_FIXTURES_H_
#define SENSE_ALIGN_TESTS_FIXTURES_H_

// In-memory fixtures shared by the unit tests and the acceptance binary.

#include <cmath>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sense_align/embedding.h"
#include "sense_align/head.h"
#include "sense_align/inventory.h"

namespace sense_align::testing {

// "search"/verb described by three dictionaries whose sense lists only
// partly overlap. Senses: 0 look carefully, 1 frisk, 2 query a computer,
// 3 investigate, 4 hunt. wn lists {0,1,2,3}, wikt {2,0,1}, ox {0,3,2,4}.
// Definition vectors are hand-placed in 8 dimensions so the correct pairs
// score between 0.63 and 0.94 and every forced wrong pair stays below 0.2.
struct SearchFixture {
  std::vector<Inventory> inventories;
  EmbeddingStore store{8};
  // Hand-labeled correct links as (gloss_a, gloss_b) id strings.
  std::set<std::pair<std::string, std::string>> gold;
};

inline SearchFixture MakeSearchFixture() {
  struct Sense {
    const char* definition;
    const char* example;
    std::vector<float> vec;
  };
  const std::vector<std::pair<std::string, std::vector<Sense>>> dictionaries{
      {"wn",
       {{"try to locate something by looking carefully",
         "we will search the attic for the letters", {1, 0.2f, 0, 0, 0, 0.3f, 0, 0}},
        {"examine a person for concealed weapons",
         "guards search every visitor", {0.1f, 1, 0, 0, 0, 0, 0.5f, 0}},
        {"look for information using a computer",
         "search the catalogue by author", {0, 0, 1, 0.1f, 0, 0, 0, 0.9f}},
        {"inquire into a matter thoroughly",
         "they search their consciences", {0, 0, 0.2f, 1, 0, 0.4f, 0, 0}}}},
      {"wikt",
       {{"query a database or the web", "search the web for reviews",
         {0, 0, 1, 0, 0, 0, 0.2f, 0}},
        {"look thoroughly in order to find something", "search the house for the keys",
         {1, 0, 0, 0.1f, 0, 0, 0, 0.6f}},
        {"check someone's clothing for hidden objects", "police search the suspect",
         {0, 1, 0, 0, 0.1f, 0.7f, 0, 0}}}},
      {"ox",
       {{"look carefully in a place to find something", "search the room",
         {0.9f, 0.1f, 0, 0, 0, 0, 0.8f, 0}},
        {"examine one's thoughts or feelings", "search your heart",
         {0, 0, 0, 1, 0, 0, 0, 0.2f}},
        {"run a query through an index", "search the archive online",
         {0, 0, 1, 0.3f, 0, 0, 0, 0}},
        {"hunt game across open country", "hounds search the moor",
         {0, 0.1f, 0, 0, 1, 0, 0, 0}}}},
  };

  SearchFixture f;
  for (const auto& [name, senses] : dictionaries) {
    Inventory inv(name);
    std::vector<GlossText> glosses;
    for (const Sense& s : senses) glosses.push_back({s.definition, {{s.example, {}}}});
    inv.AddEntry("search", PosTag::kVerb, std::move(glosses));
    if (name == "wn") {
      inv.AddEntry("lookup", PosTag::kNoun, {{"the act of consulting a reference", {}}});
      f.store.Add("g:wn:lookup:noun:0", EmbeddingVector{{1, 1, 1, 1, 0, 0, 0, 0}});
    }
    for (size_t i = 0; i < senses.size(); ++i) {
      const GlossId id{name, "search", PosTag::kVerb, i};
      EmbeddingVector v{senses[i].vec};
      Normalize(v);
      f.store.Add(GlossKey(id), v);
      f.store.Add(ContextKey(id, 0), v);
    }
    f.inventories.push_back(std::move(inv));
  }
  const auto id = [](const char* inv, size_t i) {
    return GlossId{inv, "search", PosTag::kVerb, i}.ToString();
  };
  f.gold = {{id("wn", 0), id("wikt", 1)}, {id("wn", 1), id("wikt", 2)},
            {id("wn", 2), id("wikt", 0)}, {id("wn", 0), id("ox", 0)},
            {id("wn", 2), id("ox", 2)},   {id("wn", 3), id("ox", 1)},
            {id("wikt", 1), id("ox", 0)}, {id("wikt", 0), id("ox", 2)}};
  return f;
}

// `count` positives with u = v and `count` negatives with u orthogonal to v,
// all unit vectors of width n drawn from a seeded Gaussian.
// Examples point into `vectors`, so the set is move-only.
struct SeparableSet {
  SeparableSet() = default;
  SeparableSet(SeparableSet&&) = default;
  SeparableSet(const SeparableSet&) = delete;

  std::vector<std::vector<float>> vectors;
  std::vector<LabeledExample> examples;
};

inline SeparableSet MakeSeparableSet(size_t count, size_t n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  const auto unit = [&](std::vector<double> x) {
    double norm = 0;
    for (double v : x) norm += v * v;
    std::vector<float> out;
    for (double v : x) out.push_back(static_cast<float>(v / std::sqrt(norm)));
    return out;
  };
  const auto draw = [&] {
    std::vector<double> x(n);
    for (double& v : x) v = dist(rng);
    return x;
  };
  SeparableSet set;
  set.vectors.reserve(4 * count);
  std::vector<std::pair<size_t, size_t>> index;
  for (size_t k = 0; k < count; ++k) {
    set.vectors.push_back(unit(draw()));
    index.emplace_back(set.vectors.size() - 1, set.vectors.size() - 1);
  }
  for (size_t k = 0; k < count; ++k) {
    const std::vector<double> a = draw();
    std::vector<double> b = draw();
    double ab = 0, aa = 0;
    for (size_t i = 0; i < n; ++i) {
      ab += a[i] * b[i];
      aa += a[i] * a[i];
    }
    for (size_t i = 0; i < n; ++i) b[i] -= ab / aa * a[i];
    set.vectors.push_back(unit(a));
    set.vectors.push_back(unit(b));
    index.emplace_back(set.vectors.size() - 2, set.vectors.size() - 1);
  }
  for (size_t k = 0; k < index.size(); ++k) {
    set.examples.push_back({set.vectors[index[k].first], set.vectors[index[k].second],
                            k < count});
  }
  return set;
}

}  // namespace sense_align::testing

#endif  // SENSE_ALIGN_TESTS_FIXTURES_H_

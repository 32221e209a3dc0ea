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

#include "sense_align/pairgen.h"

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "fixtures.h"
#include "sense_align/error.h"

namespace sense_align {
namespace {

// Adds `lemma`/noun with one gloss per entry of `examples`, gloss i having
// examples[i] example sentences that each mention the lemma.
void AddWord(Inventory& inv, const std::string& lemma, const std::vector<size_t>& examples) {
  std::vector<GlossText> glosses;
  for (size_t g = 0; g < examples.size(); ++g) {
    GlossText t{inv.name() + " sense " + std::to_string(g) + " of " + lemma, {}};
    for (size_t e = 0; e < examples[g]; ++e) {
      t.examples.push_back({"use " + lemma + " like this #" + std::to_string(e), {}});
    }
    glosses.push_back(std::move(t));
  }
  inv.AddEntry(lemma, PosTag::kNoun, std::move(glosses));
}

AlignmentLink Link(const std::string& a, const std::string& b, double score = 0.9) {
  return {GlossId::Parse(a), GlossId::Parse(b), score};
}

TEST(CrossInventoryTest, OneLinkGivesSumOfExamples) {
  Inventory a("a"), b("b");
  AddWord(a, "w", {2});
  AddWord(b, "w", {3});
  const std::vector<AlignmentLink> links{Link("a:w:noun:0", "b:w:noun:0")};
  const auto pairs = GenerateCrossInventory(links, a, b);
  const PairCounts c = CountLabels(pairs);
  EXPECT_EQ(c.positive, 5u);
  EXPECT_EQ(c.negative, 0u);
  for (const auto& p : pairs) {
    EXPECT_EQ(p.kind, PairKind::kGlossContext);
    EXPECT_EQ(p.source, PairSource::kCrossInventory);
    ASSERT_TRUE(p.gloss.has_value());
    EXPECT_NE(p.gloss->id.inventory, p.context.gloss.inventory);
  }
}

TEST(CrossInventoryTest, TwoByTwoGridCounts) {
  for (size_t e = 1; e <= 4; ++e) {
    Inventory a("a"), b("b");
    AddWord(a, "w", {e, e});
    AddWord(b, "w", {e, e});
    const std::vector<AlignmentLink> links{Link("a:w:noun:0", "b:w:noun:1"),
                                           Link("a:w:noun:1", "b:w:noun:0")};
    const PairCounts c = CountLabels(GenerateCrossInventory(links, a, b));
    EXPECT_EQ(c.positive, 4 * e);
    EXPECT_EQ(c.negative, 4 * e);
  }
}

TEST(CrossInventoryTest, UnalignedGlossesContributeNothing) {
  Inventory a("a"), b("b");
  AddWord(a, "w", {2, 2, 5});
  AddWord(b, "w", {2, 2, 7});
  // Reversed orientation is accepted.
  const std::vector<AlignmentLink> links{Link("b:w:noun:0", "a:w:noun:0"),
                                         Link("a:w:noun:1", "b:w:noun:1")};
  const auto pairs = GenerateCrossInventory(links, a, b);
  EXPECT_EQ(CountLabels(pairs).positive, 8u);
  EXPECT_EQ(CountLabels(pairs).negative, 8u);
  for (const auto& p : pairs) {
    EXPECT_NE(p.context.gloss.index, 2u);
    EXPECT_NE(p.gloss->id.index, 2u);
  }
}

TEST(CrossInventoryTest, Errors) {
  Inventory a("a"), b("b");
  AddWord(a, "w", {1, 1});
  AddWord(b, "w", {1, 1});
  EXPECT_TRUE(GenerateCrossInventory({}, a, b).empty());
  const std::vector<AlignmentLink> dangling{Link("a:w:noun:0", "b:w:noun:5")};
  EXPECT_THROW(GenerateCrossInventory(dangling, a, b), DataError);
  const std::vector<AlignmentLink> twice{Link("a:w:noun:0", "b:w:noun:0"),
                                         Link("a:w:noun:0", "b:w:noun:1")};
  EXPECT_THROW(GenerateCrossInventory(twice, a, b), DataError);
}

TEST(CrossInventoryTest, PositiveCountMatchesLinkSum) {
  const auto f = testing::MakeSearchFixture();
  const auto links = AlignAllPairs(f.inventories, f.store);
  for (size_t p = 0; p < 3; ++p) {
    for (size_t q = p + 1; q < 3; ++q) {
      const Inventory& a = f.inventories[p];
      const Inventory& b = f.inventories[q];
      std::vector<AlignmentLink> between;
      size_t want = 0;
      for (const auto& l : links) {
        if (l.gloss_a.inventory == a.name() && l.gloss_b.inventory == b.name()) {
          between.push_back(l);
          want += a.FindGloss(l.gloss_a)->examples.size() + b.FindGloss(l.gloss_b)->examples.size();
        }
      }
      EXPECT_EQ(CountLabels(GenerateCrossInventory(between, a, b)).positive, want);
    }
  }
}

TEST(WithinInventoryTest, ClosedFormCounts) {
  Inventory inv("d");
  AddWord(inv, "one", {3});
  AddWord(inv, "two", {2, 1});
  const auto pairs = GenerateWithinInventory(inv);
  const PairCounts c = CountLabels(pairs);
  EXPECT_EQ(c.positive, 6u);
  EXPECT_EQ(c.negative, 3u);

  Inventory mono("m");
  AddWord(mono, "x", {4});
  AddWord(mono, "y", {1});
  AddWord(mono, "z", {2});
  EXPECT_EQ(CountLabels(GenerateWithinInventory(mono)).negative, 0u);
  EXPECT_EQ(CountLabels(GenerateWithinInventory(mono)).positive, 7u);
}

TEST(WithinInventoryTest, RandomInventoriesMatchFormula) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<size_t> senses(1, 4), examples(0, 3);
  for (int trial = 0; trial < 30; ++trial) {
    Inventory inv("r");
    size_t pos = 0, neg = 0;
    for (int w = 0; w < 6; ++w) {
      std::vector<size_t> e(senses(rng));
      size_t total = 0;
      for (size_t& x : e) total += (x = examples(rng));
      for (size_t x : e) {
        pos += x;
        neg += total - x;
      }
      AddWord(inv, "w" + std::to_string(w), e);
    }
    const auto pairs = GenerateWithinInventory(inv);
    EXPECT_EQ(CountLabels(pairs).positive, pos);
    EXPECT_EQ(CountLabels(pairs).negative, neg);
    for (const auto& p : pairs) {
      EXPECT_EQ(p.context.gloss.lemma, p.gloss->id.lemma);
      EXPECT_EQ(p.context.gloss.pos, p.gloss->id.pos);
      if (p.label == PairLabel::kNegative) EXPECT_NE(p.context.gloss, p.gloss->id);
      if (p.label == PairLabel::kPositive) EXPECT_EQ(p.context.gloss, p.gloss->id);
    }
  }
}

TEST(ContextContextTest, ClosedFormCounts) {
  Inventory one("a");
  AddWord(one, "w", {3});
  EXPECT_EQ(CountLabels(GenerateContextContext(std::span(&one, 1), {})).positive, 3u);

  Inventory two("a");
  AddWord(two, "w", {2, 2});
  const PairCounts c = CountLabels(GenerateContextContext(std::span(&two, 1), {}));
  EXPECT_EQ(c.positive, 2u);  // one same-gloss pair inside each gloss
  EXPECT_EQ(c.negative, 4u);
}

// Labels every unordered pair of examples of one word directly from the
// pairing rules, leaving out pairs that no rule emits.
using ExampleKey = std::pair<std::string, size_t>;  // gloss id, example

std::map<std::pair<ExampleKey, ExampleKey>, PairLabel> BruteForceContextPairs(
    const std::vector<Inventory>& inventories, const std::vector<AlignmentLink>& links) {
  std::set<std::pair<std::string, std::string>> linked;
  std::set<std::pair<std::string, std::string>> aligned;  // (gloss, other inventory)
  for (const auto& l : links) {
    linked.emplace(l.gloss_a.ToString(), l.gloss_b.ToString());
    linked.emplace(l.gloss_b.ToString(), l.gloss_a.ToString());
    aligned.emplace(l.gloss_a.ToString(), l.gloss_b.inventory);
    aligned.emplace(l.gloss_b.ToString(), l.gloss_a.inventory);
  }
  struct Ex {
    GlossId gloss;
    size_t example;
  };
  std::map<EntryKey, std::vector<Ex>> by_word;
  for (const auto& inv : inventories) {
    for (const auto& [key, glosses] : inv.entries()) {
      for (const auto& g : glosses) {
        for (size_t e = 0; e < g.examples.size(); ++e) by_word[key].push_back({g.id, e});
      }
    }
  }
  std::map<std::pair<ExampleKey, ExampleKey>, PairLabel> out;
  for (const auto& [key, exs] : by_word) {
    for (size_t i = 0; i < exs.size(); ++i) {
      for (size_t j = i + 1; j < exs.size(); ++j) {
        const Ex& x = exs[i];
        const Ex& y = exs[j];
        const std::string gx = x.gloss.ToString(), gy = y.gloss.ToString();
        std::optional<PairLabel> label;
        if (x.gloss.inventory == y.gloss.inventory) {
          label = gx == gy ? PairLabel::kPositive : PairLabel::kNegative;
        } else if (linked.count({gx, gy})) {
          label = PairLabel::kPositive;
        } else if (aligned.count({gx, y.gloss.inventory}) &&
                   aligned.count({gy, x.gloss.inventory})) {
          label = PairLabel::kNegative;
        }
        if (!label) continue;
        ExampleKey kx{gx, x.example}, ky{gy, y.example};
        if (ky < kx) std::swap(kx, ky);
        out[{kx, ky}] = *label;
      }
    }
  }
  return out;
}

TEST(ContextContextTest, MatchesBruteForceEnumeration) {
  const auto f = testing::MakeSearchFixture();
  // A fourth dictionary lists the noun with uneven example counts.
  std::vector<Inventory> inventories = f.inventories;
  inventories.push_back(Inventory("extra"));
  AddWord(inventories.back(), "search", {3, 0, 2});
  const std::vector<AlignmentLink> links = AlignAllPairs(f.inventories, f.store);

  const auto pairs = GenerateContextContext(inventories, links);
  std::map<std::pair<ExampleKey, ExampleKey>, PairLabel> got;
  for (const auto& p : pairs) {
    ASSERT_EQ(p.kind, PairKind::kContextContext);
    ASSERT_TRUE(p.context2.has_value());
    EXPECT_EQ(p.context.gloss.lemma, p.context2->gloss.lemma);
    ExampleKey kx{p.context.gloss.ToString(), p.context.example};
    ExampleKey ky{p.context2->gloss.ToString(), p.context2->example};
    if (ky < kx) std::swap(kx, ky);
    EXPECT_TRUE(got.emplace(std::make_pair(kx, ky), p.label).second) << "duplicate pair";
  }
  EXPECT_EQ(got, BruteForceContextPairs(inventories, links));
  EXPECT_GT(CountLabels(pairs).negative, 0u);
}

TEST(SplitTest, DeterministicLemmaGroupedSplit) {
  Inventory inv("d");
  for (int w = 0; w < 10; ++w) AddWord(inv, "word" + std::to_string(w), {2, 1});
  const auto pairs = GenerateWithinInventory(inv);
  const PairSplit s1 = SplitAndShuffle(pairs, 17, 0.8, 0.2);
  const PairSplit s2 = SplitAndShuffle(pairs, 17, 0.8, 0.2);
  EXPECT_EQ(s1.train, s2.train);
  EXPECT_EQ(s1.dev, s2.dev);
  EXPECT_EQ(s1.test, s2.test);
  EXPECT_TRUE(s1.test.empty());

  const auto lemmas = [](const std::vector<PairInstance>& v) {
    std::set<std::string> out;
    for (const auto& p : v) out.insert(p.context.gloss.lemma);
    return out;
  };
  EXPECT_EQ(lemmas(s1.train).size(), 8u);
  EXPECT_EQ(lemmas(s1.dev).size(), 2u);
  EXPECT_EQ(s1.train.size() + s1.dev.size(), pairs.size());
  for (const auto& l : lemmas(s1.dev)) EXPECT_EQ(lemmas(s1.train).count(l), 0u);

  const PairSplit other = SplitAndShuffle(pairs, 18, 0.8, 0.2);
  EXPECT_NE(other.train, s1.train);

  const PairSplit three = SplitAndShuffle(pairs, 17, 0.5, 0.3);
  EXPECT_EQ(lemmas(three.train).size(), 5u);
  EXPECT_EQ(lemmas(three.dev).size(), 3u);
  EXPECT_EQ(lemmas(three.test).size(), 2u);
}

TEST(SplitTest, Errors) {
  EXPECT_THROW(SplitAndShuffle({}, 1, 0.8, 0.2), DataError);
  Inventory inv("d");
  AddWord(inv, "w", {1});
  const auto pairs = GenerateWithinInventory(inv);
  EXPECT_THROW(SplitAndShuffle(pairs, 1, 0.9, 0.2), DataError);
  EXPECT_THROW(SplitAndShuffle(pairs, 1, 0.0, 0.2), DataError);
}

TEST(PairsFileTest, RoundTrip) {
  const auto f = testing::MakeSearchFixture();
  const auto links = AlignAllPairs(f.inventories, f.store);
  std::vector<PairInstance> pairs = GenerateWithinInventory(f.inventories[0]);
  const auto cc = GenerateContextContext(f.inventories, links);
  pairs.insert(pairs.end(), cc.begin(), cc.end());
  const std::string text = SerializePairs(pairs);
  EXPECT_EQ(ParsePairs(text), pairs);
  EXPECT_EQ(text.substr(0, 40), R"({"kind":"gloss-context","label":"positiv)");

  Inventory odd("o");
  odd.AddEntry("bank", PosTag::kNoun, {{"edge", {{"no target word", {}}}}});
  const auto unresolved = GenerateWithinInventory(odd);
  ASSERT_EQ(unresolved.size(), 1u);
  EXPECT_FALSE(unresolved[0].context.span.has_value());
  EXPECT_NE(SerializePairs(unresolved).find(R"("start":null)"), std::string::npos);
  EXPECT_EQ(ParsePairs(SerializePairs(unresolved)), unresolved);
}

}  // namespace
}  // namespace sense_align

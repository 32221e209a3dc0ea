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

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

#include "sense_align/error.h"
#include "sense_align/jsonl.h"
#include "sense_align/rng.h"

namespace sense_align {

std::string_view PairKindName(PairKind kind) {
  return kind == PairKind::kGlossContext ? "gloss-context" : "context-context";
}

std::string_view PairLabelName(PairLabel label) {
  return label == PairLabel::kPositive ? "positive" : "negative";
}

std::string_view PairSourceName(PairSource source) {
  return source == PairSource::kCrossInventory ? "cross-inventory"
                                               : "within-inventory";
}

namespace {

ContextRef MakeContext(const Gloss& g, size_t example) {
  const ExampleSentence& ex = g.examples[example];
  return ContextRef{ex.text, ResolveTargetSpan(ex, g.id.lemma), g.id, example};
}

// definition(gloss) x every example of `context_gloss`.
void EmitGlossContext(const Gloss& gloss, const Gloss& context_gloss,
                      PairLabel label, PairSource source,
                      std::vector<PairInstance>& out) {
  for (size_t e = 0; e < context_gloss.examples.size(); ++e) {
    PairInstance p;
    p.kind = PairKind::kGlossContext;
    p.label = label;
    p.context = MakeContext(context_gloss, e);
    p.gloss = GlossRef{gloss.id, gloss.definition};
    p.source = source;
    out.push_back(std::move(p));
  }
}

void EmitContextPair(const Gloss& g1, size_t e1, const Gloss& g2, size_t e2,
                     PairLabel label, PairSource source,
                     std::vector<PairInstance>& out) {
  PairInstance p;
  p.kind = PairKind::kContextContext;
  p.label = label;
  p.context = MakeContext(g1, e1);
  p.context2 = MakeContext(g2, e2);
  p.source = source;
  out.push_back(std::move(p));
}

// Every example of g1 against every example of g2.
void EmitContextCross(const Gloss& g1, const Gloss& g2, PairLabel label,
                      PairSource source, std::vector<PairInstance>& out) {
  for (size_t i = 0; i < g1.examples.size(); ++i) {
    for (size_t j = 0; j < g2.examples.size(); ++j) {
      EmitContextPair(g1, i, g2, j, label, source, out);
    }
  }
}

// Links of one inventory pairing, oriented a -> b and grouped by word, each
// group ordered by the a-side gloss index.
using LinkGroups = std::map<EntryKey, std::vector<std::pair<const Gloss*, const Gloss*>>>;

LinkGroups GroupLinks(std::span<const AlignmentLink> links, const Inventory& a,
                      const Inventory& b) {
  LinkGroups groups;
  std::set<GlossId> seen;
  for (const AlignmentLink& link : links) {
    const Gloss* ga = a.FindGloss(link.gloss_a);
    const Gloss* gb = b.FindGloss(link.gloss_b);
    if (!ga || !gb) {
      ga = a.FindGloss(link.gloss_b);
      gb = b.FindGloss(link.gloss_a);
    }
    if (!ga || !gb) {
      throw DataError(fmt::format("link {} -> {} references a gloss missing from "
                                  "inventories '{}' and '{}'",
                                  link.gloss_a.ToString(), link.gloss_b.ToString(),
                                  a.name(), b.name()));
    }
    for (const Gloss* g : {ga, gb}) {
      if (!seen.insert(g->id).second) {
        throw DataError("gloss " + g->id.ToString() + " appears in two links");
      }
    }
    groups[EntryKey{ga->id.lemma, ga->id.pos}].emplace_back(ga, gb);
  }
  for (auto& [key, group] : groups) {
    std::sort(group.begin(), group.end(), [](const auto& x, const auto& y) {
      return x.first->id.index < y.first->id.index;
    });
  }
  return groups;
}

// Links whose endpoints lie in inventories named `a` and `b`.
std::vector<AlignmentLink> LinksBetween(std::span<const AlignmentLink> links,
                                        const std::string& a,
                                        const std::string& b) {
  std::vector<AlignmentLink> out;
  for (const AlignmentLink& l : links) {
    if ((l.gloss_a.inventory == a && l.gloss_b.inventory == b) ||
        (l.gloss_a.inventory == b && l.gloss_b.inventory == a)) {
      out.push_back(l);
    }
  }
  return out;
}

}  // namespace

std::vector<PairInstance> GenerateCrossInventory(
    std::span<const AlignmentLink> links, const Inventory& a,
    const Inventory& b) {
  std::vector<PairInstance> out;
  constexpr PairSource kSource = PairSource::kCrossInventory;
  for (const auto& [key, group] : GroupLinks(links, a, b)) {
    for (const auto& [g, g2] : group) {
      EmitGlossContext(*g, *g2, PairLabel::kPositive, kSource, out);
      EmitGlossContext(*g2, *g, PairLabel::kPositive, kSource, out);
    }
    for (const auto& [g, g2] : group) {
      for (const auto& [h, h2] : group) {
        if (h2 != g2) EmitGlossContext(*g, *h2, PairLabel::kNegative, kSource, out);
      }
      for (const auto& [h, h2] : group) {
        if (h != g) EmitGlossContext(*g2, *h, PairLabel::kNegative, kSource, out);
      }
    }
  }
  return out;
}

std::vector<PairInstance> GenerateWithinInventory(const Inventory& inv) {
  std::vector<PairInstance> out;
  constexpr PairSource kSource = PairSource::kWithinInventory;
  for (const auto& [key, glosses] : inv.entries()) {
    for (const Gloss& g : glosses) {
      EmitGlossContext(g, g, PairLabel::kPositive, kSource, out);
      for (const Gloss& other : glosses) {
        if (&other != &g) EmitGlossContext(g, other, PairLabel::kNegative, kSource, out);
      }
    }
  }
  return out;
}

std::vector<PairInstance> GenerateContextContext(
    std::span<const Inventory> inventories,
    std::span<const AlignmentLink> links) {
  std::set<EntryKey> keys;
  for (const Inventory& inv : inventories) {
    for (const auto& [key, glosses] : inv.entries()) keys.insert(key);
  }
  // Link groups for every inventory pairing, in pairing order.
  struct Pairing {
    const Inventory* a;
    const Inventory* b;
    LinkGroups groups;
  };
  std::vector<Pairing> pairings;
  for (size_t p = 0; p < inventories.size(); ++p) {
    for (size_t q = p + 1; q < inventories.size(); ++q) {
      const Inventory& a = inventories[p];
      const Inventory& b = inventories[q];
      auto between = LinksBetween(links, a.name(), b.name());
      pairings.push_back({&a, &b, GroupLinks(between, a, b)});
    }
  }

  std::vector<PairInstance> out;
  for (const EntryKey& key : keys) {
    for (const Inventory& inv : inventories) {
      const auto* glosses = inv.Find(key);
      if (!glosses) continue;
      constexpr PairSource kSource = PairSource::kWithinInventory;
      for (const Gloss& g : *glosses) {
        for (size_t i = 0; i < g.examples.size(); ++i) {
          for (size_t j = i + 1; j < g.examples.size(); ++j) {
            EmitContextPair(g, i, g, j, PairLabel::kPositive, kSource, out);
          }
        }
      }
      for (size_t x = 0; x < glosses->size(); ++x) {
        for (size_t y = x + 1; y < glosses->size(); ++y) {
          EmitContextCross((*glosses)[x], (*glosses)[y], PairLabel::kNegative,
                           kSource, out);
        }
      }
    }
    for (const Pairing& pairing : pairings) {
      auto it = pairing.groups.find(key);
      if (it == pairing.groups.end()) continue;
      constexpr PairSource kSource = PairSource::kCrossInventory;
      for (const auto& [g, g2] : it->second) {
        for (const auto& [h, h2] : it->second) {
          const PairLabel label =
              h2 == g2 ? PairLabel::kPositive : PairLabel::kNegative;
          EmitContextCross(*g, *h2, label, kSource, out);
        }
      }
    }
  }
  return out;
}

PairCounts CountLabels(std::span<const PairInstance> pairs) {
  PairCounts c;
  for (const PairInstance& p : pairs) {
    (p.label == PairLabel::kPositive ? c.positive : c.negative) += 1;
  }
  return c;
}

PairSplit SplitAndShuffle(std::span<const PairInstance> pairs, uint64_t seed,
                          double train_ratio, double dev_ratio) {
  if (pairs.empty()) throw DataError("no pairs to split");
  if (!(train_ratio > 0.0) || !(dev_ratio >= 0.0) ||
      train_ratio + dev_ratio > 1.0 + 1e-12) {
    throw DataError(fmt::format("invalid split ratios {}/{}", train_ratio,
                                dev_ratio));
  }
  std::map<std::string, std::vector<size_t>> by_lemma;
  for (size_t i = 0; i < pairs.size(); ++i) {
    by_lemma[pairs[i].context.gloss.lemma].push_back(i);
  }
  std::vector<const std::vector<size_t>*> groups;
  for (const auto& [lemma, members] : by_lemma) groups.push_back(&members);
  CounterRng(seed, "split-groups").Shuffle(std::span(groups));

  const size_t k = groups.size();
  size_t n_train = std::min(k, static_cast<size_t>(std::llround(train_ratio * k)));
  size_t n_dev = std::min(k - n_train, static_cast<size_t>(std::llround(dev_ratio * k)));

  PairSplit split;
  for (size_t g = 0; g < k; ++g) {
    auto& dest = g < n_train ? split.train
                 : g < n_train + n_dev ? split.dev
                                       : split.test;
    for (size_t i : *groups[g]) dest.push_back(pairs[i]);
  }
  CounterRng(seed, "split-train").Shuffle(std::span(split.train));
  CounterRng(seed, "split-dev").Shuffle(std::span(split.dev));
  CounterRng(seed, "split-test").Shuffle(std::span(split.test));
  return split;
}

namespace {

OrderedJson ContextJson(const ContextRef& c) {
  OrderedJson j;
  j["text"] = c.text;
  if (c.span) {
    j["start"] = c.span->start;
    j["end"] = c.span->end;
  } else {
    j["start"] = nullptr;
    j["end"] = nullptr;
  }
  j["gloss"] = c.gloss.ToString();
  j["example"] = c.example;
  return j;
}

ContextRef ParseContext(const Json& j) {
  if (!j.is_object()) throw DataError("context must be an object");
  ContextRef c;
  c.text = RequireString(j, "text");
  const Json& start = RequireField(j, "start");
  const Json& end = RequireField(j, "end");
  if (start.is_null() != end.is_null()) {
    throw DataError("context start and end must both be set or both null");
  }
  if (!start.is_null()) {
    const long long s = RequireInteger(j, "start");
    const long long e = RequireInteger(j, "end");
    if (s < 0 || s >= e) throw DataError("invalid context span");
    c.span = TextSpan{static_cast<size_t>(s), static_cast<size_t>(e)};
  }
  c.gloss = GlossId::Parse(RequireString(j, "gloss"));
  const long long ex = RequireInteger(j, "example");
  if (ex < 0) throw DataError("negative example index");
  c.example = static_cast<size_t>(ex);
  return c;
}

}  // namespace

std::string SerializePairs(std::span<const PairInstance> pairs) {
  std::string out;
  for (const PairInstance& p : pairs) {
    OrderedJson j;
    j["kind"] = std::string(PairKindName(p.kind));
    j["label"] = std::string(PairLabelName(p.label));
    j["context"] = ContextJson(p.context);
    if (p.gloss) {
      j["gloss"] = {{"id", p.gloss->id.ToString()},
                    {"definition", p.gloss->definition}};
    }
    if (p.context2) j["context2"] = ContextJson(*p.context2);
    j["source"] = std::string(PairSourceName(p.source));
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<PairInstance> ParsePairs(std::string_view text,
                                     std::string_view source) {
  std::vector<PairInstance> pairs;
  ForEachJsonLine(text, source, [&](const Json& rec, size_t) {
    PairInstance p;
    const std::string kind = RequireString(rec, "kind");
    const std::string label = RequireString(rec, "label");
    const std::string src = RequireString(rec, "source");
    if (kind == PairKindName(PairKind::kGlossContext)) {
      p.kind = PairKind::kGlossContext;
    } else if (kind == PairKindName(PairKind::kContextContext)) {
      p.kind = PairKind::kContextContext;
    } else {
      throw DataError("unknown pair kind '" + kind + "'");
    }
    if (label == "positive") {
      p.label = PairLabel::kPositive;
    } else if (label == "negative") {
      p.label = PairLabel::kNegative;
    } else {
      throw DataError("unknown label '" + label + "'");
    }
    if (src == PairSourceName(PairSource::kCrossInventory)) {
      p.source = PairSource::kCrossInventory;
    } else if (src == PairSourceName(PairSource::kWithinInventory)) {
      p.source = PairSource::kWithinInventory;
    } else {
      throw DataError("unknown source '" + src + "'");
    }
    p.context = ParseContext(RequireField(rec, "context"));
    if (p.kind == PairKind::kGlossContext) {
      const Json& g = RequireField(rec, "gloss");
      p.gloss = GlossRef{GlossId::Parse(RequireString(g, "id")),
                         RequireString(g, "definition")};
    } else {
      p.context2 = ParseContext(RequireField(rec, "context2"));
    }
    pairs.push_back(std::move(p));
  });
  return pairs;
}

std::vector<PairInstance> LoadPairs(const std::filesystem::path& path) {
  return ParsePairs(ReadFile(path), path.string());
}

void WritePairs(std::span<const PairInstance> pairs,
                const std::filesystem::path& path) {
  WriteFile(path, SerializePairs(pairs));
}

}  // namespace sense_align

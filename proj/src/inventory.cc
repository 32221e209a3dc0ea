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

#include "sense_align/inventory.h"

#include <charconv>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "sense_align/error.h"
#include "sense_align/jsonl.h"
#include "sense_align/text.h"

namespace sense_align {

std::string_view PosName(PosTag pos) {
  switch (pos) {
    case PosTag::kNoun: return "noun";
    case PosTag::kVerb: return "verb";
    case PosTag::kAdj: return "adj";
    case PosTag::kAdv: return "adv";
    case PosTag::kOther: return "other";
  }
  return "other";
}

PosTag ParsePos(std::string_view name, bool lenient) {
  const std::string lower = AsciiLower(NormalizeWhitespace(name));
  for (PosTag pos : kAllPosTags) {
    if (lower == PosName(pos)) return pos;
  }
  if (lenient) return PosTag::kOther;
  throw DataError("unknown part of speech '" + std::string(name) + "'");
}

std::optional<TextSpan> ResolveTargetSpan(const ExampleSentence& sentence,
                                          std::string_view lemma) {
  if (sentence.target_span) return sentence.target_span;
  auto hit = FindCaseInsensitive(sentence.text, lemma);
  if (!hit) return std::nullopt;
  return TextSpan{CodePointOffsetOf(sentence.text, hit->first),
                  CodePointOffsetOf(sentence.text, hit->second)};
}

std::string GlossId::ToString() const {
  return fmt::format("{}:{}:{}:{}", inventory, lemma, PosName(pos), index);
}

GlossId GlossId::Parse(std::string_view text) {
  const size_t first = text.find(':');
  const size_t last = text.rfind(':');
  if (first == std::string_view::npos || last == first) {
    throw DataError("malformed gloss id '" + std::string(text) + "'");
  }
  const size_t pos_sep = text.rfind(':', last - 1);
  if (pos_sep == std::string_view::npos || pos_sep <= first) {
    throw DataError("malformed gloss id '" + std::string(text) + "'");
  }
  GlossId id;
  id.inventory = std::string(text.substr(0, first));
  id.lemma = std::string(text.substr(first + 1, pos_sep - first - 1));
  id.pos = ParsePos(text.substr(pos_sep + 1, last - pos_sep - 1));
  std::string_view idx = text.substr(last + 1);
  auto [ptr, ec] = std::from_chars(idx.data(), idx.data() + idx.size(), id.index);
  if (id.inventory.empty() || id.lemma.empty() || idx.empty() ||
      ec != std::errc() || ptr != idx.data() + idx.size()) {
    throw DataError("malformed gloss id '" + std::string(text) + "'");
  }
  return id;
}

bool operator<(const GlossId& a, const GlossId& b) {
  if (a.inventory != b.inventory) return a.inventory < b.inventory;
  if (a.lemma != b.lemma) return a.lemma < b.lemma;
  if (a.pos != b.pos) return PosName(a.pos) < PosName(b.pos);
  return a.index < b.index;
}

bool operator<(const EntryKey& a, const EntryKey& b) {
  if (a.lemma != b.lemma) return a.lemma < b.lemma;
  return PosName(a.pos) < PosName(b.pos);
}

Inventory::Inventory(std::string name) : name_(std::move(name)) {
  if (name_.empty() || name_.find(':') != std::string::npos) {
    throw DataError("inventory name must be non-empty and free of ':' (got '" +
                    name_ + "')");
  }
}

void Inventory::AddEntry(std::string_view lemma, PosTag pos,
                         std::vector<GlossText> glosses) {
  EntryKey key{NormalizeLemma(lemma), pos};
  if (key.lemma.empty()) throw DataError("empty lemma");
  if (entries_.count(key)) {
    throw DataError(fmt::format("duplicate entry ({}, {})", key.lemma,
                                PosName(pos)));
  }
  if (glosses.empty()) {
    throw DataError(fmt::format("entry ({}, {}) has no glosses", key.lemma,
                                PosName(pos)));
  }
  std::vector<Gloss> out;
  out.reserve(glosses.size());
  for (size_t i = 0; i < glosses.size(); ++i) {
    GlossText& g = glosses[i];
    if (NormalizeWhitespace(g.definition).empty()) {
      throw DataError(fmt::format("gloss {} of ({}, {}) has an empty definition",
                                  i, key.lemma, PosName(pos)));
    }
    for (size_t e = 0; e < g.examples.size(); ++e) {
      const ExampleSentence& ex = g.examples[e];
      if (ex.text.empty()) {
        throw DataError(fmt::format("example {} of gloss {} is empty", e, i));
      }
      if (ex.target_span) {
        const size_t len = CodePointLength(ex.text);
        const TextSpan s = *ex.target_span;
        if (!(s.start < s.end && s.end <= len)) {
          throw DataError(fmt::format(
              "example {} of gloss {}: invalid target span [{}, {}) for text "
              "of length {}",
              e, i, s.start, s.end, len));
        }
      }
    }
    out.push_back(Gloss{GlossId{name_, key.lemma, pos, i},
                        std::move(g.definition), std::move(g.examples)});
  }
  entries_.emplace(std::move(key), std::move(out));
}

const std::vector<Gloss>* Inventory::Find(const EntryKey& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

const Gloss* Inventory::FindGloss(const GlossId& id) const {
  if (id.inventory != name_) return nullptr;
  const auto* glosses = Find({id.lemma, id.pos});
  if (!glosses || id.index >= glosses->size()) return nullptr;
  return &(*glosses)[id.index];
}

namespace {

ExampleSentence ParseExample(const Json& j) {
  ExampleSentence ex;
  ex.text = RequireString(j, "text");
  const bool has_start = j.contains("target_start") && !j["target_start"].is_null();
  const bool has_end = j.contains("target_end") && !j["target_end"].is_null();
  if (has_start != has_end) {
    throw DataError("target_start and target_end must appear together");
  }
  if (has_start) {
    const long long s = RequireInteger(j, "target_start");
    const long long e = RequireInteger(j, "target_end");
    if (s < 0 || e < 0) throw DataError("negative target offset");
    ex.target_span = TextSpan{static_cast<size_t>(s), static_cast<size_t>(e)};
  }
  return ex;
}

}  // namespace

Inventory ParseInventory(std::string_view text, std::string name, bool lenient,
                         std::string_view source) {
  Inventory inv(std::move(name));
  ForEachJsonLine(text, source, [&](const Json& rec, size_t) {
    const std::string lemma = RequireString(rec, "lemma");
    const PosTag pos = ParsePos(RequireString(rec, "pos"), lenient);
    const Json& glosses = RequireField(rec, "glosses");
    if (!glosses.is_array()) throw DataError("'glosses' must be an array");
    std::vector<GlossText> parsed;
    for (const Json& g : glosses) {
      if (!g.is_object()) throw DataError("gloss must be an object");
      GlossText gt;
      gt.definition = RequireString(g, "definition");
      if (g.contains("examples")) {
        const Json& exs = g["examples"];
        if (!exs.is_array()) throw DataError("'examples' must be an array");
        for (const Json& e : exs) {
          if (!e.is_object()) throw DataError("example must be an object");
          gt.examples.push_back(ParseExample(e));
        }
      }
      parsed.push_back(std::move(gt));
    }
    inv.AddEntry(lemma, pos, std::move(parsed));
  });
  return inv;
}

Inventory LoadInventory(const std::filesystem::path& path, std::string name,
                        bool lenient) {
  return ParseInventory(ReadFile(path), std::move(name), lenient,
                        path.string());
}

std::string SerializeInventory(const Inventory& inv) {
  std::string out;
  for (const auto& [key, glosses] : inv.entries()) {
    OrderedJson rec;
    rec["lemma"] = key.lemma;
    rec["pos"] = std::string(PosName(key.pos));
    rec["glosses"] = OrderedJson::array();
    for (const Gloss& g : glosses) {
      OrderedJson jg;
      jg["definition"] = g.definition;
      jg["examples"] = OrderedJson::array();
      for (const ExampleSentence& ex : g.examples) {
        OrderedJson je;
        je["text"] = ex.text;
        if (ex.target_span) {
          je["target_start"] = ex.target_span->start;
          je["target_end"] = ex.target_span->end;
        }
        jg["examples"].push_back(std::move(je));
      }
      rec["glosses"].push_back(std::move(jg));
    }
    out += rec.dump();
    out += '\n';
  }
  return out;
}

void WriteInventory(const Inventory& inv, const std::filesystem::path& path) {
  WriteFile(path, SerializeInventory(inv));
}

double InventoryStats::glosses_per_word() const {
  return static_cast<double>(gloss_count) / static_cast<double>(word_count);
}

double InventoryStats::examples_per_word() const {
  return static_cast<double>(example_count) / static_cast<double>(word_count);
}

InventoryStats ComputeStats(const Inventory& inv) {
  if (inv.empty()) throw DataError("inventory '" + inv.name() + "' is empty");
  InventoryStats stats;
  std::set<std::string_view> lemmas;
  for (const auto& [key, glosses] : inv.entries()) {
    lemmas.insert(key.lemma);
    ++stats.entry_count;
    stats.gloss_count += glosses.size();
    for (const Gloss& g : glosses) stats.example_count += g.examples.size();
  }
  stats.word_count = lemmas.size();
  return stats;
}

std::string FormatStatsRow(std::string_view name, const InventoryStats& stats) {
  return fmt::format("{}\t{}\t{}\t{}\t{:.1f}\t{:.1f}", name, stats.word_count,
                     stats.gloss_count, stats.example_count,
                     stats.glosses_per_word(), stats.examples_per_word());
}

std::vector<EntryKey> CommonKeys(const Inventory& a, const Inventory& b) {
  std::vector<EntryKey> keys;
  auto ia = a.entries().begin();
  auto ib = b.entries().begin();
  while (ia != a.entries().end() && ib != b.entries().end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      keys.push_back(ia->first);
      ++ia;
      ++ib;
    }
  }
  return keys;
}

}  // namespace sense_align

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

#ifndef SENSE_ALIGN_INVENTORY_H_
#define SENSE_ALIGN_INVENTORY_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sense_align {

enum class PosTag { kNoun, kVerb, kAdj, kAdv, kOther };

inline constexpr PosTag kAllPosTags[] = {PosTag::kNoun, PosTag::kVerb,
                                         PosTag::kAdj, PosTag::kAdv,
                                         PosTag::kOther};

std::string_view PosName(PosTag pos);

// Case-insensitive. Unknown names map to kOther when `lenient`, otherwise a
// DataError is thrown.
PosTag ParsePos(std::string_view name, bool lenient = false);

// Half-open span of code point offsets.
struct TextSpan {
  size_t start = 0;
  size_t end = 0;

  friend bool operator==(const TextSpan&, const TextSpan&) = default;
};

struct ExampleSentence {
  std::string text;
  std::optional<TextSpan> target_span;

  friend bool operator==(const ExampleSentence&,
                         const ExampleSentence&) = default;
};

// Resolves where the target word sits in `sentence`: the explicit span when
// present, else the first case-insensitive occurrence of `lemma`.
std::optional<TextSpan> ResolveTargetSpan(const ExampleSentence& sentence,
                                          std::string_view lemma);

// Identifies one gloss. Canonical text form is `inventory:lemma:pos:index`.
// The lemma may itself contain ':' since parsing splits the first field and
// the last two.
struct GlossId {
  std::string inventory;
  std::string lemma;
  PosTag pos = PosTag::kNoun;
  size_t index = 0;

  std::string ToString() const;
  static GlossId Parse(std::string_view text);

  friend bool operator==(const GlossId&, const GlossId&) = default;
  friend bool operator<(const GlossId& a, const GlossId& b);
};

struct Gloss {
  GlossId id;
  std::string definition;
  std::vector<ExampleSentence> examples;

  friend bool operator==(const Gloss&, const Gloss&) = default;
};

// Definition plus examples, before the gloss receives an id.
struct GlossText {
  std::string definition;
  std::vector<ExampleSentence> examples;
};

struct EntryKey {
  std::string lemma;
  PosTag pos = PosTag::kNoun;

  friend bool operator==(const EntryKey&, const EntryKey&) = default;
  // Lexicographic on (lemma, pos name).
  friend bool operator<(const EntryKey& a, const EntryKey& b);
};

class Inventory {
 public:
  using EntryMap = std::map<EntryKey, std::vector<Gloss>>;

  // `name` must be non-empty and free of ':'.
  explicit Inventory(std::string name);

  const std::string& name() const { return name_; }
  const EntryMap& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  // Validates and appends an entry; glosses receive indices 0..k-1 in order.
  // Throws DataError on a duplicate key, an empty definition, an empty
  // example, or an out-of-range span.
  void AddEntry(std::string_view lemma, PosTag pos,
                std::vector<GlossText> glosses);

  // nullptr when absent.
  const std::vector<Gloss>* Find(const EntryKey& key) const;
  const Gloss* FindGloss(const GlossId& id) const;

  friend bool operator==(const Inventory&, const Inventory&) = default;

 private:
  std::string name_;
  EntryMap entries_;
};

// Line-delimited JSON, one entry per line. Errors carry the line number.
Inventory LoadInventory(const std::filesystem::path& path, std::string name,
                        bool lenient = false);

// Parses already-read text; `source` names it in error messages.
Inventory ParseInventory(std::string_view text, std::string name,
                         bool lenient = false,
                         std::string_view source = "<memory>");

std::string SerializeInventory(const Inventory& inv);
void WriteInventory(const Inventory& inv, const std::filesystem::path& path);

struct InventoryStats {
  size_t word_count = 0;  // distinct lemmas; a phrase counts as one word
  size_t entry_count = 0;  // distinct (lemma, pos)
  size_t gloss_count = 0;
  size_t example_count = 0;

  double glosses_per_word() const;
  double examples_per_word() const;
};

// Throws DataError for an empty inventory.
InventoryStats ComputeStats(const Inventory& inv);

// "Words  Glosses  ES  Gls/W  ES/W" row with averages rounded to one decimal.
std::string FormatStatsRow(std::string_view name, const InventoryStats& stats);

// Keys present in both inventories, sorted.
std::vector<EntryKey> CommonKeys(const Inventory& a, const Inventory& b);

}  // namespace sense_align

#endif  // SENSE_ALIGN_INVENTORY_H_

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

#ifndef SENSE_ALIGN_TEXT_H_
#define SENSE_ALIGN_TEXT_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sense_align {

// Character offsets throughout the toolkit count Unicode code points, so that
// spans written by other tools (which index strings by character) line up.

// Number of code points in a UTF-8 string. Invalid lead bytes count as one.
size_t CodePointLength(std::string_view utf8);

// Byte offset of code point `cp` (cp == length maps to utf8.size()).
size_t ByteOffsetOf(std::string_view utf8, size_t cp);

// Code point index of byte offset `byte`.
size_t CodePointOffsetOf(std::string_view utf8, size_t byte);

// ASCII lowercase; bytes >= 0x80 are passed through untouched.
std::string AsciiLower(std::string_view s);

// Trims and collapses internal whitespace runs to a single space.
std::string NormalizeWhitespace(std::string_view s);

// Lemma key used for cross-inventory matching: lowercase + whitespace
// normalization, no morphological analysis.
std::string NormalizeLemma(std::string_view s);

// A maximal run of token characters: ASCII letters, digits, or any byte of a
// multi-byte UTF-8 sequence.
struct Token {
  std::string text;  // lowercased
  size_t begin = 0;  // byte offsets into the source
  size_t end = 0;
};

std::vector<Token> Tokenize(std::string_view text);

// First case-insensitive (ASCII folding) occurrence of `needle`, as a
// half-open byte range.
std::optional<std::pair<size_t, size_t>> FindCaseInsensitive(
    std::string_view haystack, std::string_view needle);

}  // namespace sense_align

#endif  // SENSE_ALIGN_TEXT_H_

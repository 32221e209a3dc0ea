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

#include "sense_align/text.h"

#include <algorithm>
#include <cctype>

namespace sense_align {
namespace {

bool IsContinuation(unsigned char c) { return (c & 0xC0) == 0x80; }

bool IsTokenByte(unsigned char c) { return c >= 0x80 || std::isalnum(c); }

}  // namespace

size_t CodePointLength(std::string_view utf8) {
  size_t n = 0;
  for (unsigned char c : utf8) {
    if (!IsContinuation(c)) ++n;
  }
  return n;
}

size_t ByteOffsetOf(std::string_view utf8, size_t cp) {
  size_t seen = 0;
  for (size_t i = 0; i < utf8.size(); ++i) {
    if (IsContinuation(static_cast<unsigned char>(utf8[i]))) continue;
    if (seen == cp) return i;
    ++seen;
  }
  return utf8.size();
}

size_t CodePointOffsetOf(std::string_view utf8, size_t byte) {
  return CodePointLength(utf8.substr(0, std::min(byte, utf8.size())));
}

std::string AsciiLower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string NormalizeWhitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::string NormalizeLemma(std::string_view s) {
  return AsciiLower(NormalizeWhitespace(s));
}

std::vector<Token> Tokenize(std::string_view text) {
  std::vector<Token> tokens;
  size_t i = 0;
  while (i < text.size()) {
    if (!IsTokenByte(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < text.size() && IsTokenByte(static_cast<unsigned char>(text[j]))) ++j;
    tokens.push_back({AsciiLower(text.substr(i, j - i)), i, j});
    i = j;
  }
  return tokens;
}

std::optional<std::pair<size_t, size_t>> FindCaseInsensitive(
    std::string_view haystack, std::string_view needle) {
  if (needle.empty() || needle.size() > haystack.size()) return std::nullopt;
  const std::string h = AsciiLower(haystack);
  const std::string n = AsciiLower(needle);
  const size_t at = h.find(n);
  if (at == std::string::npos) return std::nullopt;
  return std::make_pair(at, at + n.size());
}

}  // namespace sense_align

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

#ifndef SENSE_ALIGN_JSONL_H_
#define SENSE_ALIGN_JSONL_H_

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace sense_align {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

std::string ReadFile(const std::filesystem::path& path);

// Writes via a temporary sibling and rename, so readers never see a partial
// file.
void WriteFile(const std::filesystem::path& path, std::string_view contents);

// Calls `fn(record, line_number)` for each non-blank line. Parse failures and
// exceptions thrown by `fn` are rethrown as ParseError with the line number.
void ForEachJsonLine(std::string_view text, std::string_view source,
                     const std::function<void(const Json&, size_t)>& fn);

// Typed field access with uniform error messages.
const Json& RequireField(const Json& record, const char* key);
std::string RequireString(const Json& record, const char* key);
long long RequireInteger(const Json& record, const char* key);

}  // namespace sense_align

#endif  // SENSE_ALIGN_JSONL_H_

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

#include "sense_align/jsonl.h"

#include <fstream>
#include <sstream>

#include "sense_align/error.h"

namespace sense_align {

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void WriteFile(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw DataError("write failed: " + path.string());
  }
  std::filesystem::rename(tmp, path);
}

void ForEachJsonLine(std::string_view text, std::string_view source,
                     const std::function<void(const Json&, size_t)>& fn) {
  const std::string src(source);
  size_t line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    ++line_no;
    pos = nl + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
      if (nl == text.size()) break;
      continue;
    }
    Json record;
    try {
      record = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw ParseError(src, line_no, std::string("malformed record: ") + e.what());
    }
    if (!record.is_object()) {
      throw ParseError(src, line_no, "record is not an object");
    }
    try {
      fn(record, line_no);
    } catch (const ParseError&) {
      throw;
    } catch (const DataError& e) {
      throw ParseError(src, line_no, e.what());
    } catch (const Json::exception& e) {
      throw ParseError(src, line_no, e.what());
    }
    if (nl == text.size()) break;
  }
}

const Json& RequireField(const Json& record, const char* key) {
  auto it = record.find(key);
  if (it == record.end()) {
    throw DataError(std::string("missing field '") + key + "'");
  }
  return *it;
}

std::string RequireString(const Json& record, const char* key) {
  const Json& v = RequireField(record, key);
  if (!v.is_string()) {
    throw DataError(std::string("field '") + key + "' must be a string");
  }
  return v.get<std::string>();
}

long long RequireInteger(const Json& record, const char* key) {
  const Json& v = RequireField(record, key);
  if (!v.is_number_integer()) {
    throw DataError(std::string("field '") + key + "' must be an integer");
  }
  return v.get<long long>();
}

}  // namespace sense_align

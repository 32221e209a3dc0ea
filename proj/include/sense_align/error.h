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

#ifndef SENSE_ALIGN_ERROR_H_
#define SENSE_ALIGN_ERROR_H_

#include <stdexcept>
#include <string>

namespace sense_align {

// Raised for malformed or inconsistent input data. The CLI maps it to exit
// code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A DataError tied to one line of a line-delimited input file.
class ParseError : public DataError {
 public:
  ParseError(const std::string& path, size_t line, const std::string& what)
      : DataError(path + ":" + std::to_string(line) + ": " + what),
        line_(line) {}

  size_t line() const { return line_; }

 private:
  size_t line_;
};

}  // namespace sense_align

#endif  // SENSE_ALIGN_ERROR_H_

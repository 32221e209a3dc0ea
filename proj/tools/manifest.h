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

#ifndef SENSE_ALIGN_TOOLS_MANIFEST_H_
#define SENSE_ALIGN_TOOLS_MANIFEST_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace sense_align::tools {

// Hex SHA-256 of a file's bytes.
std::string FileDigest(const std::filesystem::path& path);

// Written next to each output as <output>.manifest.json. Two runs whose
// manifests agree apart from wall time produce byte-identical outputs.
class RunManifest {
 public:
  RunManifest(std::string command, std::vector<std::string> arguments,
              uint64_t seed);

  void AddInput(const std::filesystem::path& path);
  const std::vector<std::pair<std::string, std::string>>& inputs() const {
    return inputs_;
  }

  void WriteFor(const std::filesystem::path& output) const;

 private:
  std::string command_;
  std::vector<std::string> arguments_;
  uint64_t seed_;
  std::vector<std::pair<std::string, std::string>> inputs_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace sense_align::tools

#endif  // SENSE_ALIGN_TOOLS_MANIFEST_H_

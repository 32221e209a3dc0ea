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

#include "manifest.h"

#include <openssl/evp.h>

#include <memory>

#include <fmt/format.h>

#include "sense_align/error.h"
#include "sense_align/jsonl.h"

namespace sense_align::tools {

std::string FileDigest(const std::filesystem::path& path) {
  const std::string bytes = ReadFile(path);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), md, &len) != 1) {
    throw DataError("sha256 failed for " + path.string());
  }
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
  return hex;
}

RunManifest::RunManifest(std::string command, std::vector<std::string> arguments,
                         uint64_t seed)
    : command_(std::move(command)),
      arguments_(std::move(arguments)),
      seed_(seed),
      start_(std::chrono::steady_clock::now()) {}

void RunManifest::AddInput(const std::filesystem::path& path) {
  inputs_.emplace_back(path.string(), FileDigest(path));
}

void RunManifest::WriteFor(const std::filesystem::path& output) const {
  OrderedJson j;
  j["command"] = command_;
  j["arguments"] = arguments_;
  OrderedJson inputs = OrderedJson::array();
  for (const auto& [path, digest] : inputs_) {
    inputs.push_back({{"path", path}, {"sha256", digest}});
  }
  j["inputs"] = std::move(inputs);
  j["output"] = {{"path", output.string()}, {"sha256", FileDigest(output)}};
  j["tool_version"] = SENSE_ALIGN_VERSION;
  j["seed"] = seed_;
  j["wall_time_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  std::filesystem::path manifest = output;
  manifest += ".manifest.json";
  WriteFile(manifest, j.dump(2) + "\n");
}

}  // namespace sense_align::tools

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

#ifndef SENSE_ALIGN_RNG_H_
#define SENSE_ALIGN_RNG_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>

namespace sense_align {

// Counter-based generator: draw k of stream `name` under `seed` is a pure
// function of (seed, name, k). Every random decision in the toolkit derives
// from one of these, so results depend only on the seed and are portable
// across standard libraries.
class CounterRng {
 public:
  CounterRng(uint64_t seed, std::string_view name, uint64_t substream = 0);

  uint64_t Next();
  // Uniform in [0, bound), bound > 0, without modulo bias.
  uint64_t Below(uint64_t bound);
  // Uniform in [0, 1) with 53 random bits.
  double Uniform();
  // Standard normal (Box-Muller).
  double Normal();

  template <typename T>
  void Shuffle(std::span<T> items) {
    for (size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[Below(i)]);
    }
  }

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
};

uint64_t SplitMix64(uint64_t x);

}  // namespace sense_align

#endif  // SENSE_ALIGN_RNG_H_

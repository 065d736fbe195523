// Copyright 2026 The LAWNSec Authors
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

// Seed derivation: every RNG stream of a run is seeded with
// DeriveSeed(master, stream), the SplitMix64 finalizer applied to
// master + (stream + 1) * golden-ratio increment. Changing the master seed
// changes every stream.

#ifndef LAWNSEC_SEEDING_H_
#define LAWNSEC_SEEDING_H_

#include <cstdint>

namespace lawnsec {

enum class Stream : std::uint64_t {
  kEnv = 0,
  kAgentInit = 1,
  kExploration = 2,
  kBufferSampling = 3,
  kAgentNoise = 4,
};

constexpr std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t DeriveSeed(std::uint64_t master, Stream stream) {
  return SplitMix64(master +
                    (static_cast<std::uint64_t>(stream) + 1) *
                        0x9e3779b97f4a7c15ULL);
}

}  // namespace lawnsec

#endif  // LAWNSEC_SEEDING_H_

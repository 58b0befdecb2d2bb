// Copyright 2026 The lossrb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lossrb/rng.hpp"

namespace lossrb {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::initializer_list<std::uint64_t> keys) {
    std::uint64_t h = mix64(master_seed);
    for (std::uint64_t k : keys) {
        h = mix64(h ^ mix64(k + 0x632BE59BD9B4E019ULL));
    }
    return h;
}

RngStream make_stream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> keys) {
    return RngStream(derive_seed(master_seed, keys));
}

}  // namespace lossrb

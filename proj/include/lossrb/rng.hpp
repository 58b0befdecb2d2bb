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

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace lossrb {

/// One independent random stream. Each logical task owns its own stream;
/// streams are never shared between threads.
using RngStream = std::mt19937_64;

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Derives a seed from a master seed and a path of integer keys, e.g.
/// (master_seed, purpose, m_index, seq_index). Distinct key paths give
/// statistically independent streams, so results do not depend on the order
/// in which tasks are executed.
std::uint64_t derive_seed(std::uint64_t master_seed, std::initializer_list<std::uint64_t> keys);

RngStream make_stream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> keys = {});

/// Stream purposes used when deriving protocol sub-streams.
enum class StreamTag : std::uint64_t {
    Sequence = 1,
    Shots = 2,
    Detector = 3,
    Channel = 4,
    Hamiltonian = 5,
    Phase = 6,
    Synthetic = 7,
};

}  // namespace lossrb

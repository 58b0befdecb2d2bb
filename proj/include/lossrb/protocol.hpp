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

/**
 * @file
 * Random-sequence protocol execution.
 *
 * The noisy implementation of gate g is g o E: the fixed noise map E acts
 * first, then the ideal gate. A loss-protocol sequence k = (k_1, ..., k_m)
 * therefore produces
 *
 *     Q_k = Tr[Q g_{k_m} E ... g_{k_1} E (rho0)],
 *
 * with no inversion gate. The RB variant appends the (noisy) gate inverting
 * the sequence before measuring.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lossrb/gate_sets.hpp"
#include "lossrb/quantum_core.hpp"
#include "lossrb/rng.hpp"

namespace lossrb {

enum class Variant { Loss, RB };

const char *to_string(Variant v);

struct ProtocolConfig {
    GateSet gateset;
    QuantumChannel noise;
    DensityMatrix rho0;
    MeasurementOperator measurement;
    std::vector<int> m_grid;
    int n_sequences = 30;
    /// Shots per sequence; std::nullopt means exact expectation values.
    std::optional<std::uint64_t> shots;
    std::uint64_t master_seed = 0;
    Variant variant = Variant::Loss;
    /// Keep every SequenceOutcome in the dataset.
    bool keep_raw = false;
};

/// Throws std::invalid_argument / DimensionError for an inconsistent config.
void validate_config(const ProtocolConfig &cfg);

/// Stable 64-bit hash of every input that affects the simulated data
/// (excluding the master seed), as 16 hex digits.
/// 16 hex digits hashing gates, noise, state, measurement, grid, sequence
/// count, shots and variant. The master seed is recorded separately.
std::string config_fingerprint(const ProtocolConfig &cfg);

struct SequenceOutcome {
    int m = 0;
    std::vector<GateIndex> sequence;
    /// Exact Q_k, or clicks / shots in shot mode.
    double value = 0.0;
    std::optional<std::uint64_t> shots_used;
};

struct DecayPoint {
    int m = 0;
    double mean = 0.0;
    /// Standard error of the mean (n - 1 convention); absent for n < 2.
    std::optional<double> sem;
    int n_sequences = 0;
    std::optional<std::uint64_t> shots;
};

struct DatasetMetadata {
    std::uint64_t master_seed = 0;
    std::string fingerprint;
    std::string variant;
    std::vector<std::string> gate_labels;
    int dim = 0;
};

struct DecayDataset {
    std::vector<DecayPoint> points;
    DatasetMetadata metadata;
    std::vector<SequenceOutcome> raw;
};

/// m i.i.d. uniform gate indices.
std::vector<GateIndex> sample_sequence(const GateSet &gates, int m, RngStream &rng);

/// Noisy evolution of rho0 under one sequence (including the inversion gate
/// for the RB variant), before measurement.
DensityMatrix evolve_sequence(const ProtocolConfig &cfg, std::span<const GateIndex> sequence);

/// Executes one sequence. `shot_rng` is only consulted in shot mode.
SequenceOutcome execute_sequence(const ProtocolConfig &cfg, std::span<const GateIndex> sequence,
                                 RngStream &shot_rng);

/// Mean and standard error over sequence values, in the given order.
DecayPoint summarize(int m, std::span<const double> values, std::optional<std::uint64_t> shots);

/// Runs every (m, sequence) task with OpenMP. Each task derives its streams
/// from (master_seed, m_index, seq_index), so the result is bit-identical to
/// run_protocol_serial for any thread count or schedule.
DecayDataset run_protocol(const ProtocolConfig &cfg);

/// Single-threaded reference implementation of run_protocol.
DecayDataset run_protocol_serial(const ProtocolConfig &cfg);

/// Exact sequence average for the loss variant: Tr[Q (Gbar o E)^m (rho0)],
/// with Gbar the twirl over the gate set.
double exact_sequence_average(const ProtocolConfig &cfg, int m);

/// Default grids: m = 5, 10, ..., 100 for loss runs and m = 10, 20, ..., 300
/// for leakage runs.
std::vector<int> arithmetic_grid(int start, int stop, int step);

}  // namespace lossrb

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
 * Run configuration documents.
 *
 * A run config is a JSON object with the sections
 *
 *   gateset     "pauli" | "clifford"
 *   noise       {"type": "basis_loss", "alpha", "level", "dim"}
 *               {"type": "leakage", "epsilon", "hamiltonian_seed", ["theta"]}
 *               {"type": "kraus", "operators": [matrix, ...]}
 *               {"type": "depolarizing", "q", "dim"}
 *               {"type": "random_lossy", "dim", "loss_scale", "seed"}
 *               {"type": "identity", "dim"}
 *   state       "zero" | "one" | "maximally_mixed" | {"matrix": matrix}
 *   detector    {"eigenvalues": [...], "basis_seed": n} or {..., "basis": matrix}
 *   protocol    {"m_grid": [...] | {"start", "stop", "step"},
 *                "n_sequences", ["shots": n | "exact"], ["variant": "loss" | "rb"]}
 *   seed        unsigned 64-bit master seed
 *   output_dir  optional
 *
 * Matrices are nested arrays of [re, im] pairs (plain numbers are read as
 * real). Unknown keys are rejected. State and detector always describe the
 * qubit; for leakage noise they are padded with a zero row and column.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "lossrb/noise_models.hpp"
#include "lossrb/protocol.hpp"

namespace lossrb {

struct FieldError {
    std::string path;
    std::string message;
};

/// Every field-level problem found in a config document.
class ConfigError : public std::invalid_argument {
  public:
    explicit ConfigError(std::vector<FieldError> errors);
    const std::vector<FieldError> &errors() const { return errors_; }

  private:
    std::vector<FieldError> errors_;
};

struct KrausNoise {
    std::vector<Matrix> operators;
};
struct DepolarizingNoise {
    int dim = 2;
    double q = 0.0;
};
struct RandomLossyNoise {
    int dim = 2;
    double loss_scale = 0.1;
    std::uint64_t seed = 0;
};
struct IdentityNoise {
    int dim = 2;
};

using NoiseSpec = std::variant<LossModelSpec, LeakageModelSpec, KrausNoise, DepolarizingNoise, RandomLossyNoise,
                               IdentityNoise>;

struct ProtocolSection {
    std::vector<int> m_grid;
    int n_sequences = 30;
    std::optional<std::uint64_t> shots;
    Variant variant = Variant::Loss;
};

struct RunConfig {
    std::string gateset;
    NoiseSpec noise;
    /// Preset name or explicit qubit density matrix.
    std::variant<std::string, Matrix> state;
    DetectorSpec detector;
    ProtocolSection protocol;
    std::uint64_t seed = 0;
    std::string output_dir;
};

/// Parses and validates a full run config. Throws ConfigError.
RunConfig parse_config(const std::string &text);

/// Parses only what check-channel needs: the noise section must be present
/// and valid; unknown top-level keys are still rejected.
NoiseSpec parse_noise_config(const std::string &text);

QuantumChannel build_channel(const NoiseSpec &noise);

/// Builds the simulation inputs, embedding the qubit gate set, state and
/// detector into the qutrit for leakage noise.
ProtocolConfig build_protocol(const RunConfig &cfg);

}  // namespace lossrb

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
#include <optional>
#include <variant>
#include <vector>

#include "lossrb/quantum_core.hpp"

namespace lossrb {

/// Amplitude `alpha` retained on one basis level; every other level is
/// untouched.
struct LossModelSpec {
    double alpha = 1.0;
    int level = 0;
    int dim = 2;
};

/// Detector with the given response eigenvalues, diagonal either in a
/// seeded random orthonormal basis or in an explicit one (columns).
struct DetectorSpec {
    std::vector<double> eigenvalues;
    std::variant<std::uint64_t, Matrix> basis = std::uint64_t{0};
};

/// Coherent leakage on a qutrit: the fixed error unitary exp(-i epsilon H)
/// with H a seeded random Hermitian matrix of unit spectral norm, and a fixed
/// relative phase between the leakage level and the qubit levels.
struct LeakageModelSpec {
    double epsilon = 0.1;
    /// Relative phase; when absent it is drawn uniformly from [0, 2 pi) using
    /// the Hamiltonian seed.
    std::optional<double> theta;
    std::uint64_t hamiltonian_seed = 0;
};

/// Single Kraus operator 1 + (alpha - 1)|level><level|.
QuantumChannel basis_loss_channel(const LossModelSpec &spec);

/// Q = sum_i e_i |b_i><b_i|.
MeasurementOperator detector_model(const DetectorSpec &spec);
/// Orthonormal basis used by detector_model (columns).
Matrix detector_basis(const DetectorSpec &spec, int dim);

/// Random CPTP channel (d Kraus operators cut from a seeded random isometry)
/// followed by a diagonal attenuation with squared factors drawn from
/// [1 - loss_scale, 1].
QuantumChannel random_lossy_channel(int dim, double loss_scale, std::uint64_t seed);

/// Seeded random Hermitian 3x3 matrix with Gaussian entries, normalized to
/// unit spectral norm.
Matrix leakage_hamiltonian(std::uint64_t seed);
/// Relative phase used for a spec (explicit or seeded).
double leakage_phase(const LeakageModelSpec &spec);
/// Single unitary Kraus exp(-i epsilon H) on the qutrit.
QuantumChannel coherent_leakage_error(const LeakageModelSpec &spec);

/// E(rho) = (1 - q) rho + q Tr(rho) 1/d.
QuantumChannel depolarizing_channel(int dim, double q);

}  // namespace lossrb

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

#include "lossrb/noise_models.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lossrb {

QuantumChannel basis_loss_channel(const LossModelSpec &spec) {
    if (spec.dim < 1) {
        throw std::invalid_argument("basis_loss_channel: dim must be positive");
    }
    if (!(spec.alpha >= 0.0 && spec.alpha <= 1.0)) {
        throw std::invalid_argument("basis_loss_channel: alpha must lie in [0, 1]");
    }
    if (spec.level < 0 || spec.level >= spec.dim) {
        throw std::invalid_argument("basis_loss_channel: level must lie in [0, dim)");
    }
    Matrix k = Matrix::Identity(spec.dim, spec.dim);
    k(spec.level, spec.level) = spec.alpha;
    return QuantumChannel({k});
}

Matrix detector_basis(const DetectorSpec &spec, int dim) {
    if (const auto *seed = std::get_if<std::uint64_t>(&spec.basis)) {
        RngStream rng = make_stream(*seed, {static_cast<std::uint64_t>(StreamTag::Detector)});
        return random_unitary(dim, rng);
    }
    const Matrix &basis = std::get<Matrix>(spec.basis);
    if (basis.rows() != dim || basis.cols() != dim) {
        throw DimensionError("detector_model: basis must be " + std::to_string(dim) + "x" + std::to_string(dim));
    }
    double err = unitarity_error(basis);
    if (err >= kConstructionTol) {
        throw std::invalid_argument("detector_model: basis is not orthonormal (deviation " + std::to_string(err) + ")");
    }
    return basis;
}

MeasurementOperator detector_model(const DetectorSpec &spec) {
    if (spec.eigenvalues.empty()) {
        throw std::invalid_argument("detector_model: no eigenvalues");
    }
    const int dim = static_cast<int>(spec.eigenvalues.size());
    RealVector e(dim);
    for (int i = 0; i < dim; ++i) {
        double v = spec.eigenvalues[static_cast<std::size_t>(i)];
        if (!(v >= 0.0 && v <= 1.0)) {
            throw std::invalid_argument("detector_model: eigenvalue " + std::to_string(i) + " outside [0, 1]");
        }
        e[i] = v;
    }
    Matrix b = detector_basis(spec, dim);
    Matrix q = b * e.cast<Complex>().asDiagonal() * b.adjoint();
    return MeasurementOperator(hermitian_part(q));
}

QuantumChannel random_lossy_channel(int dim, double loss_scale, std::uint64_t seed) {
    if (dim < 2) {
        throw std::invalid_argument("random_lossy_channel: dim must be at least 2");
    }
    if (!(loss_scale >= 0.0 && loss_scale <= 1.0)) {
        throw std::invalid_argument("random_lossy_channel: loss_scale must lie in [0, 1]");
    }
    RngStream rng = make_stream(seed, {static_cast<std::uint64_t>(StreamTag::Channel), static_cast<std::uint64_t>(dim)});
    const int n_kraus = dim;
    Matrix g = random_ginibre(n_kraus * dim, dim, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix isometry = qr.householderQ() * Matrix::Identity(n_kraus * dim, dim);

    std::uniform_real_distribution<double> attenuation(1.0 - loss_scale, 1.0);
    Eigen::VectorXcd amplitude(dim);
    for (int i = 0; i < dim; ++i) {
        amplitude[i] = std::sqrt(attenuation(rng));
    }
    std::vector<Matrix> kraus;
    kraus.reserve(static_cast<std::size_t>(n_kraus));
    for (int k = 0; k < n_kraus; ++k) {
        kraus.push_back(amplitude.asDiagonal() * isometry.middleRows(k * dim, dim));
    }
    return QuantumChannel(std::move(kraus));
}

Matrix leakage_hamiltonian(std::uint64_t seed) {
    RngStream rng = make_stream(seed, {static_cast<std::uint64_t>(StreamTag::Hamiltonian)});
    Matrix g = random_ginibre(3, 3, rng);
    Matrix h = hermitian_part(g);
    double norm = hermitian_eigenvalues(h).cwiseAbs().maxCoeff();
    return h / norm;
}

double leakage_phase(const LeakageModelSpec &spec) {
    if (spec.theta) {
        return *spec.theta;
    }
    RngStream rng = make_stream(spec.hamiltonian_seed, {static_cast<std::uint64_t>(StreamTag::Phase)});
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    return phase(rng);
}

QuantumChannel coherent_leakage_error(const LeakageModelSpec &spec) {
    if (!(spec.epsilon >= 0.0) || !std::isfinite(spec.epsilon)) {
        throw std::invalid_argument("coherent_leakage_error: epsilon must be non-negative");
    }
    return QuantumChannel::unitary(unitary_exp(leakage_hamiltonian(spec.hamiltonian_seed), spec.epsilon));
}

QuantumChannel depolarizing_channel(int dim, double q) {
    if (dim < 1) {
        throw std::invalid_argument("depolarizing_channel: dim must be positive");
    }
    if (!(q >= 0.0 && q <= 1.0)) {
        throw std::invalid_argument("depolarizing_channel: q must lie in [0, 1]");
    }
    std::vector<Matrix> kraus;
    kraus.push_back(Matrix::Identity(dim, dim) * std::sqrt(1.0 - q));
    if (q > 0.0) {
        const double amp = std::sqrt(q / dim);
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < dim; ++j) {
                Matrix k = Matrix::Zero(dim, dim);
                k(i, j) = amp;
                kraus.push_back(std::move(k));
            }
        }
    }
    return QuantumChannel(std::move(kraus));
}

}  // namespace lossrb

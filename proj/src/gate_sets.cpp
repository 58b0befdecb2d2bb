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

#include "lossrb/gate_sets.hpp"

#include <cmath>
#include <deque>
#include <set>
#include <stdexcept>

namespace lossrb {

namespace {

constexpr double kNonzeroEntry = 1e-8;
constexpr double kKeyScale = 1e8;

std::vector<long long> canonical_key(const Matrix &u) {
    Matrix c = canonical_phase(u);
    std::vector<long long> key;
    key.reserve(static_cast<std::size_t>(2 * c.size()));
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
        for (Eigen::Index i = 0; i < c.rows(); ++i) {
            key.push_back(std::llround(c(i, j).real() * kKeyScale));
            key.push_back(std::llround(c(i, j).imag() * kKeyScale));
        }
    }
    return key;
}

Matrix logical_block(const Matrix &u, int logical_dim) {
    return u.topLeftCorner(logical_dim, logical_dim);
}

}  // namespace

Matrix canonical_phase(const Matrix &u) {
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
        for (Eigen::Index i = 0; i < u.rows(); ++i) {
            double mag = std::abs(u(i, j));
            if (mag > kNonzeroEntry) {
                return u * (std::conj(u(i, j)) / mag);
            }
        }
    }
    return u;
}

GateSet::GateSet(std::vector<Matrix> gates, std::vector<std::string> labels, int design_order, int logical_dim)
    : dim_(0), logical_dim_(logical_dim), design_order_(design_order), gates_(std::move(gates)),
      labels_(std::move(labels)) {
    if (gates_.empty()) {
        throw std::invalid_argument("GateSet: no gates");
    }
    if (labels_.size() != gates_.size()) {
        throw std::invalid_argument("GateSet: one label per gate required");
    }
    dim_ = static_cast<int>(gates_.front().rows());
    if (logical_dim_ == 0) {
        logical_dim_ = dim_;
    }
    if (logical_dim_ < 1 || logical_dim_ > dim_) {
        throw std::invalid_argument("GateSet: logical dimension out of range");
    }
    std::set<std::string> seen;
    for (std::size_t k = 0; k < gates_.size(); ++k) {
        const Matrix &u = gates_[k];
        if (u.rows() != dim_ || u.cols() != dim_) {
            throw DimensionError("GateSet: gates must share one square shape");
        }
        double err = unitarity_error(u);
        if (err >= kConstructionTol) {
            throw std::invalid_argument("GateSet: gate '" + labels_[k] + "' is not unitary (deviation " +
                                        std::to_string(err) + ")");
        }
        if (!seen.insert(labels_[k]).second) {
            throw std::invalid_argument("GateSet: duplicate label '" + labels_[k] + "'");
        }
        canonical_index_.emplace(canonical_key(logical_block(u, logical_dim_)), k);
    }
}

GateIndex GateSet::find(const Matrix &u) const {
    Matrix block = logical_block(u, logical_dim_);
    auto it = canonical_index_.find(canonical_key(block));
    if (it != canonical_index_.end() && equal_up_to_phase(logical_block(gates_[it->second], logical_dim_), block)) {
        return it->second;
    }
    // Entries that land on a rounding boundary miss the dictionary.
    for (std::size_t k = 0; k < gates_.size(); ++k) {
        if (equal_up_to_phase(logical_block(gates_[k], logical_dim_), block)) {
            return k;
        }
    }
    return gates_.size();
}

// ---------------------------------------------------------------------------

GateSet pauli_gateset() {
    const Complex i(0.0, 1.0);
    Matrix id = Matrix::Identity(2, 2);
    Matrix x(2, 2), y(2, 2), z(2, 2);
    x << 0.0, 1.0, 1.0, 0.0;
    y << 0.0, -i, i, 0.0;
    z << 1.0, 0.0, 0.0, -1.0;
    return GateSet({id, x, y, z}, {"I", "X", "Y", "Z"}, 1);
}

GateSet clifford_gateset() {
    const Complex i(0.0, 1.0);
    Matrix h(2, 2), s(2, 2);
    h << M_SQRT1_2, M_SQRT1_2, M_SQRT1_2, -M_SQRT1_2;
    s << 1.0, 0.0, 0.0, i;
    const std::pair<const char *, Matrix> generators[] = {{"H", h}, {"S", s}};

    std::vector<Matrix> gates;
    std::vector<std::string> labels;
    std::set<std::vector<long long>> seen;

    // Breadth-first over words; a word w acting as U_w, extended by appending
    // a generator on the left (applied last).
    std::deque<std::pair<Matrix, std::string>> frontier;
    frontier.emplace_back(Matrix::Identity(2, 2), "I");
    seen.insert(canonical_key(Matrix::Identity(2, 2)));
    while (!frontier.empty()) {
        auto [u, word] = frontier.front();
        frontier.pop_front();
        gates.push_back(canonical_phase(u));
        labels.push_back(word);
        for (const auto &[name, g] : generators) {
            Matrix next = canonical_phase(g * u);
            if (seen.insert(canonical_key(next)).second) {
                frontier.emplace_back(next, word == "I" ? std::string(name) : std::string(name) + word);
            }
        }
    }
    if (gates.size() != 24) {
        throw std::logic_error("clifford_gateset: enumerated " + std::to_string(gates.size()) + " elements");
    }
    return GateSet(std::move(gates), std::move(labels), 2);
}

Matrix twirl(const GateSet &gates, const Matrix &a) {
    if (a.rows() != gates.dim() || a.cols() != gates.dim()) {
        throw DimensionError("twirl: matrix does not match gate set dimension");
    }
    Matrix acc = Matrix::Zero(a.rows(), a.cols());
    for (const Matrix &u : gates.gates()) {
        acc.noalias() += u * a * u.adjoint();
    }
    return acc / static_cast<double>(gates.size());
}

Matrix compose_sequence(const GateSet &gates, std::span<const GateIndex> sequence) {
    Matrix u = Matrix::Identity(gates.dim(), gates.dim());
    for (GateIndex k : sequence) {
        if (k >= gates.size()) {
            throw std::out_of_range("compose_sequence: gate index " + std::to_string(k) + " out of range");
        }
        u = gates.gate(k) * u;
    }
    return u;
}

GateIndex inverse_gate(const GateSet &gates, std::span<const GateIndex> sequence) {
    Matrix product = compose_sequence(gates, sequence);
    GateIndex j = gates.find(product.adjoint());
    if (j == gates.size()) {
        throw std::domain_error("inverse_gate: gate set has no inverse for this sequence");
    }
    return j;
}

Matrix embed_in_qutrit(const Matrix &u, double theta) {
    if (u.rows() != 2 || u.cols() != 2) {
        throw DimensionError("embed_in_qutrit: expected a 2x2 unitary");
    }
    Matrix out = Matrix::Zero(3, 3);
    out.topLeftCorner(2, 2) = u;
    out(2, 2) = std::polar(1.0, theta);
    return out;
}

GateSet embed_gateset_in_qutrit(const GateSet &qubit_gates, double theta) {
    if (qubit_gates.dim() != 2) {
        throw DimensionError("embed_gateset_in_qutrit: expected a qubit gate set");
    }
    std::vector<Matrix> embedded;
    embedded.reserve(qubit_gates.size());
    for (const Matrix &u : qubit_gates.gates()) {
        embedded.push_back(embed_in_qutrit(u, theta));
    }
    return GateSet(std::move(embedded), qubit_gates.labels(), 0, 2);
}

}  // namespace lossrb

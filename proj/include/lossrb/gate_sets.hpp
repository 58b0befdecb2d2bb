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

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "lossrb/quantum_core.hpp"

namespace lossrb {

/// Index into a GateSet. Zero-based in code; gate k here is gate k+1 in the
/// one-based numbering used by sequence logs.
using GateIndex = std::size_t;

/**
 * Finite, immutable set of unitaries.
 *
 * Gates are compared up to global phase. For gate sets embedded into a larger
 * space (the qutrit leakage study), `logical_dim` is the size of the
 * top-left block on which group operations such as inversion are defined.
 */
class GateSet {
  public:
    GateSet(std::vector<Matrix> gates, std::vector<std::string> labels, int design_order, int logical_dim = 0);

    int dim() const { return dim_; }
    int logical_dim() const { return logical_dim_; }
    int design_order() const { return design_order_; }
    std::size_t size() const { return gates_.size(); }
    const Matrix &gate(GateIndex k) const { return gates_.at(k); }
    const std::vector<Matrix> &gates() const { return gates_; }
    const std::vector<std::string> &labels() const { return labels_; }
    /// Index of the gate equal to `u` up to phase (on the logical block), or
    /// size() when absent.
    GateIndex find(const Matrix &u) const;

  private:
    int dim_;
    int logical_dim_;
    int design_order_;
    std::vector<Matrix> gates_;
    std::vector<std::string> labels_;
    std::map<std::vector<long long>, GateIndex> canonical_index_;
};

/// Single-qubit Paulis in the order (I, X, Y, Z); a unitary 1-design.
GateSet pauli_gateset();

/// The 24 single-qubit Cliffords generated by {H, S}, in breadth-first order
/// of their shortest word; a unitary 2-design.
GateSet clifford_gateset();

/// |G|^-1 sum_g U_g A U_g^H.
Matrix twirl(const GateSet &gates, const Matrix &a);

/// U_{k_m} ... U_{k_1}; identity for an empty sequence.
Matrix compose_sequence(const GateSet &gates, std::span<const GateIndex> sequence);

/// Index j with U_j * compose_sequence(k) proportional to the identity (on
/// the logical block). Throws std::domain_error when the set holds no such
/// element.
GateIndex inverse_gate(const GateSet &gates, std::span<const GateIndex> sequence);

/// U (+) e^{i theta}: a qubit unitary acting on the first two levels of a
/// qutrit, with a relative phase on the leakage level.
Matrix embed_in_qutrit(const Matrix &u, double theta);

/// Every gate of a qubit set embedded with the same relative phase. The
/// result keeps logical_dim = 2 and design_order 0 (it is not a design on the
/// qutrit).
GateSet embed_gateset_in_qutrit(const GateSet &qubit_gates, double theta);

/// Phase-canonical form: first entry with magnitude > 1e-8 (column-major)
/// made real and positive.
Matrix canonical_phase(const Matrix &u);

}  // namespace lossrb

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
 * Small dense complex linear algebra plus the state, channel and measurement
 * primitives of the loss protocol. Dimensions are expected to be small
 * (d <= 8); everything is dense.
 */

#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lossrb/rng.hpp"

namespace lossrb {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Tolerance for properties that hold by construction.
inline constexpr double kConstructionTol = 1e-12;
/// Tolerance for properties that accumulate floating point error.
inline constexpr double kArithmeticTol = 1e-10;

/// Raised when operands have inconsistent dimensions.
class DimensionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// One violated invariant with the measured deviation.
struct ValidationIssue {
    std::string invariant;
    double deviation;
};
using ValidationReport = std::vector<ValidationIssue>;

// ---------------------------------------------------------------------------
// Linear algebra helpers.

/// Largest absolute entry.
double max_abs(const Matrix &a);
/// Largest absolute entry of A - A^H.
double hermiticity_error(const Matrix &a);
/// (A + A^H) / 2.
Matrix hermitian_part(const Matrix &a);
/// Ascending eigenvalues of the Hermitian part of A.
RealVector hermitian_eigenvalues(const Matrix &a);
/// Eigen-decomposition of the Hermitian part: ascending eigenvalues and the
/// matching orthonormal eigenvectors (columns).
struct HermitianEigen {
    RealVector values;
    Matrix vectors;
};
HermitianEigen hermitian_eigen(const Matrix &a);
/// ||U^H U - 1||_max.
double unitarity_error(const Matrix &u);
/// True when A = e^{i phi} B for some phase, compared through |<A,B>|/d = 1
/// and equal Frobenius norms.
bool equal_up_to_phase(const Matrix &a, const Matrix &b, double tol = kArithmeticTol);
/// Hilbert-Schmidt inner product Tr(A^H B).
Complex hs_inner(const Matrix &a, const Matrix &b);
/// Block-diagonal extension of A to size `dim` with zeros.
Matrix pad_with_zeros(const Matrix &a, int dim);
/// Matrix exponential exp(-i t H) for Hermitian H.
Matrix unitary_exp(const Matrix &hermitian, double t);
/// Computational basis projector |k><k|.
Matrix basis_projector(int dim, int k);

// ---------------------------------------------------------------------------
// States, channels, measurements.

/// Possibly sub-normalized density matrix. Construction only checks the shape;
/// use validate_state() to inspect the physical invariants, or
/// DensityMatrix::checked() to require them.
class DensityMatrix {
  public:
    DensityMatrix(int dim, Matrix matrix);
    explicit DensityMatrix(Matrix matrix);

    /// Throws std::invalid_argument listing every violated invariant.
    static DensityMatrix checked(Matrix matrix);
    /// 1/d.
    static DensityMatrix maximally_mixed(int dim);
    /// |k><k|.
    static DensityMatrix basis_state(int dim, int k);
    /// |psi><psi| for a (not necessarily normalized) vector.
    static DensityMatrix pure(const Eigen::VectorXcd &psi);

    int dim() const { return dim_; }
    const Matrix &matrix() const { return matrix_; }
    double trace() const { return matrix_.trace().real(); }
    DensityMatrix scaled(double c) const { return DensityMatrix(dim_, matrix_ * c); }

  private:
    int dim_;
    Matrix matrix_;
};

/// Completely positive, trace-non-increasing map given by Kraus operators.
class QuantumChannel {
  public:
    /// Throws DimensionError on shape mismatch and std::invalid_argument when
    /// sum_i K_i^H K_i is not below the identity.
    explicit QuantumChannel(std::vector<Matrix> kraus);

    static QuantumChannel identity(int dim);
    static QuantumChannel unitary(const Matrix &u);

    int dim() const { return dim_; }
    const std::vector<Matrix> &kraus() const { return kraus_; }

  private:
    int dim_;
    std::vector<Matrix> kraus_;
};

/// POVM element Q with 0 <= Q <= 1.
class MeasurementOperator {
  public:
    explicit MeasurementOperator(Matrix q);

    static MeasurementOperator identity(int dim);

    int dim() const { return dim_; }
    const Matrix &matrix() const { return matrix_; }
    /// Tr(Q)/d, the state-averaged click probability.
    double mean_response() const { return matrix_.trace().real() / dim_; }

  private:
    int dim_;
    Matrix matrix_;
};

/// Lists every violated DensityMatrix invariant (Hermiticity, positivity,
/// 0 < trace <= 1).
ValidationReport validate_state(const DensityMatrix &rho);
/// Lists every violated QuantumChannel invariant for a raw Kraus list.
ValidationReport validate_kraus(const std::vector<Matrix> &kraus);

/// sum_i K_i rho K_i^H.
DensityMatrix apply_channel(const QuantumChannel &channel, const DensityMatrix &rho);
/// Conjugation U rho U^H.
DensityMatrix apply_unitary(const Matrix &u, const DensityMatrix &rho);

/// M = sum_i K_i^H K_i, so that Tr[E(rho)] = Tr(rho M).
Matrix survival_operator(const QuantumChannel &channel);

/// Re Tr(Q rho). Values within 1e-10 outside [0, 1] are clamped; anything
/// further out, or a non-negligible imaginary part, throws.
double expectation(const MeasurementOperator &q, const DensityMatrix &rho);

/// A draw from Binomial(shots, expectation(Q, rho)).
std::uint64_t sample_clicks(const MeasurementOperator &q, const DensityMatrix &rho, std::uint64_t shots,
                            RngStream &rng);
/// Same, from a precomputed click probability.
std::uint64_t sample_clicks(double probability, std::uint64_t shots, RngStream &rng);

// ---------------------------------------------------------------------------
// Random objects (tests and model generators).

/// Complex matrix with i.i.d. standard complex Gaussian entries.
Matrix random_ginibre(int rows, int cols, RngStream &rng);
/// Haar-random unitary from the QR decomposition of a Ginibre matrix with
/// the diagonal phases of R fixed.
Matrix random_unitary(int dim, RngStream &rng);
/// Haar-random pure state |psi><psi|.
DensityMatrix random_pure_state(int dim, RngStream &rng);
/// Unit-trace mixed state G G^H / Tr from a Ginibre matrix.
DensityMatrix random_mixed_state(int dim, RngStream &rng);

}  // namespace lossrb

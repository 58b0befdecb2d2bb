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

#include "lossrb/quantum_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lossrb {

namespace {

void require_square(const Matrix &a, const char *what) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        std::ostringstream msg;
        msg << what << ": expected a non-empty square matrix, got " << a.rows() << "x" << a.cols();
        throw DimensionError(msg.str());
    }
}

void require_same_dim(int a, int b, const char *what) {
    if (a != b) {
        std::ostringstream msg;
        msg << what << ": dimension mismatch (" << a << " vs " << b << ")";
        throw DimensionError(msg.str());
    }
}

std::string join_issues(const ValidationReport &report) {
    std::ostringstream msg;
    for (std::size_t i = 0; i < report.size(); ++i) {
        if (i) {
            msg << "; ";
        }
        msg << report[i].invariant << " (deviation " << report[i].deviation << ")";
    }
    return msg.str();
}

}  // namespace

// ---------------------------------------------------------------------------

double max_abs(const Matrix &a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double hermiticity_error(const Matrix &a) {
    return max_abs(a - a.adjoint());
}

Matrix hermitian_part(const Matrix &a) {
    return (a + a.adjoint()) * 0.5;
}

RealVector hermitian_eigenvalues(const Matrix &a) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(a), Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

HermitianEigen hermitian_eigen(const Matrix &a) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(a));
    return {solver.eigenvalues(), solver.eigenvectors()};
}

double unitarity_error(const Matrix &u) {
    if (u.rows() != u.cols()) {
        return INFINITY;
    }
    return max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols()));
}

Complex hs_inner(const Matrix &a, const Matrix &b) {
    return (a.adjoint() * b).trace();
}

bool equal_up_to_phase(const Matrix &a, const Matrix &b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        return false;
    }
    double na = a.squaredNorm();
    double nb = b.squaredNorm();
    if (std::abs(na - nb) > tol * std::max(1.0, na)) {
        return false;
    }
    if (na == 0.0) {
        return true;
    }
    return std::abs(std::abs(hs_inner(a, b)) / std::sqrt(na * nb) - 1.0) <= tol;
}

Matrix pad_with_zeros(const Matrix &a, int dim) {
    if (dim < a.rows() || dim < a.cols()) {
        throw DimensionError("pad_with_zeros: target dimension smaller than the matrix");
    }
    Matrix out = Matrix::Zero(dim, dim);
    out.topLeftCorner(a.rows(), a.cols()) = a;
    return out;
}

Matrix unitary_exp(const Matrix &hermitian, double t) {
    require_square(hermitian, "unitary_exp");
    HermitianEigen eig = hermitian_eigen(hermitian);
    Eigen::VectorXcd phases(eig.values.size());
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
        phases[i] = std::polar(1.0, -t * eig.values[i]);
    }
    return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

Matrix basis_projector(int dim, int k) {
    if (k < 0 || k >= dim) {
        throw std::out_of_range("basis_projector: level out of range");
    }
    Matrix p = Matrix::Zero(dim, dim);
    p(k, k) = 1.0;
    return p;
}

// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(int dim, Matrix matrix) : dim_(dim), matrix_(std::move(matrix)) {
    require_square(matrix_, "DensityMatrix");
    if (dim_ != matrix_.rows()) {
        std::ostringstream msg;
        msg << "DensityMatrix: declared dim " << dim_ << " but matrix is " << matrix_.rows() << "x"
            << matrix_.cols();
        throw DimensionError(msg.str());
    }
}

DensityMatrix::DensityMatrix(Matrix matrix) : dim_(static_cast<int>(matrix.rows())), matrix_(std::move(matrix)) {
    require_square(matrix_, "DensityMatrix");
}

DensityMatrix DensityMatrix::checked(Matrix matrix) {
    DensityMatrix rho(std::move(matrix));
    ValidationReport report = validate_state(rho);
    if (!report.empty()) {
        throw std::invalid_argument("invalid density matrix: " + join_issues(report));
    }
    return rho;
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
    return DensityMatrix(dim, Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::basis_state(int dim, int k) {
    return DensityMatrix(dim, basis_projector(dim, k));
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd &psi) {
    return DensityMatrix(static_cast<int>(psi.size()), psi * psi.adjoint());
}

ValidationReport validate_state(const DensityMatrix &rho) {
    ValidationReport report;
    const Matrix &m = rho.matrix();
    double herm = hermiticity_error(m);
    if (herm > kConstructionTol) {
        report.push_back({"hermitian", herm});
    }
    double min_eig = hermitian_eigenvalues(m).minCoeff();
    if (min_eig < -kConstructionTol) {
        report.push_back({"positive-semidefinite", -min_eig});
    }
    double tr = m.trace().real();
    if (tr <= 0.0) {
        report.push_back({"trace > 0", -tr});
    }
    if (tr > 1.0 + kConstructionTol) {
        report.push_back({"trace <= 1", tr - 1.0});
    }
    return report;
}

// ---------------------------------------------------------------------------

ValidationReport validate_kraus(const std::vector<Matrix> &kraus) {
    ValidationReport report;
    if (kraus.empty()) {
        report.push_back({"non-empty Kraus list", 0.0});
        return report;
    }
    Eigen::Index d = kraus.front().rows();
    Matrix m = Matrix::Zero(d, d);
    for (const Matrix &k : kraus) {
        if (k.rows() != d || k.cols() != d) {
            report.push_back({"Kraus operators share one square shape", static_cast<double>(k.rows())});
            return report;
        }
        m += k.adjoint() * k;
    }
    double herm = hermiticity_error(m);
    if (herm > kConstructionTol) {
        report.push_back({"survival operator hermitian", herm});
    }
    RealVector eig = hermitian_eigenvalues(m);
    if (eig.minCoeff() < -kConstructionTol) {
        report.push_back({"survival operator positive-semidefinite", -eig.minCoeff()});
    }
    if (eig.maxCoeff() > 1.0 + kArithmeticTol) {
        report.push_back({"trace-non-increasing", eig.maxCoeff() - 1.0});
    }
    return report;
}

QuantumChannel::QuantumChannel(std::vector<Matrix> kraus) : dim_(0), kraus_(std::move(kraus)) {
    if (kraus_.empty()) {
        throw std::invalid_argument("QuantumChannel: empty Kraus list");
    }
    require_square(kraus_.front(), "QuantumChannel");
    dim_ = static_cast<int>(kraus_.front().rows());
    for (const Matrix &k : kraus_) {
        require_square(k, "QuantumChannel");
        require_same_dim(dim_, static_cast<int>(k.rows()), "QuantumChannel");
    }
    ValidationReport report = validate_kraus(kraus_);
    if (!report.empty()) {
        throw std::invalid_argument("invalid channel: " + join_issues(report));
    }
}

QuantumChannel QuantumChannel::identity(int dim) {
    return QuantumChannel({Matrix::Identity(dim, dim)});
}

QuantumChannel QuantumChannel::unitary(const Matrix &u) {
    return QuantumChannel({u});
}

MeasurementOperator::MeasurementOperator(Matrix q) : dim_(0), matrix_(std::move(q)) {
    require_square(matrix_, "MeasurementOperator");
    dim_ = static_cast<int>(matrix_.rows());
    double herm = hermiticity_error(matrix_);
    if (herm > kConstructionTol) {
        throw std::invalid_argument("MeasurementOperator: not hermitian (deviation " + std::to_string(herm) + ")");
    }
    RealVector eig = hermitian_eigenvalues(matrix_);
    if (eig.minCoeff() < -kConstructionTol || eig.maxCoeff() > 1.0 + kConstructionTol) {
        throw std::invalid_argument("MeasurementOperator: eigenvalues must lie in [0, 1]");
    }
}

MeasurementOperator MeasurementOperator::identity(int dim) {
    return MeasurementOperator(Matrix::Identity(dim, dim));
}

// ---------------------------------------------------------------------------

DensityMatrix apply_channel(const QuantumChannel &channel, const DensityMatrix &rho) {
    require_same_dim(channel.dim(), rho.dim(), "apply_channel");
    const auto &kraus = channel.kraus();
    Matrix out = kraus.front() * rho.matrix() * kraus.front().adjoint();
    for (std::size_t i = 1; i < kraus.size(); ++i) {
        out.noalias() += kraus[i] * rho.matrix() * kraus[i].adjoint();
    }
    return DensityMatrix(rho.dim(), std::move(out));
}

DensityMatrix apply_unitary(const Matrix &u, const DensityMatrix &rho) {
    require_same_dim(static_cast<int>(u.rows()), rho.dim(), "apply_unitary");
    return DensityMatrix(rho.dim(), u * rho.matrix() * u.adjoint());
}

Matrix survival_operator(const QuantumChannel &channel) {
    Matrix m = Matrix::Zero(channel.dim(), channel.dim());
    for (const Matrix &k : channel.kraus()) {
        m.noalias() += k.adjoint() * k;
    }
    return hermitian_part(m);
}

double expectation(const MeasurementOperator &q, const DensityMatrix &rho) {
    require_same_dim(q.dim(), rho.dim(), "expectation");
    Complex value = (q.matrix() * rho.matrix()).trace();
    if (std::abs(value.imag()) >= kArithmeticTol) {
        throw std::domain_error("expectation: Tr(Q rho) has imaginary part " + std::to_string(value.imag()));
    }
    double p = value.real();
    if (p < 0.0) {
        if (p < -kArithmeticTol) {
            throw std::domain_error("expectation: Tr(Q rho) = " + std::to_string(p) + " below 0");
        }
        p = 0.0;
    } else if (p > 1.0) {
        if (p > 1.0 + kArithmeticTol) {
            throw std::domain_error("expectation: Tr(Q rho) = " + std::to_string(p) + " above 1");
        }
        p = 1.0;
    }
    return p;
}

std::uint64_t sample_clicks(double probability, std::uint64_t shots, RngStream &rng) {
    if (shots == 0) {
        throw std::invalid_argument("sample_clicks: shots must be positive");
    }
    if (!(probability >= 0.0 && probability <= 1.0)) {
        throw std::domain_error("sample_clicks: probability outside [0, 1]");
    }
    std::binomial_distribution<std::uint64_t> dist(shots, probability);
    return dist(rng);
}

std::uint64_t sample_clicks(const MeasurementOperator &q, const DensityMatrix &rho, std::uint64_t shots,
                            RngStream &rng) {
    return sample_clicks(expectation(q, rho), shots, rng);
}

// ---------------------------------------------------------------------------

Matrix random_ginibre(int rows, int cols, RngStream &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix g(rows, cols);
    // Column-major fill order is part of the seeded output.
    for (int c = 0; c < cols; ++c) {
        for (int r = 0; r < rows; ++r) {
            double re = normal(rng);
            double im = normal(rng);
            g(r, c) = Complex(re, im) * M_SQRT1_2;
        }
    }
    return g;
}

Matrix random_unitary(int dim, RngStream &rng) {
    Matrix g = random_ginibre(dim, dim, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < dim; ++i) {
        Complex diag = r(i, i);
        double mag = std::abs(diag);
        if (mag > 0.0) {
            q.col(i) *= diag / mag;
        }
    }
    return q;
}

DensityMatrix random_pure_state(int dim, RngStream &rng) {
    Eigen::VectorXcd psi = random_ginibre(dim, 1, rng).col(0);
    psi.normalize();
    return DensityMatrix::pure(psi);
}

DensityMatrix random_mixed_state(int dim, RngStream &rng) {
    Matrix g = random_ginibre(dim, dim, rng);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(dim, hermitian_part(rho));
}

}  // namespace lossrb

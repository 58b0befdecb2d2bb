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

#include "lossrb/least_squares.hpp"

#include <algorithm>
#include <cmath>

namespace lossrb {

namespace {

constexpr double kMaxDamping = 1e20;
constexpr double kRelativeStepTol = 1e-14;

bool all_finite(const Eigen::VectorXd &v) {
    return v.allFinite();
}

/// Largest cosine between the residual vector and a Jacobian column.
double gradient_cosine(const Eigen::MatrixXd &jacobian, const Eigen::VectorXd &residuals) {
    const double rnorm = residuals.norm();
    if (rnorm == 0.0) {
        return 0.0;
    }
    double worst = 0.0;
    for (Eigen::Index i = 0; i < jacobian.cols(); ++i) {
        const double cnorm = jacobian.col(i).norm();
        if (cnorm > 0.0) {
            worst = std::max(worst, std::abs(jacobian.col(i).dot(residuals)) / (cnorm * rnorm));
        }
    }
    return worst;
}

}  // namespace

LeastSquaresResult levenberg_marquardt(const ResidualFunction &fn, Eigen::VectorXd initial,
                                       const LeastSquaresOptions &options) {
    LeastSquaresResult res;
    res.params = std::move(initial);
    fn(res.params, res.residuals, res.jacobian);
    res.cost = res.residuals.squaredNorm();

    double damping = options.initial_damping;
    Eigen::VectorXd trial_r;
    Eigen::MatrixXd trial_j;

    for (int iter = 0; iter < options.max_iterations; ++iter) {
        res.iterations = iter;
        const Eigen::VectorXd gradient = res.jacobian.transpose() * res.residuals;
        if (gradient_cosine(res.jacobian, res.residuals) <= options.gradient_tol) {
            res.converged = true;
            return res;
        }
        const Eigen::MatrixXd normal = res.jacobian.transpose() * res.jacobian;
        const double diag_floor = std::max(normal.diagonal().maxCoeff(), 1.0) * 1e-15;

        bool accepted = false;
        while (!accepted && damping < kMaxDamping) {
            Eigen::MatrixXd lhs = normal;
            for (Eigen::Index i = 0; i < lhs.rows(); ++i) {
                lhs(i, i) += damping * std::max(normal(i, i), diag_floor);
            }
            const Eigen::VectorXd step = lhs.ldlt().solve(-gradient);
            const Eigen::VectorXd trial = res.params + step;
            if (!all_finite(step)) {
                damping *= 10.0;
                continue;
            }
            fn(trial, trial_r, trial_j);
            const double trial_cost = trial_r.squaredNorm();
            if (std::isfinite(trial_cost) && trial_cost <= res.cost) {
                const double step_size = step.lpNorm<Eigen::Infinity>();
                const double scale = res.params.lpNorm<Eigen::Infinity>() + kRelativeStepTol;
                const bool stalled = step_size <= kRelativeStepTol * scale || trial_cost == res.cost;
                res.params = trial;
                res.residuals = trial_r;
                res.jacobian = trial_j;
                res.cost = trial_cost;
                damping = std::max(damping * 0.1, 1e-15);
                accepted = true;
                if (stalled) {
                    res.iterations = iter + 1;
                    res.converged = true;
                    return res;
                }
            } else {
                damping *= 10.0;
            }
        }
        if (!accepted) {
            // No descent direction left at working precision.
            res.iterations = iter + 1;
            res.converged = gradient_cosine(res.jacobian, res.residuals) <= std::sqrt(options.gradient_tol);
            return res;
        }
    }
    res.iterations = options.max_iterations;
    res.converged = gradient_cosine(res.jacobian, res.residuals) <= options.gradient_tol;
    return res;
}

Eigen::MatrixXd parameter_covariance(const Eigen::MatrixXd &jacobian, double scale) {
    const Eigen::MatrixXd normal = jacobian.transpose() * jacobian;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(normal);
    return cod.pseudoInverse() * scale;
}

}  // namespace lossrb

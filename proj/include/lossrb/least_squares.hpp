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

#include <functional>

#include <Eigen/Dense>

namespace lossrb {

struct LeastSquaresOptions {
    /// Stop when the cosine between r and every column of J is at most
    /// gradient_tol, i.e. the residual is orthogonal to the model tangent.
    double gradient_tol = 1e-10;
    int max_iterations = 200;
    double initial_damping = 1e-3;
};

struct LeastSquaresResult {
    Eigen::VectorXd params;
    Eigen::VectorXd residuals;
    Eigen::MatrixXd jacobian;
    /// Sum of squared residuals.
    double cost = 0.0;
    bool converged = false;
    int iterations = 0;
};

/// Fills residuals r(params) and the Jacobian dr/dparams. Residuals are
/// already weighted.
using ResidualFunction = std::function<void(const Eigen::VectorXd &params, Eigen::VectorXd &residuals,
                                            Eigen::MatrixXd &jacobian)>;

/// Levenberg-Marquardt with Marquardt's diagonal scaling.
LeastSquaresResult levenberg_marquardt(const ResidualFunction &fn, Eigen::VectorXd initial,
                                       const LeastSquaresOptions &options = {});

/// (J^T J)^+ scaled by `scale` (pseudo-inverse, so rank-deficient problems
/// still produce finite numbers).
Eigen::MatrixXd parameter_covariance(const Eigen::MatrixXd &jacobian, double scale);

}  // namespace lossrb

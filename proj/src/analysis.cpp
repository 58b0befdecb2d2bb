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

#include "lossrb/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace lossrb {

// ---------------------------------------------------------------------------
// Survival and loss.

double state_survival(const QuantumChannel &channel, const DensityMatrix &rho) {
    if (channel.dim() != rho.dim()) {
        throw DimensionError("state_survival: dimension mismatch");
    }
    const double tr = rho.trace();
    if (!(tr > 0.0)) {
        throw std::invalid_argument("state_survival: state has zero trace");
    }
    return (rho.matrix() * survival_operator(channel)).trace().real() / tr;
}

double average_survival(const QuantumChannel &channel) {
    return survival_operator(channel).trace().real() / channel.dim();
}

double worst_case_loss(const QuantumChannel &channel) {
    return 1.0 - hermitian_eigenvalues(survival_operator(channel)).minCoeff();
}

DensityMatrix worst_case_state(const QuantumChannel &channel) {
    HermitianEigen eig = hermitian_eigen(survival_operator(channel));
    return DensityMatrix::pure(eig.vectors.col(0));
}

double predicted_loss_decay(const QuantumChannel &channel, const DensityMatrix &rho, const MeasurementOperator &q,
                            int m) {
    if (m < 1) {
        throw std::invalid_argument("predicted_loss_decay: m must be positive");
    }
    return q.mean_response() * state_survival(channel, rho) * std::pow(average_survival(channel), m - 1);
}

BoundReport prop1_check(const QuantumChannel &channel) {
    BoundReport r;
    r.dim = channel.dim();
    const Matrix m = survival_operator(channel);
    HermitianEigen eig = hermitian_eigen(m);
    r.avg_loss = 1.0 - m.trace().real() / r.dim;
    r.worst_loss = 1.0 - eig.values[0];
    r.bound = r.dim * r.avg_loss;
    r.slack = r.bound - r.worst_loss;
    r.satisfied = r.worst_loss <= r.bound + kArithmeticTol;
    if (r.dim > 1) {
        const Eigen::VectorXcd psi = eig.vectors.col(0);
        const Matrix complement =
            (Matrix::Identity(r.dim, r.dim) - psi * psi.adjoint()) / static_cast<double>(r.dim - 1);
        r.complement_survival = (complement * m).trace().real();
    }
    r.complement_is_probability =
        r.complement_survival >= -kArithmeticTol && r.complement_survival <= 1.0 + kArithmeticTol;
    return r;
}

// ---------------------------------------------------------------------------
// Fits.

namespace {

struct FitData {
    std::vector<double> m;
    std::vector<double> y;
    std::vector<double> sigma;
    bool unit_weights = false;
};

FitData prepare(const DecayDataset &ds, std::size_t min_points, const char *who) {
    std::set<int> distinct;
    FitData data;
    for (const DecayPoint &p : ds.points) {
        distinct.insert(p.m);
        if (!p.sem || !(*p.sem > 0.0)) {
            data.unit_weights = true;
        }
    }
    if (distinct.size() < min_points) {
        throw FitError(std::string(who) + ": need at least " + std::to_string(min_points) +
                       " distinct sequence lengths, got " + std::to_string(distinct.size()));
    }
    for (const DecayPoint &p : ds.points) {
        if (!std::isfinite(p.mean)) {
            throw FitError(std::string(who) + ": non-finite mean");
        }
        data.m.push_back(p.m);
        data.y.push_back(p.mean);
        data.sigma.push_back(data.unit_weights ? 1.0 : *p.sem);
    }
    return data;
}

/// With unit weights the residuals are divided by the largest |mean| so that
/// convergence tolerances are relative to the data. Estimates and the
/// chi2-scaled covariance do not depend on this constant.
void normalize_unit_weights(FitData &data) {
    if (!data.unit_weights) {
        return;
    }
    double scale = 0.0;
    for (double y : data.y) {
        scale = std::max(scale, std::abs(y));
    }
    std::fill(data.sigma.begin(), data.sigma.end(), scale > 0.0 ? scale : 1.0);
}

/// Weighted linear regression y = a + b x. Returns false when degenerate.
bool linear_regression(const std::vector<double> &x, const std::vector<double> &y, const std::vector<double> &w,
                       double &a, double &b) {
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sw += w[i];
        sx += w[i] * x[i];
        sy += w[i] * y[i];
        sxx += w[i] * x[i] * x[i];
        sxy += w[i] * x[i] * y[i];
    }
    const double det = sw * sxx - sx * sx;
    if (!(sw > 0.0) || !(std::abs(det) > 1e-300)) {
        return false;
    }
    b = (sw * sxy - sx * sy) / det;
    a = (sy - b * sx) / sw;
    return std::isfinite(a) && std::isfinite(b);
}

}  // namespace

DecayFit fit_loss_decay(const DecayDataset &ds, const LeastSquaresOptions &options) {
    FitData data = prepare(ds, 3, "fit_loss_decay");
    const std::size_t n = data.m.size();

    // Initial guess from log(mean) vs m over the positive means, weighted by
    // the inverse variance of log(mean).
    std::vector<double> lx, ly, lw;
    for (std::size_t i = 0; i < n; ++i) {
        if (data.y[i] > 0.0) {
            lx.push_back(data.m[i] - 1.0);
            ly.push_back(std::log(data.y[i]));
            lw.push_back((data.y[i] / data.sigma[i]) * (data.y[i] / data.sigma[i]));
        }
    }
    if (lx.empty()) {
        throw FitError("fit_loss_decay: all means are non-positive");
    }
    double log_b0 = 0.0;
    double log_s = 0.0;
    std::set<double> distinct_x(lx.begin(), lx.end());
    if (distinct_x.size() < 3 || !linear_regression(lx, ly, lw, log_b0, log_s)) {
        log_b0 = ly.front();
        log_s = std::log(0.99);
        data.unit_weights = true;
    }
    normalize_unit_weights(data);

    auto residuals = [&](const Eigen::VectorXd &p, Eigen::VectorXd &r, Eigen::MatrixXd &j) {
        r.resize(static_cast<Eigen::Index>(n));
        j.resize(static_cast<Eigen::Index>(n), 2);
        for (std::size_t i = 0; i < n; ++i) {
            const auto row = static_cast<Eigen::Index>(i);
            const double x = data.m[i] - 1.0;
            const double f = std::exp(p[0] + x * p[1]);
            r[row] = (data.y[i] - f) / data.sigma[i];
            j(row, 0) = -f / data.sigma[i];
            j(row, 1) = -f * x / data.sigma[i];
        }
    };
    Eigen::VectorXd init(2);
    init << log_b0, log_s;
    LeastSquaresResult lm = levenberg_marquardt(residuals, init, options);

    DecayFit fit;
    fit.unit_weights = data.unit_weights;
    fit.B0_hat = std::exp(lm.params[0]);
    fit.S_hat = std::exp(lm.params[1]);
    const double dof = static_cast<double>(n) - 2.0;
    fit.chi2_per_dof = dof > 0 ? lm.cost / dof : 0.0;
    const Eigen::MatrixXd cov = parameter_covariance(lm.jacobian, fit.chi2_per_dof);
    fit.stderr_B0 = fit.B0_hat * std::sqrt(std::max(cov(0, 0), 0.0));
    fit.stderr_S = fit.S_hat * std::sqrt(std::max(cov(1, 1), 0.0));
    fit.n_iterations = lm.iterations;
    fit.converged = lm.converged && std::isfinite(fit.S_hat) && std::isfinite(fit.B0_hat) && fit.S_hat > 0.0 &&
                    fit.S_hat <= 1.0 + 3.0 * fit.stderr_S + kArithmeticTol && fit.B0_hat > 0.0 &&
                    fit.B0_hat < 1.0 + 3.0 * fit.stderr_B0 + kArithmeticTol;
    return fit;
}

double loss_model(const DecayFit &fit, int m) {
    return fit.B0_hat * std::pow(fit.S_hat, m - 1);
}

RBFit fit_rb_decay(const DecayDataset &ds, const LeastSquaresOptions &options) {
    FitData data = prepare(ds, 4, "fit_rb_decay");
    normalize_unit_weights(data);
    const std::size_t n = data.m.size();

    // Constant from the large-m tail, then log-linear on the excess.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return data.m[a] < data.m[b]; });
    const std::size_t n_tail = std::max<std::size_t>(1, n / 3);
    double b0 = 0.0;
    for (std::size_t t = n - n_tail; t < n; ++t) {
        b0 += data.y[order[t]];
    }
    b0 /= static_cast<double>(n_tail);

    std::vector<double> lx, ly, lw;
    for (std::size_t i = 0; i < n; ++i) {
        const double excess = data.y[i] - b0;
        if (excess > 0.0) {
            lx.push_back(data.m[i]);
            ly.push_back(std::log(excess));
            lw.push_back((excess / data.sigma[i]) * (excess / data.sigma[i]));
        }
    }
    double log_a = 0.0;
    double log_p = std::log(0.95);
    std::set<double> distinct_x(lx.begin(), lx.end());
    if (distinct_x.size() < 2 || !linear_regression(lx, ly, lw, log_a, log_p)) {
        const double first = data.y[order.front()] - b0;
        log_a = std::log(std::max(std::abs(first), 1e-3));
        log_p = std::log(0.95);
    }
    double p0 = std::exp(log_p);
    if (!(p0 > 0.0 && p0 < 1.0)) {
        p0 = 0.95;
    }

    auto residuals = [&](const Eigen::VectorXd &p, Eigen::VectorXd &r, Eigen::MatrixXd &j) {
        r.resize(static_cast<Eigen::Index>(n));
        j.resize(static_cast<Eigen::Index>(n), 3);
        for (std::size_t i = 0; i < n; ++i) {
            const auto row = static_cast<Eigen::Index>(i);
            const double m = data.m[i];
            const double pm = std::pow(p[2], m);
            const double f = p[0] * pm + p[1];
            r[row] = (data.y[i] - f) / data.sigma[i];
            j(row, 0) = -pm / data.sigma[i];
            j(row, 1) = -1.0 / data.sigma[i];
            j(row, 2) = -p[0] * m * std::pow(p[2], m - 1.0) / data.sigma[i];
        }
    };
    Eigen::VectorXd init(3);
    init << std::exp(log_a), b0, p0;
    LeastSquaresResult lm = levenberg_marquardt(residuals, init, options);

    RBFit fit;
    fit.unit_weights = data.unit_weights;
    fit.A_hat = lm.params[0];
    fit.B_hat = lm.params[1];
    fit.p_hat = lm.params[2];
    const double dof = static_cast<double>(n) - 3.0;
    fit.chi2_per_dof = dof > 0 ? lm.cost / dof : 0.0;
    const Eigen::MatrixXd cov = parameter_covariance(lm.jacobian, fit.chi2_per_dof);
    fit.stderr_A = std::sqrt(std::max(cov(0, 0), 0.0));
    fit.stderr_B = std::sqrt(std::max(cov(1, 1), 0.0));
    fit.stderr_p = std::sqrt(std::max(cov(2, 2), 0.0));
    fit.cov_AB = cov(0, 1);
    fit.n_iterations = lm.iterations;
    fit.converged = lm.converged && lm.params.allFinite() && fit.p_hat > 0.0 &&
                    fit.p_hat <= 1.0 + 3.0 * fit.stderr_p + kArithmeticTol;
    return fit;
}

// ---------------------------------------------------------------------------

DetectorEfficiency detector_efficiency(double B0_hat, double S_hat, const MeasurementOperator &ideal) {
    if (!(S_hat > 0.0)) {
        throw std::invalid_argument("detector_efficiency: S_hat must be positive");
    }
    const double ideal_response = ideal.mean_response();
    if (!(ideal_response > 0.0)) {
        throw std::invalid_argument("detector_efficiency: ideal detector has zero response");
    }
    DetectorEfficiency out;
    out.D_hat = B0_hat / S_hat;
    out.eta = out.D_hat / ideal_response;
    out.relative_uncertainty = (ideal.dim() - 1) * (1.0 - S_hat);
    return out;
}

// ---------------------------------------------------------------------------

double z_score(double x, double sigma) {
    if (sigma > 0.0) {
        return x / sigma;
    }
    if (std::abs(x) <= 1e-12) {
        return 0.0;
    }
    return x > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
}

PlateauResult plateau_test(const DecayDataset &ds, const DecayFit &fit, const FlagThresholds &thresholds) {
    const std::size_t min_points = 8;
    if (ds.points.size() < min_points) {
        throw FitError("plateau_test: need at least 8 sequence lengths");
    }
    const auto tail = static_cast<std::size_t>(std::max(1, thresholds.tail_points));
    if (tail > ds.points.size()) {
        throw FitError("plateau_test: tail longer than the dataset");
    }
    bool unit = false;
    for (const DecayPoint &p : ds.points) {
        if (!p.sem || !(*p.sem > 0.0)) {
            unit = true;
        }
    }
    double chi2 = 0.0;
    for (const DecayPoint &p : ds.points) {
        const double r = (p.mean - loss_model(fit, p.m)) / (unit ? 1.0 : *p.sem);
        chi2 += r * r;
    }
    PlateauResult out;
    out.chi2_per_dof = chi2 / static_cast<double>(ds.points.size() - 2);

    double excess = 0.0;
    double var = 0.0;
    for (std::size_t i = ds.points.size() - tail; i < ds.points.size(); ++i) {
        const DecayPoint &p = ds.points[i];
        excess += p.mean - loss_model(fit, p.m);
        const double s = p.sem.value_or(0.0);
        var += s * s;
    }
    const double nt = static_cast<double>(tail);
    out.tail_excess_z = z_score(excess / nt, std::sqrt(var) / nt);
    out.flagged = out.chi2_per_dof > thresholds.chi2_per_dof || out.tail_excess_z > thresholds.z;
    return out;
}

const char *to_string(MarkovFlag flag) {
    switch (flag) {
    case MarkovFlag::BMinusANegative:
        return "B_MINUS_A_NEGATIVE";
    case MarkovFlag::M1Mismatch:
        return "M1_MISMATCH";
    case MarkovFlag::Plateau:
        return "PLATEAU";
    }
    return "UNKNOWN";
}

bool MarkovReport::has(MarkovFlag f) const {
    return std::find(flags.begin(), flags.end(), f) != flags.end();
}

MarkovReport markovianity_tests(const RBFit &rb, const MeanWithError &loss_m1,
                                const std::optional<SimulationTruth> &truth,
                                const std::optional<PlateauResult> &plateau, const FlagThresholds &thresholds) {
    if (!rb.converged) {
        throw FitError("markovianity_tests: RB fit did not converge");
    }
    MarkovReport r;
    r.b_minus_a = rb.B_hat - rb.A_hat;
    const double var = rb.stderr_A * rb.stderr_A + rb.stderr_B * rb.stderr_B - 2.0 * rb.cov_AB;
    r.b_minus_a_sigma = std::sqrt(std::max(var, 0.0));
    r.rb_b = rb.B_hat;
    r.rb_b_sigma = rb.stderr_B;
    r.m1_intercept = loss_m1.mean;
    r.m1_sigma = loss_m1.sem;

    if (z_score(r.b_minus_a, r.b_minus_a_sigma) < -thresholds.z) {
        r.flags.push_back(MarkovFlag::BMinusANegative);
    }
    const double combined = std::sqrt(r.rb_b_sigma * r.rb_b_sigma + r.m1_sigma * r.m1_sigma);
    if (std::abs(z_score(r.rb_b - r.m1_intercept, combined)) > thresholds.z) {
        r.flags.push_back(MarkovFlag::M1Mismatch);
    }
    if (plateau && plateau->flagged) {
        r.flags.push_back(MarkovFlag::Plateau);
    }
    if (truth && truth->channel.dim() == 2) {
        // Bloch vector negated, trace kept.
        const Matrix rho = truth->rho.matrix();
        const DensityMatrix perp(2, Matrix::Identity(2, 2) * rho.trace().real() - rho);
        r.exact_b_minus_a = (truth->measurement.matrix() * apply_channel(truth->channel, perp).matrix()).trace().real();
    }
    return r;
}

}  // namespace lossrb

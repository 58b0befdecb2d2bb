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
 * Estimation and validation: survival and loss rates, the worst-case loss
 * bound, decay-curve fits, detector efficiency and the Markovianity
 * diagnostics.
 *
 * For gate-independent Markovian noise E and a gate set that is at least a
 * unitary 1-design, the loss-protocol average is
 *
 *     E_k Q_k = D(Q) S(rho|E) S(E)^(m-1),   D(Q) = Tr Q / d,
 *
 * so the fit recovers S(E) and the intercept B0 = D(Q) S(rho|E).
 */

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lossrb/least_squares.hpp"
#include "lossrb/protocol.hpp"
#include "lossrb/quantum_core.hpp"

namespace lossrb {

/// Raised when a dataset cannot be fitted at all (too few points, no
/// positive means). Non-convergence is reported in the fit, not thrown.
class FitError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Survival and loss.

/// S(rho|E) = Tr[E(rho)] / Tr(rho).
double state_survival(const QuantumChannel &channel, const DensityMatrix &rho);
/// S(E) = S(1/d | E) = Tr(M) / d.
double average_survival(const QuantumChannel &channel);
/// max over states of L(rho|E) = 1 - lambda_min(M).
double worst_case_loss(const QuantumChannel &channel);
/// A pure state attaining worst_case_loss.
DensityMatrix worst_case_state(const QuantumChannel &channel);

/// D(Q) S(rho|E) S(E)^(m-1).
double predicted_loss_decay(const QuantumChannel &channel, const DensityMatrix &rho, const MeasurementOperator &q,
                            int m);

struct BoundReport {
    int dim = 0;
    double avg_loss = 0.0;
    double worst_loss = 0.0;
    /// d * avg_loss.
    double bound = 0.0;
    /// bound - worst_loss.
    double slack = 0.0;
    bool satisfied = false;
    /// Tr E(rho') for rho' = (1 - rho*)/(d - 1), rho* the worst-case state;
    /// always a probability.
    double complement_survival = 0.0;
    bool complement_is_probability = false;
};

/// Checks L(rho|E) <= d L(E) at the worst-case state.
BoundReport prop1_check(const QuantumChannel &channel);

// ---------------------------------------------------------------------------
// Fits.

struct DecayFit {
    double S_hat = 0.0;
    double B0_hat = 0.0;
    double stderr_S = 0.0;
    double stderr_B0 = 0.0;
    double chi2_per_dof = 0.0;
    bool converged = false;
    int n_iterations = 0;
    /// True when some SEM was missing or zero and unit weights were used.
    bool unit_weights = false;
};

struct RBFit {
    double A_hat = 0.0;
    double B_hat = 0.0;
    double p_hat = 0.0;
    double stderr_A = 0.0;
    double stderr_B = 0.0;
    double stderr_p = 0.0;
    /// Cov(A_hat, B_hat), needed for the uncertainty of B - A.
    double cov_AB = 0.0;
    double chi2_per_dof = 0.0;
    bool converged = false;
    int n_iterations = 0;
    bool unit_weights = false;
};

/// Weighted fit of y(m) = B0 S^(m-1), parameterized internally as
/// (log B0, log S). Weights are 1/sem^2, or unit weights when any SEM is
/// absent or zero. Standard errors are scaled by chi2/dof.
DecayFit fit_loss_decay(const DecayDataset &ds, const LeastSquaresOptions &options = {});

/// Weighted fit of y(m) = A p^m + B.
RBFit fit_rb_decay(const DecayDataset &ds, const LeastSquaresOptions &options = {});

/// B0 S^(m-1).
double loss_model(const DecayFit &fit, int m);

// ---------------------------------------------------------------------------
// Detector efficiency.

struct DetectorEfficiency {
    double eta = 0.0;
    /// B0_hat / S_hat, the estimate of D(Q).
    double D_hat = 0.0;
    /// (d - 1)(1 - S_hat): relative accuracy of D_hat.
    double relative_uncertainty = 0.0;
};

DetectorEfficiency detector_efficiency(double B0_hat, double S_hat, const MeasurementOperator &ideal);

// ---------------------------------------------------------------------------
// Diagnostics.

struct FlagThresholds {
    double z = 3.0;
    double chi2_per_dof = 4.0;
    int tail_points = 5;
};

struct PlateauResult {
    double chi2_per_dof = 0.0;
    double tail_excess_z = 0.0;
    bool flagged = false;
};

/// Lack of fit of the single exponential: the chi^2 per degree of freedom
/// and the z-score of the mean tail excess over the fitted model.
PlateauResult plateau_test(const DecayDataset &ds, const DecayFit &fit, const FlagThresholds &thresholds = {});

enum class MarkovFlag { BMinusANegative, M1Mismatch, Plateau };
const char *to_string(MarkovFlag flag);

struct MeanWithError {
    double mean = 0.0;
    double sem = 0.0;
};

/// True channel, state and measurement, available in simulation.
struct SimulationTruth {
    QuantumChannel channel;
    DensityMatrix rho;
    MeasurementOperator measurement;
};

struct MarkovReport {
    double b_minus_a = 0.0;
    double b_minus_a_sigma = 0.0;
    double m1_intercept = 0.0;
    double m1_sigma = 0.0;
    double rb_b = 0.0;
    double rb_b_sigma = 0.0;
    /// Tr[Q E(rho_perp)] for qubits when the truth is known.
    std::optional<double> exact_b_minus_a;
    std::vector<MarkovFlag> flags;

    bool has(MarkovFlag f) const;
};

/// B - A must be a probability for Markovian noise, and the RB constant B
/// must match the m = 1 loss-protocol value. Throws FitError when the RB fit
/// did not converge.
MarkovReport markovianity_tests(const RBFit &rb, const MeanWithError &loss_m1,
                                const std::optional<SimulationTruth> &truth = std::nullopt,
                                const std::optional<PlateauResult> &plateau = std::nullopt,
                                const FlagThresholds &thresholds = {});

/// Signed z-score with a zero-sigma convention: 0 when |x| <= 1e-12,
/// otherwise +-infinity.
double z_score(double x, double sigma);

}  // namespace lossrb

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

#include <gtest/gtest.h>

#include <cmath>

#include "lossrb/noise_models.hpp"
#include "lossrb/protocol.hpp"
#include "test_support.hpp"

namespace lossrb {
namespace {

ProtocolConfig fig1_like(std::vector<int> grid, std::optional<std::uint64_t> shots = std::nullopt) {
    return ProtocolConfig{
        .gateset = pauli_gateset(),
        .noise = basis_loss_channel({0.99, 1, 2}),
        .rho0 = DensityMatrix::basis_state(2, 0),
        .measurement = detector_model({{0.87, 0.95}, std::uint64_t{7}}),
        .m_grid = std::move(grid),
        .n_sequences = 30,
        .shots = shots,
        .master_seed = 1234,
    };
}

TEST(Protocol, BruteForceMatchesTwirlAndClosedForm) {
    RngStream rng = make_stream(77);
    const GateSet paulis = pauli_gateset();
    for (int trial = 0; trial < 5; ++trial) {
        const QuantumChannel e = random_lossy_channel(2, 0.2, 100 + trial);
        const DensityMatrix rho = random_mixed_state(2, rng);
        const MeasurementOperator q(random_mixed_state(2, rng).matrix());
        ProtocolConfig cfg{.gateset = paulis, .noise = e, .rho0 = rho, .measurement = q, .m_grid = {1}};
        for (int m = 1; m <= 4; ++m) {
            const double brute = testing::brute_force_average(paulis, e.kraus(), rho.matrix(), q.matrix(), m);
            EXPECT_NEAR(exact_sequence_average(cfg, m), brute, 1e-12);
            EXPECT_NEAR(testing::closed_form_decay(e.kraus(), rho.matrix(), q.matrix(), m), brute, 1e-12);
        }
    }
}

TEST(Protocol, ExecuteSequenceMatchesManualEvolution) {
    const ProtocolConfig cfg = fig1_like({3});
    const std::vector<GateIndex> seq{1, 3, 2};
    RngStream unused = make_stream(0);
    const SequenceOutcome out = execute_sequence(cfg, seq, unused);
    Matrix rho = cfg.rho0.matrix();
    for (GateIndex k : seq) {
        rho = testing::kraus_apply(cfg.noise.kraus(), rho);
        rho = cfg.gateset.gate(k) * rho * cfg.gateset.gate(k).adjoint();
    }
    EXPECT_NEAR(out.value, testing::real_trace(cfg.measurement.matrix() * rho), 1e-14);
    EXPECT_FALSE(out.shots_used.has_value());
}

TEST(Protocol, ParallelAndSerialAreBitIdentical) {
    for (auto shots : {std::optional<std::uint64_t>{}, std::optional<std::uint64_t>{500}}) {
        ProtocolConfig cfg = fig1_like(arithmetic_grid(5, 100, 5), shots);
        cfg.keep_raw = true;
        const DecayDataset a = run_protocol(cfg);
        const DecayDataset b = run_protocol_serial(cfg);
        ASSERT_EQ(a.points.size(), b.points.size());
        for (std::size_t i = 0; i < a.points.size(); ++i) {
            EXPECT_EQ(a.points[i].mean, b.points[i].mean);
            EXPECT_EQ(a.points[i].sem, b.points[i].sem);
        }
        ASSERT_EQ(a.raw.size(), b.raw.size());
        for (std::size_t i = 0; i < a.raw.size(); ++i) {
            EXPECT_EQ(a.raw[i].sequence, b.raw[i].sequence);
            EXPECT_EQ(a.raw[i].value, b.raw[i].value);
        }
    }
}

TEST(Protocol, SameSeedSameDataDifferentSeedDifferentData) {
    ProtocolConfig cfg = fig1_like({5, 10, 20});
    const DecayDataset a = run_protocol(cfg);
    const DecayDataset b = run_protocol(cfg);
    cfg.master_seed += 1;
    const DecayDataset c = run_protocol(cfg);
    EXPECT_EQ(a.points[2].mean, b.points[2].mean);
    EXPECT_NE(a.points[2].mean, c.points[2].mean);
    // The fingerprint identifies the physics, not the seed.
    EXPECT_EQ(a.metadata.fingerprint, c.metadata.fingerprint);
    cfg.n_sequences += 1;
    EXPECT_NE(run_protocol(cfg).metadata.fingerprint, a.metadata.fingerprint);
}

TEST(Protocol, MetadataAndRows) {
    const DecayDataset ds = run_protocol(fig1_like(arithmetic_grid(5, 100, 5)));
    ASSERT_EQ(ds.points.size(), 20u);
    EXPECT_EQ(ds.points.front().m, 5);
    EXPECT_EQ(ds.points.back().m, 100);
    EXPECT_EQ(ds.points.front().n_sequences, 30);
    EXPECT_TRUE(ds.points.front().sem.has_value());
    EXPECT_FALSE(ds.points.front().shots.has_value());
    EXPECT_EQ(ds.metadata.variant, "loss");
    EXPECT_EQ(ds.metadata.dim, 2);
    EXPECT_EQ(ds.metadata.gate_labels.size(), 4u);
    EXPECT_EQ(ds.metadata.fingerprint.size(), 16u);
}

TEST(Protocol, ShotModeConvergesToExactAverage) {
    ProtocolConfig cfg = fig1_like({10}, 2000);
    cfg.n_sequences = 400;
    const DecayDataset ds = run_protocol(cfg);
    const double truth = exact_sequence_average(cfg, 10);
    EXPECT_NEAR(ds.points[0].mean, truth, 4.0 * *ds.points[0].sem);
    EXPECT_EQ(ds.points[0].shots, std::optional<std::uint64_t>(2000));
}

TEST(Protocol, NoiselessRBReturnsToInitialState) {
    ProtocolConfig cfg{.gateset = clifford_gateset(),
                       .noise = QuantumChannel::identity(2),
                       .rho0 = DensityMatrix::basis_state(2, 0),
                       .measurement = MeasurementOperator(basis_projector(2, 0)),
                       .m_grid = {1, 7, 30},
                       .variant = Variant::RB};
    const DecayDataset ds = run_protocol(cfg);
    for (const DecayPoint &p : ds.points) {
        EXPECT_NEAR(p.mean, 1.0, 1e-12);
    }
}

TEST(Protocol, DepolarizingRBFollowsAnalyticCurve) {
    const double q = 0.02;
    ProtocolConfig cfg{.gateset = clifford_gateset(),
                       .noise = depolarizing_channel(2, q),
                       .rho0 = DensityMatrix::basis_state(2, 0),
                       .measurement = MeasurementOperator(basis_projector(2, 0)),
                       .m_grid = {1, 10, 50},
                       .n_sequences = 5,
                       .variant = Variant::RB};
    const DecayDataset ds = run_protocol(cfg);
    for (const DecayPoint &p : ds.points) {
        // m gates plus the inverse, each preceded by the noise.
        EXPECT_NEAR(p.mean, 0.5 * std::pow(1 - q, p.m + 1) + 0.5, 1e-12);
    }
}

TEST(Protocol, ValidationRejectsInconsistentConfigs) {
    ProtocolConfig cfg = fig1_like({5, 5});
    EXPECT_THROW(run_protocol(cfg), std::invalid_argument);
    cfg.m_grid = {0, 5};
    EXPECT_THROW(run_protocol(cfg), std::invalid_argument);
    cfg.m_grid = {5};
    cfg.n_sequences = 0;
    EXPECT_THROW(run_protocol(cfg), std::invalid_argument);
    cfg.n_sequences = 3;
    cfg.shots = 0;
    EXPECT_THROW(run_protocol(cfg), std::invalid_argument);
    ProtocolConfig bad_dim = fig1_like({5});
    bad_dim.noise = QuantumChannel::identity(3);
    EXPECT_THROW(run_protocol(bad_dim), std::invalid_argument);
}

TEST(Summarize, MeanAndSampleSem) {
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    const DecayPoint p = summarize(3, v, std::nullopt);
    EXPECT_DOUBLE_EQ(p.mean, 2.5);
    ASSERT_TRUE(p.sem.has_value());
    EXPECT_NEAR(*p.sem, std::sqrt(5.0 / 3.0 / 4.0), 1e-15);
    const std::vector<double> one{0.7};
    EXPECT_FALSE(summarize(3, one, std::nullopt).sem.has_value());
}

TEST(Grid, ArithmeticGrid) {
    EXPECT_EQ(arithmetic_grid(10, 300, 10).size(), 30u);
    EXPECT_EQ(arithmetic_grid(5, 100, 5).back(), 100);
    EXPECT_THROW(arithmetic_grid(0, 10, 1), std::invalid_argument);
    EXPECT_THROW(arithmetic_grid(5, 1, 1), std::invalid_argument);
}

TEST(Sampling, SequencesAreUniform) {
    const GateSet g = pauli_gateset();
    RngStream rng = make_stream(3);
    std::vector<int> counts(4, 0);
    const std::vector<GateIndex> seq = sample_sequence(g, 40000, rng);
    for (GateIndex k : seq) {
        ++counts[k];
    }
    for (int c : counts) {
        EXPECT_NEAR(c, 10000, 5 * std::sqrt(10000 * 0.75));
    }
}

}  // namespace
}  // namespace lossrb

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

#include <algorithm>

#include "lossrb/analysis.hpp"
#include "lossrb/config.hpp"
#include "lossrb/dataset_io.hpp"

namespace lossrb {
namespace {

const char *kValid = R"({
  // comment lines are allowed
  "gateset": "pauli",
  "noise": {"type": "basis_loss", "alpha": 0.99, "level": 1, "dim": 2},
  "state": "zero",
  "detector": {"eigenvalues": [0.87, 0.95], "basis_seed": 7},
  "protocol": {"m_grid": {"start": 5, "stop": 100, "step": 5}, "n_sequences": 30, "shots": "exact"},
  "seed": 42
})";

bool has_error(const ConfigError &e, const std::string &path) {
    return std::any_of(e.errors().begin(), e.errors().end(), [&](const FieldError &f) { return f.path == path; });
}

ConfigError error_of(const std::string &text) {
    try {
        parse_config(text);
    } catch (const ConfigError &e) {
        return e;
    }
    ADD_FAILURE() << "expected ConfigError";
    return ConfigError({});
}

std::string with(const std::string &from, const std::string &to) {
    std::string s = kValid;
    const auto pos = s.find(from);
    EXPECT_NE(pos, std::string::npos) << from;
    return s.replace(pos, from.size(), to);
}

TEST(Config, ParsesValidDocument) {
    const RunConfig cfg = parse_config(kValid);
    EXPECT_EQ(cfg.gateset, "pauli");
    EXPECT_EQ(cfg.seed, 42u);
    ASSERT_TRUE(std::holds_alternative<LossModelSpec>(cfg.noise));
    EXPECT_DOUBLE_EQ(std::get<LossModelSpec>(cfg.noise).alpha, 0.99);
    EXPECT_EQ(cfg.protocol.m_grid.size(), 20u);
    EXPECT_FALSE(cfg.protocol.shots.has_value());
    EXPECT_EQ(cfg.protocol.variant, Variant::Loss);
}

TEST(Config, BuildsConsistentProtocol) {
    const ProtocolConfig p = build_protocol(parse_config(kValid));
    EXPECT_EQ(p.master_seed, 42u);
    EXPECT_EQ(p.gateset.size(), 4u);
    EXPECT_NEAR(p.measurement.mean_response(), 0.91, 1e-15);
    EXPECT_NEAR(average_survival(p.noise), 0.99005, 1e-15);
}

TEST(Config, ExplicitGridShotsAndVariant) {
    const RunConfig cfg = parse_config(
        with(R"("m_grid": {"start": 5, "stop": 100, "step": 5}, "n_sequences": 30, "shots": "exact")",
             R"("m_grid": [1, 2, 4], "n_sequences": 3, "shots": 100, "variant": "rb")"));
    EXPECT_EQ(cfg.protocol.m_grid, (std::vector<int>{1, 2, 4}));
    EXPECT_EQ(cfg.protocol.shots, std::optional<std::uint64_t>(100));
    EXPECT_EQ(cfg.protocol.variant, Variant::RB);
}

TEST(Config, CollectsEveryFieldError) {
    EXPECT_TRUE(has_error(error_of(with(R"("alpha": 0.99)", R"("alpha": 1.5)")), "noise.alpha"));
    std::string two = with(R"("alpha": 0.99)", R"("alpha": 1.5)");
    two.replace(two.find("0.87"), 4, "1.87");
    const ConfigError both = error_of(two);
    EXPECT_TRUE(has_error(both, "noise.alpha"));
    EXPECT_TRUE(has_error(both, "detector.eigenvalues[0]"));
    EXPECT_GE(both.errors().size(), 2u);
}

TEST(Config, EmptyDocumentListsEverySection) {
    const ConfigError e = error_of("{}");
    for (const char *section : {"gateset", "noise", "state", "detector", "protocol", "seed"}) {
        EXPECT_TRUE(has_error(e, section)) << section;
    }
}

TEST(Config, RejectsUnknownKeys) {
    EXPECT_TRUE(has_error(error_of(with(R"("seed": 42)", R"("seed": 42, "sed": 1)")), "sed"));
    EXPECT_TRUE(has_error(error_of(with(R"("level": 1,)", R"("level": 1, "lvl": 1,)")), "noise.lvl"));
}

TEST(Config, MissingSectionsAndBadValues) {
    EXPECT_TRUE(has_error(error_of(with(R"(  "seed": 42)", R"(  "output_dir": "x")")), "seed"));
    EXPECT_TRUE(has_error(error_of(with(R"("gateset": "pauli")", R"("gateset": "haar")")), "gateset"));
    EXPECT_TRUE(has_error(error_of(with(R"("state": "zero")", R"("state": "plus")")), "state"));
    EXPECT_TRUE(has_error(error_of(with(R"("shots": "exact")", R"("shots": 0)")), "protocol.shots"));
    EXPECT_TRUE(has_error(error_of(with(R"("dim": 2})", R"("dim": 3})")), "noise.dim"));
    EXPECT_THROW(parse_config("{ not json"), ConfigError);
    EXPECT_THROW(parse_config("[1, 2]"), ConfigError);
}

TEST(Config, StateMatrixAndDetectorBasis) {
    const RunConfig cfg =
        parse_config(with(R"("state": "zero")", R"("state": {"matrix": [[0.5, 0.5], [0.5, 0.5]]})"));
    ASSERT_TRUE(std::holds_alternative<Matrix>(cfg.state));
    const std::string basis = with(R"("basis_seed": 7)", R"("basis": [[1, 0], [0, [1, 0]]])");
    const ProtocolConfig p = build_protocol(parse_config(basis));
    EXPECT_NEAR(p.measurement.matrix()(0, 0).real(), 0.87, 1e-15);
    EXPECT_TRUE(has_error(error_of(with(R"("state": "zero")", R"("state": {"matrix": [[1, 0], [0, 1]]})")),
                          "state.matrix"));
}

TEST(Config, LeakageEmbedsIntoQutrit) {
    const std::string text = with(R"({"type": "basis_loss", "alpha": 0.99, "level": 1, "dim": 2})",
                                  R"({"type": "leakage", "epsilon": 0.1, "hamiltonian_seed": 41})");
    const ProtocolConfig p = build_protocol(parse_config(text));
    EXPECT_EQ(p.gateset.dim(), 3);
    EXPECT_EQ(p.rho0.dim(), 3);
    EXPECT_EQ(p.measurement.dim(), 3);
    EXPECT_EQ(p.measurement.matrix()(2, 2), Complex(0.0));
    EXPECT_LT(max_abs(survival_operator(p.noise) - Matrix::Identity(3, 3)), 1e-12);
}

TEST(Config, NoiseOnlyDocumentForChannelChecks) {
    const NoiseSpec n = parse_noise_config(R"({"noise": {"type": "basis_loss", "alpha": 0.5, "level": 0, "dim": 3}})");
    EXPECT_NEAR(prop1_check(build_channel(n)).slack, 0.0, 1e-12);
    EXPECT_THROW(parse_noise_config(R"({"seed": 1})"), ConfigError);
    const NoiseSpec k = parse_noise_config(
        R"({"noise": {"type": "kraus", "operators": [[[1, 0], [0, 0.9]]]}})");
    EXPECT_NEAR(worst_case_loss(build_channel(k)), 0.19, 1e-12);
    EXPECT_THROW(parse_noise_config(R"({"noise": {"type": "kraus", "operators": [[[1.1, 0], [0, 1]]]}})"),
                 ConfigError);
}

TEST(Config, BundledConfigsParse) {
    for (const char *name : {"fig1", "fig2", "saturation", "rb_depolarizing"}) {
        const std::string path = std::string(LOSSRB_CONFIG_DIR) + "/" + name + ".config";
        EXPECT_NO_THROW(build_protocol(parse_config(read_text_file(path)))) << name;
    }
}

}  // namespace
}  // namespace lossrb

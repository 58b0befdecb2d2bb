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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit status
// when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "lossrb/analysis.hpp"
#include "lossrb/config.hpp"
#include "lossrb/dataset_io.hpp"
#include "lossrb/noise_models.hpp"
#include "lossrb/protocol.hpp"
#include "test_support.hpp"

using namespace lossrb;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char *format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

std::string config_path(const char *name) {
    return std::string(LOSSRB_CONFIG_DIR) + "/" + name + ".config";
}

ProtocolConfig load(const char *name) {
    return build_protocol(parse_config(read_text_file(config_path(name))));
}

Outcome loss_decay_reproduction() {
    const auto start = std::chrono::steady_clock::now();
    const ProtocolConfig cfg = load("fig1");
    const DecayDataset ds = run_protocol(cfg);
    const DecayFit fit = fit_loss_decay(ds);
    const DetectorEfficiency det = detector_efficiency(fit.B0_hat, fit.S_hat, MeasurementOperator::identity(2));
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double s_true = (1.0 + 0.99 * 0.99) / 2.0;
    const bool in_window = fit.S_hat >= 0.988 && fit.S_hat <= 0.992;
    const bool within_err = std::abs(fit.S_hat - s_true) <= 3.0 * fit.stderr_S;
    const bool detector_ok = std::abs(det.D_hat - 0.910) <= 0.02;
    const bool fast = seconds < 10.0;
    return {in_window && within_err && detector_ok && fast && fit.converged,
            fmt("S_hat=%.6f+-%.6f (|dS|/stderr=%.2f) D_hat=%.4f time=%.3fs", fit.S_hat, fit.stderr_S,
                std::abs(fit.S_hat - s_true) / fit.stderr_S, det.D_hat, seconds)};
}

Outcome brute_force() {
    const auto start = std::chrono::steady_clock::now();
    const GateSet paulis = pauli_gateset();
    RngStream rng = make_stream(0xb7u);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const QuantumChannel e = random_lossy_channel(2, 0.5, 1000 + trial);
        const DensityMatrix rho = random_mixed_state(2, rng);
        const MeasurementOperator q(random_mixed_state(2, rng).matrix());
        ProtocolConfig cfg{.gateset = paulis, .noise = e, .rho0 = rho, .measurement = q, .m_grid = {1}};
        for (int m = 1; m <= 6; ++m) {
            const double brute = testing::brute_force_average(paulis, e.kraus(), rho.matrix(), q.matrix(), m);
            worst = std::max(worst, std::abs(exact_sequence_average(cfg, m) - brute));
            worst = std::max(worst, std::abs(testing::closed_form_decay(e.kraus(), rho.matrix(), q.matrix(), m) - brute));
        }
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {worst <= 1e-12 && seconds < 30.0, fmt("max deviation=%.2e over 20 triples, m<=6, time=%.2fs", worst, seconds)};
}

Outcome worst_case_bound() {
    std::mt19937_64 scales(0x5eedu);
    std::uniform_real_distribution<double> pick(0.01, 0.99);
    double min_margin = 1e300;
    int violations = 0;
    for (int d = 2; d <= 4; ++d) {
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            const QuantumChannel e = random_lossy_channel(d, pick(scales), seed * 7919 + d);
            const double worst = worst_case_loss(e);
            const double avg = 1.0 - average_survival(e);
            const double margin = d * avg + 1e-10 - worst;
            min_margin = std::min(min_margin, margin);
            violations += margin < 0.0 ? 1 : 0;
        }
    }
    double max_slack = 0.0;
    for (int d = 2; d <= 4; ++d) {
        for (int i = 0; i < 10; ++i) {
            const double alpha = 0.1 * i;
            max_slack = std::max(max_slack, std::abs(prop1_check(basis_loss_channel({alpha, 0, d})).slack));
        }
    }
    return {violations == 0 && max_slack <= 1e-12,
            fmt("3000 random channels: %d violations (min margin %.3e); saturating family max |slack|=%.2e",
                violations, min_margin, max_slack)};
}

Outcome calibration() {
    const std::vector<int> grid = arithmetic_grid(5, 100, 5);
    std::string detail;
    bool pass = true;
    int stream = 0;
    for (double s : {0.90, 0.99, 0.999}) {
        std::mt19937_64 rng(make_stream(2026, {static_cast<std::uint64_t>(StreamTag::Synthetic),
                                               static_cast<std::uint64_t>(stream++)})());
        std::normal_distribution<double> noise(0.0, 0.002);
        int covered = 0;
        for (int rep = 0; rep < 100; ++rep) {
            DecayDataset ds = testing::synthetic_dataset(grid, 0.91, s, 0.002);
            for (DecayPoint &p : ds.points) {
                p.mean += noise(rng);
            }
            const DecayFit fit = fit_loss_decay(ds);
            covered += std::abs(fit.S_hat - s) <= 3.0 * fit.stderr_S ? 1 : 0;
        }
        pass = pass && covered >= 95;
        detail += fmt("S=%.3f: %d/100  ", s, covered);
    }
    return {pass, detail};
}

Outcome rb_cross_check() {
    ProtocolConfig rb_cfg = load("rb_depolarizing");
    const RBFit rb = fit_rb_decay(run_protocol(rb_cfg));
    ProtocolConfig loss_cfg = rb_cfg;
    loss_cfg.variant = Variant::Loss;
    loss_cfg.m_grid = {1};
    const DecayPoint m1 = run_protocol(loss_cfg).points.front();
    const MarkovReport r = markovianity_tests(rb, {m1.mean, m1.sem.value_or(0.0)},
                                              SimulationTruth{rb_cfg.noise, rb_cfg.rho0, rb_cfg.measurement});
    const bool p_ok = std::abs(rb.p_hat - 0.98) <= 1e-4;
    const bool ba_ok = r.b_minus_a >= -3.0 * r.b_minus_a_sigma;
    const bool m1_ok = !r.has(MarkovFlag::M1Mismatch);
    return {p_ok && ba_ok && m1_ok && rb.converged,
            fmt("p_hat=%.8f B-A=%.5f (exact %.5f) B_hat=%.5f vs m=1 loss value %.4f+-%.4f", rb.p_hat, r.b_minus_a,
                r.exact_b_minus_a.value_or(NAN), rb.B_hat, m1.mean, m1.sem.value_or(0.0))};
}

Outcome leakage_discrimination() {
    const DecayDataset leak = run_protocol(load("fig2"));
    const PlateauResult pl = plateau_test(leak, fit_loss_decay(leak));
    const DecayDataset loss = run_protocol(load("fig1"));
    const PlateauResult pf = plateau_test(loss, fit_loss_decay(loss));
    return {pl.flagged && !pf.flagged,
            fmt("leakage: flagged=%d chi2/dof=%.2f tail_z=%.2f; loss: flagged=%d chi2/dof=%.2f tail_z=%.2f",
                pl.flagged, pl.chi2_per_dof, pl.tail_excess_z, pf.flagged, pf.chi2_per_dof, pf.tail_excess_z)};
}

Outcome determinism() {
    bool same = true;
    for (const char *name : {"fig1", "fig2"}) {
        auto artifacts = [&] {
            const DecayDataset ds = run_protocol(load(name));
            const DecayFit fit = fit_loss_decay(ds);
            return to_csv(ds) + metadata_json(ds).dump(2) + fit_json(fit, plateau_test(ds, fit), std::nullopt).dump(2);
        };
        const std::string a = artifacts();
        const std::string b = artifacts();
        ProtocolConfig cfg = load(name);
        const std::string serial = to_csv(run_protocol_serial(cfg));
        same = same && a == b && serial == to_csv(run_protocol(cfg));
    }
    return {same, same ? "CSV, metadata and fit JSON byte-identical across runs and serial/parallel"
                       : "artifacts differ between runs"};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria = {
        {"1 loss-decay reproduction", loss_decay_reproduction},
        {"2 brute-force sequence enumeration", brute_force},
        {"3 worst-case loss bound", worst_case_bound},
        {"4 fit calibration", calibration},
        {"5 RB cross-check", rb_cross_check},
        {"6 leakage discrimination", leakage_discrimination},
        {"7 determinism", determinism},
    };
    int failures = 0;
    for (const auto &[name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s  [%s]  %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}

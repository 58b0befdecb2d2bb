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

#include "lossrb/protocol.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace lossrb {

const char *to_string(Variant v) {
    return v == Variant::Loss ? "loss" : "rb";
}

void validate_config(const ProtocolConfig &cfg) {
    const int d = cfg.gateset.dim();
    if (cfg.noise.dim() != d || cfg.rho0.dim() != d || cfg.measurement.dim() != d) {
        throw DimensionError("protocol config: gate set, noise, state and measurement dimensions disagree");
    }
    if (cfg.m_grid.empty()) {
        throw std::invalid_argument("protocol config: empty m grid");
    }
    for (std::size_t i = 0; i < cfg.m_grid.size(); ++i) {
        if (cfg.m_grid[i] < 1) {
            throw std::invalid_argument("protocol config: sequence lengths must be positive");
        }
        if (i > 0 && cfg.m_grid[i] <= cfg.m_grid[i - 1]) {
            throw std::invalid_argument("protocol config: m grid must be strictly increasing");
        }
    }
    if (cfg.n_sequences < 1) {
        throw std::invalid_argument("protocol config: n_sequences must be positive");
    }
    if (cfg.shots && *cfg.shots == 0) {
        throw std::invalid_argument("protocol config: shots must be positive");
    }
    ValidationReport report = validate_state(cfg.rho0);
    if (!report.empty()) {
        throw std::invalid_argument("protocol config: invalid initial state (" + report.front().invariant + ")");
    }
}

namespace {

struct Fnv1a {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    void bytes(const void *p, std::size_t n) {
        const auto *c = static_cast<const unsigned char *>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= c[i];
            h *= 0x100000001b3ULL;
        }
    }
    void u64(std::uint64_t v) { bytes(&v, sizeof v); }
    void real(double v) { bytes(&v, sizeof v); }
    void str(const std::string &s) {
        u64(s.size());
        bytes(s.data(), s.size());
    }
    void matrix(const Matrix &m) {
        u64(static_cast<std::uint64_t>(m.rows()));
        u64(static_cast<std::uint64_t>(m.cols()));
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            for (Eigen::Index i = 0; i < m.rows(); ++i) {
                real(m(i, j).real());
                real(m(i, j).imag());
            }
        }
    }
};

std::vector<double> outcome_values(const std::vector<SequenceOutcome> &outcomes, std::size_t begin, std::size_t n) {
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) {
        values[i] = outcomes[begin + i].value;
    }
    return values;
}

SequenceOutcome run_task(const ProtocolConfig &cfg, std::size_t m_index, std::size_t seq_index) {
    RngStream seq_rng = make_stream(cfg.master_seed, {static_cast<std::uint64_t>(StreamTag::Sequence), m_index, seq_index});
    RngStream shot_rng = make_stream(cfg.master_seed, {static_cast<std::uint64_t>(StreamTag::Shots), m_index, seq_index});
    std::vector<GateIndex> k = sample_sequence(cfg.gateset, cfg.m_grid[m_index], seq_rng);
    return execute_sequence(cfg, k, shot_rng);
}

DecayDataset assemble(const ProtocolConfig &cfg, std::vector<SequenceOutcome> outcomes) {
    DecayDataset ds;
    const auto n = static_cast<std::size_t>(cfg.n_sequences);
    for (std::size_t mi = 0; mi < cfg.m_grid.size(); ++mi) {
        std::vector<double> values = outcome_values(outcomes, mi * n, n);
        ds.points.push_back(summarize(cfg.m_grid[mi], values, cfg.shots));
    }
    ds.metadata.master_seed = cfg.master_seed;
    ds.metadata.fingerprint = config_fingerprint(cfg);
    ds.metadata.variant = to_string(cfg.variant);
    ds.metadata.gate_labels = cfg.gateset.labels();
    ds.metadata.dim = cfg.gateset.logical_dim();
    if (cfg.keep_raw) {
        ds.raw = std::move(outcomes);
    }
    return ds;
}

}  // namespace

std::string config_fingerprint(const ProtocolConfig &cfg) {
    Fnv1a h;
    h.u64(cfg.gateset.size());
    for (std::size_t k = 0; k < cfg.gateset.size(); ++k) {
        h.str(cfg.gateset.labels()[k]);
        h.matrix(cfg.gateset.gate(k));
    }
    h.u64(cfg.noise.kraus().size());
    for (const Matrix &k : cfg.noise.kraus()) {
        h.matrix(k);
    }
    h.matrix(cfg.rho0.matrix());
    h.matrix(cfg.measurement.matrix());
    h.u64(cfg.m_grid.size());
    for (int m : cfg.m_grid) {
        h.u64(static_cast<std::uint64_t>(m));
    }
    h.u64(static_cast<std::uint64_t>(cfg.n_sequences));
    h.u64(cfg.shots.value_or(0));
    h.u64(cfg.variant == Variant::Loss ? 0 : 1);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h.h));
    return buf;
}

std::vector<GateIndex> sample_sequence(const GateSet &gates, int m, RngStream &rng) {
    if (m < 1) {
        throw std::invalid_argument("sample_sequence: m must be positive");
    }
    std::uniform_int_distribution<GateIndex> pick(0, gates.size() - 1);
    std::vector<GateIndex> k(static_cast<std::size_t>(m));
    for (auto &idx : k) {
        idx = pick(rng);
    }
    return k;
}

DensityMatrix evolve_sequence(const ProtocolConfig &cfg, std::span<const GateIndex> sequence) {
    DensityMatrix rho = cfg.rho0;
    auto step = [&](GateIndex k) {
        if (k >= cfg.gateset.size()) {
            throw std::out_of_range("execute_sequence: gate index " + std::to_string(k) + " out of range");
        }
        rho = apply_unitary(cfg.gateset.gate(k), apply_channel(cfg.noise, rho));
    };
    for (GateIndex k : sequence) {
        step(k);
    }
    if (cfg.variant == Variant::RB) {
        step(inverse_gate(cfg.gateset, sequence));
    }
    return rho;
}

SequenceOutcome execute_sequence(const ProtocolConfig &cfg, std::span<const GateIndex> sequence,
                                 RngStream &shot_rng) {
    if (cfg.noise.dim() != cfg.gateset.dim() || cfg.rho0.dim() != cfg.gateset.dim() ||
        cfg.measurement.dim() != cfg.gateset.dim()) {
        throw DimensionError("execute_sequence: dimension mismatch");
    }
    SequenceOutcome out;
    out.m = static_cast<int>(sequence.size());
    out.sequence.assign(sequence.begin(), sequence.end());
    double p = expectation(cfg.measurement, evolve_sequence(cfg, sequence));
    if (cfg.shots) {
        std::uint64_t clicks = sample_clicks(p, *cfg.shots, shot_rng);
        out.value = static_cast<double>(clicks) / static_cast<double>(*cfg.shots);
        out.shots_used = cfg.shots;
    } else {
        out.value = p;
    }
    return out;
}

DecayPoint summarize(int m, std::span<const double> values, std::optional<std::uint64_t> shots) {
    DecayPoint point;
    point.m = m;
    point.n_sequences = static_cast<int>(values.size());
    point.shots = shots;
    if (values.empty()) {
        throw std::invalid_argument("summarize: no values");
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    const double n = static_cast<double>(values.size());
    point.mean = sum / n;
    if (values.size() >= 2) {
        double ss = 0.0;
        for (double v : values) {
            ss += (v - point.mean) * (v - point.mean);
        }
        point.sem = std::sqrt(ss / (n - 1.0) / n);
    }
    return point;
}

DecayDataset run_protocol(const ProtocolConfig &cfg) {
    validate_config(cfg);
    const auto n = static_cast<std::size_t>(cfg.n_sequences);
    const std::size_t n_tasks = cfg.m_grid.size() * n;
    std::vector<SequenceOutcome> outcomes(n_tasks);

    // Tasks are independent; results land in fixed (m_index, seq_index) slots.
    std::exception_ptr failure;
    const auto n_tasks_signed = static_cast<long long>(n_tasks);
#pragma omp parallel for schedule(dynamic, 4)
    for (long long t = 0; t < n_tasks_signed; ++t) {
        try {
            const auto task = static_cast<std::size_t>(t);
            outcomes[task] = run_task(cfg, task / n, task % n);
        } catch (...) {
#pragma omp critical(lossrb_protocol_failure)
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return assemble(cfg, std::move(outcomes));
}

DecayDataset run_protocol_serial(const ProtocolConfig &cfg) {
    validate_config(cfg);
    const auto n = static_cast<std::size_t>(cfg.n_sequences);
    std::vector<SequenceOutcome> outcomes;
    outcomes.reserve(cfg.m_grid.size() * n);
    for (std::size_t mi = 0; mi < cfg.m_grid.size(); ++mi) {
        for (std::size_t s = 0; s < n; ++s) {
            outcomes.push_back(run_task(cfg, mi, s));
        }
    }
    return assemble(cfg, std::move(outcomes));
}

double exact_sequence_average(const ProtocolConfig &cfg, int m) {
    if (m < 1) {
        throw std::invalid_argument("exact_sequence_average: m must be positive");
    }
    if (cfg.variant != Variant::Loss) {
        throw std::invalid_argument("exact_sequence_average: defined for the loss variant only");
    }
    Matrix rho = cfg.rho0.matrix();
    for (int j = 0; j < m; ++j) {
        rho = twirl(cfg.gateset, apply_channel(cfg.noise, DensityMatrix(cfg.rho0.dim(), rho)).matrix());
    }
    return (cfg.measurement.matrix() * rho).trace().real();
}

std::vector<int> arithmetic_grid(int start, int stop, int step) {
    if (start < 1 || step < 1 || stop < start) {
        throw std::invalid_argument("arithmetic_grid: need 1 <= start <= stop and step >= 1");
    }
    std::vector<int> grid;
    for (int m = start; m <= stop; m += step) {
        grid.push_back(m);
    }
    return grid;
}

}  // namespace lossrb

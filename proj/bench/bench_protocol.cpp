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

// Parallel versus serial protocol execution on the bundled configurations.

#include <benchmark/benchmark.h>

#include <string>

#include "lossrb/config.hpp"
#include "lossrb/dataset_io.hpp"
#include "lossrb/protocol.hpp"

namespace {

lossrb::ProtocolConfig load(const char *name) {
    const std::string path = std::string(LOSSRB_CONFIG_DIR) + "/" + name + ".config";
    return lossrb::build_protocol(lossrb::parse_config(lossrb::read_text_file(path)));
}

void BM_Protocol(benchmark::State &state, const char *config, bool parallel) {
    const lossrb::ProtocolConfig cfg = load(config);
    for (auto _ : state) {
        benchmark::DoNotOptimize(parallel ? lossrb::run_protocol(cfg) : lossrb::run_protocol_serial(cfg));
    }
    std::size_t sequences = cfg.m_grid.size() * static_cast<std::size_t>(cfg.n_sequences);
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * sequences));
}

void BM_ShotMode(benchmark::State &state, bool parallel) {
    lossrb::ProtocolConfig cfg = load("fig1");
    cfg.shots = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(parallel ? lossrb::run_protocol(cfg) : lossrb::run_protocol_serial(cfg));
    }
}

BENCHMARK_CAPTURE(BM_Protocol, loss_parallel, "fig1", true)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Protocol, loss_serial, "fig1", false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Protocol, leakage_parallel, "fig2", true)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Protocol, leakage_serial, "fig2", false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Protocol, rb_parallel, "rb_depolarizing", true)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Protocol, rb_serial, "rb_depolarizing", false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_ShotMode, parallel, true)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_ShotMode, serial, false)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

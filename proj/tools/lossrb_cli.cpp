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

// lossrb: simulate loss-protocol datasets, fit decay curves and check the
// worst-case loss bound of a channel.
//
// Exit status: 0 when the pipeline ran (even if a fit raised flags),
// 1 for usage, config or data errors, 2 for I/O errors.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "lossrb/analysis.hpp"
#include "lossrb/config.hpp"
#include "lossrb/dataset_io.hpp"
#include "lossrb/protocol.hpp"

namespace fs = std::filesystem;
using namespace lossrb;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;

std::string resolve_path(const std::string &positional, const std::string &option, const char *what) {
    if (!positional.empty() && !option.empty() && positional != option) {
        throw std::invalid_argument(std::string("conflicting ") + what + " paths");
    }
    std::string path = option.empty() ? positional : option;
    if (path.empty()) {
        throw std::invalid_argument(std::string("missing ") + what + " path");
    }
    return path;
}

int cmd_simulate(const std::string &config_path, std::optional<std::uint64_t> seed, const std::string &out_dir) {
    RunConfig run = parse_config(read_text_file(config_path));
    if (seed) {
        run.seed = *seed;
    }
    ProtocolConfig cfg = build_protocol(run);
    DecayDataset ds = run_protocol(cfg);

    fs::path dir = !out_dir.empty() ? fs::path(out_dir) : (!run.output_dir.empty() ? fs::path(run.output_dir) : ".");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    }
    write_text_file(dir / "decay.csv", to_csv(ds));
    write_text_file(dir / "metadata.json", metadata_json(ds).dump(2) + "\n");
    std::cout << "wrote " << ds.points.size() << " rows to " << (dir / "decay.csv").string() << " (seed "
              << cfg.master_seed << ", fingerprint " << ds.metadata.fingerprint << ")\n";
    return kExitOk;
}

int cmd_fit(const std::string &csv_path, const std::string &model, const std::string &out_dir) {
    DecayDataset ds = parse_csv(read_text_file(csv_path));
    const fs::path sidecar = fs::path(csv_path).parent_path() / "metadata.json";
    if (fs::exists(sidecar)) {
        try {
            apply_metadata(ds, nlohmann::json::parse(read_text_file(sidecar)));
        } catch (const nlohmann::json::exception &e) {
            std::cerr << "warning: ignoring unreadable " << sidecar.string() << ": " << e.what() << "\n";
        }
    }
    const int dim = ds.metadata.dim > 0 ? ds.metadata.dim : 2;

    nlohmann::json doc;
    std::string summary;
    if (model == "rb") {
        RBFit fit = fit_rb_decay(ds);
        doc = rb_fit_json(fit);
        for (const DecayPoint &p : ds.points) {
            const double model_value = fit.A_hat * std::pow(fit.p_hat, p.m) + fit.B_hat;
            doc["curve"].push_back({{"m", p.m}, {"data", p.mean}, {"model", model_value}});
        }
        char line[256];
        std::snprintf(line, sizeof line, "p_hat = %.6f +- %.6f  A_hat = %.5f  B_hat = %.5f  chi2/dof = %.3f%s",
                      fit.p_hat, fit.stderr_p, fit.A_hat, fit.B_hat, fit.chi2_per_dof,
                      fit.converged ? "" : "  (not converged)");
        summary = line;
    } else {
        DecayFit fit = fit_loss_decay(ds);
        std::optional<PlateauResult> plateau;
        if (ds.points.size() >= 8) {
            plateau = plateau_test(ds, fit);
        }
        std::optional<DetectorEfficiency> det;
        if (fit.S_hat > 0.0) {
            det = detector_efficiency(fit.B0_hat, fit.S_hat, MeasurementOperator::identity(dim));
        }
        doc = fit_json(fit, plateau, det);
        for (const DecayPoint &p : ds.points) {
            doc["curve"].push_back({{"m", p.m}, {"data", p.mean}, {"model", loss_model(fit, p.m)}});
        }
        char line[256];
        std::snprintf(line, sizeof line, "S_hat = %.6f +- %.6f  B0_hat = %.5f +- %.5f  chi2/dof = %.3f%s%s",
                      fit.S_hat, fit.stderr_S, fit.B0_hat, fit.stderr_B0, fit.chi2_per_dof,
                      plateau && plateau->flagged ? "  [PLATEAU]" : "", fit.converged ? "" : "  (not converged)");
        summary = line;
    }
    doc["source"] = {{"csv", fs::path(csv_path).filename().string()},
                     {"config_fingerprint", ds.metadata.fingerprint},
                     {"master_seed", ds.metadata.master_seed}};

    fs::path dir = !out_dir.empty() ? fs::path(out_dir) : fs::path(csv_path).parent_path();
    if (dir.empty()) {
        dir = ".";
    }
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    }
    write_text_file(dir / "fit.json", doc.dump(2) + "\n");
    std::cout << summary << "\n";
    return kExitOk;
}

int cmd_check_channel(const std::string &config_path) {
    NoiseSpec noise = parse_noise_config(read_text_file(config_path));
    BoundReport report = prop1_check(build_channel(noise));
    std::cout << bound_report_json(report).dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Loss-rate characterization: simulate random-sequence data, fit decays, check loss bounds"};
    app.set_version_flag("--version", tool_version());
    app.require_subcommand(1);

    std::string sim_config_pos, sim_config_opt, sim_out;
    std::optional<std::uint64_t> sim_seed;
    auto *simulate = app.add_subcommand("simulate", "Run the protocol and write decay.csv and metadata.json");
    simulate->add_option("config_path", sim_config_pos, "Run config file");
    simulate->add_option("--config", sim_config_opt, "Run config file");
    simulate->add_option("--seed", sim_seed, "Override the master seed");
    simulate->add_option("--out", sim_out, "Output directory (default: config output_dir, else .)");

    std::string fit_csv_pos, fit_csv_opt, fit_out, fit_model = "loss";
    auto *fit = app.add_subcommand("fit", "Fit a decay.csv and write fit.json");
    fit->add_option("csv_path", fit_csv_pos, "Dataset CSV");
    fit->add_option("--data", fit_csv_opt, "Dataset CSV");
    fit->add_option("--model", fit_model, "Decay model")->check(CLI::IsMember({"loss", "rb"}));
    fit->add_option("--out", fit_out, "Output directory (default: next to the CSV)");

    std::string chk_config_pos, chk_config_opt;
    auto *check = app.add_subcommand("check-channel", "Print the worst-case loss bound report of the noise channel");
    check->add_option("config_path", chk_config_pos, "Run config file");
    check->add_option("--config", chk_config_opt, "Run config file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*simulate) {
            return cmd_simulate(resolve_path(sim_config_pos, sim_config_opt, "config"), sim_seed, sim_out);
        }
        if (*fit) {
            return cmd_fit(resolve_path(fit_csv_pos, fit_csv_opt, "dataset"), fit_model, fit_out);
        }
        if (*check) {
            return cmd_check_channel(resolve_path(chk_config_pos, chk_config_opt, "config"));
        }
    } catch (const IoError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

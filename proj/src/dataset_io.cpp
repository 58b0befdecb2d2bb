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

#include "lossrb/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#ifndef LOSSRB_VERSION
#define LOSSRB_VERSION "0.0.0"
#endif

namespace lossrb {

const char *tool_version() {
    return LOSSRB_VERSION;
}

std::string format_real(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) {
        return "nan";
    }
    return std::string(buf, end);
}

// ---------------------------------------------------------------------------
// CSV.

std::string to_csv(const DecayDataset &ds) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const DecayPoint &p : ds.points) {
        out += std::to_string(p.m);
        out += ',';
        out += format_real(p.mean);
        out += ',';
        if (p.sem) {
            out += format_real(*p.sem);
        }
        out += ',';
        out += std::to_string(p.n_sequences);
        out += ',';
        out += p.shots ? std::to_string(*p.shots) : std::string("exact");
        out += '\n';
    }
    return out;
}

namespace {

std::vector<std::string> split_fields(const std::string &line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

template <typename T>
T parse_number(const std::string &s, int line_no, const char *column) {
    T value{};
    const char *first = s.data();
    const char *last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw DatasetFormatError("line " + std::to_string(line_no) + ": bad " + column + " value '" + s + "'");
    }
    return value;
}

}  // namespace

DecayDataset parse_csv(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    if (!std::getline(in, line)) {
        throw DatasetFormatError("empty dataset");
    }
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != kCsvHeader) {
        throw DatasetFormatError("unexpected header '" + line + "', expected '" + kCsvHeader + "'");
    }
    DecayDataset ds;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> f = split_fields(line);
        if (f.size() != 5) {
            throw DatasetFormatError("line " + std::to_string(line_no) + ": expected 5 fields, got " +
                                     std::to_string(f.size()));
        }
        DecayPoint p;
        p.m = parse_number<int>(f[0], line_no, "m");
        p.mean = parse_number<double>(f[1], line_no, "mean");
        if (!f[2].empty()) {
            p.sem = parse_number<double>(f[2], line_no, "sem");
            if (*p.sem < 0.0) {
                throw DatasetFormatError("line " + std::to_string(line_no) + ": negative sem");
            }
        }
        p.n_sequences = parse_number<int>(f[3], line_no, "n_sequences");
        if (f[4] != "exact") {
            p.shots = parse_number<std::uint64_t>(f[4], line_no, "shots");
        }
        if (p.m < 1 || p.n_sequences < 1) {
            throw DatasetFormatError("line " + std::to_string(line_no) + ": m and n_sequences must be positive");
        }
        if (!ds.points.empty() && p.m <= ds.points.back().m) {
            throw DatasetFormatError("line " + std::to_string(line_no) + ": m values must be strictly increasing");
        }
        ds.points.push_back(p);
    }
    return ds;
}

// ---------------------------------------------------------------------------
// JSON documents.

nlohmann::json metadata_json(const DecayDataset &ds) {
    nlohmann::json doc;
    doc["tool"] = "lossrb";
    doc["tool_version"] = tool_version();
    doc["master_seed"] = ds.metadata.master_seed;
    doc["config_fingerprint"] = ds.metadata.fingerprint;
    doc["variant"] = ds.metadata.variant;
    doc["dim"] = ds.metadata.dim;
    const auto &labels = ds.metadata.gate_labels;
    doc["gateset"]["labels"] = labels;
    doc["gateset"]["identity_included"] = std::find(labels.begin(), labels.end(), "I") != labels.end();
    std::vector<int> grid;
    for (const DecayPoint &p : ds.points) {
        grid.push_back(p.m);
    }
    doc["m_grid"] = grid;
    if (!ds.points.empty()) {
        doc["n_sequences"] = ds.points.front().n_sequences;
        if (ds.points.front().shots) {
            doc["shots"] = *ds.points.front().shots;
        } else {
            doc["shots"] = "exact";
        }
    }
    return doc;
}

void apply_metadata(DecayDataset &ds, const nlohmann::json &doc) {
    if (doc.contains("master_seed") && doc["master_seed"].is_number_unsigned()) {
        ds.metadata.master_seed = doc["master_seed"].get<std::uint64_t>();
    }
    if (doc.contains("config_fingerprint") && doc["config_fingerprint"].is_string()) {
        ds.metadata.fingerprint = doc["config_fingerprint"].get<std::string>();
    }
    if (doc.contains("variant") && doc["variant"].is_string()) {
        ds.metadata.variant = doc["variant"].get<std::string>();
    }
    if (doc.contains("dim") && doc["dim"].is_number_integer()) {
        ds.metadata.dim = doc["dim"].get<int>();
    }
    if (doc.contains("gateset") && doc["gateset"].contains("labels")) {
        ds.metadata.gate_labels = doc["gateset"]["labels"].get<std::vector<std::string>>();
    }
}

nlohmann::json fit_json(const DecayFit &fit, const std::optional<PlateauResult> &plateau,
                        const std::optional<DetectorEfficiency> &detector) {
    nlohmann::json doc;
    doc["model"] = "loss";
    doc["S_hat"] = fit.S_hat;
    doc["S_stderr"] = fit.stderr_S;
    doc["B0_hat"] = fit.B0_hat;
    doc["B0_stderr"] = fit.stderr_B0;
    doc["chi2_per_dof"] = fit.chi2_per_dof;
    doc["converged"] = fit.converged;
    doc["n_iterations"] = fit.n_iterations;
    doc["unit_weights"] = fit.unit_weights;
    nlohmann::json flags = nlohmann::json::array();
    if (plateau) {
        doc["plateau"] = {{"chi2_per_dof", plateau->chi2_per_dof},
                          {"tail_excess_z", plateau->tail_excess_z},
                          {"flagged", plateau->flagged}};
        if (plateau->flagged) {
            flags.push_back(to_string(MarkovFlag::Plateau));
        }
    }
    if (detector) {
        doc["detector"] = {{"D_hat", detector->D_hat},
                           {"eta", detector->eta},
                           {"relative_uncertainty", detector->relative_uncertainty}};
    }
    doc["flags"] = flags;
    return doc;
}

nlohmann::json rb_fit_json(const RBFit &fit, const FlagThresholds &thresholds) {
    nlohmann::json doc;
    doc["model"] = "rb";
    doc["A_hat"] = fit.A_hat;
    doc["A_stderr"] = fit.stderr_A;
    doc["B_hat"] = fit.B_hat;
    doc["B_stderr"] = fit.stderr_B;
    doc["p_hat"] = fit.p_hat;
    doc["p_stderr"] = fit.stderr_p;
    doc["chi2_per_dof"] = fit.chi2_per_dof;
    doc["converged"] = fit.converged;
    doc["n_iterations"] = fit.n_iterations;
    doc["unit_weights"] = fit.unit_weights;
    const double b_minus_a = fit.B_hat - fit.A_hat;
    const double var = fit.stderr_A * fit.stderr_A + fit.stderr_B * fit.stderr_B - 2.0 * fit.cov_AB;
    const double sigma = std::sqrt(std::max(var, 0.0));
    doc["b_minus_a"] = b_minus_a;
    doc["b_minus_a_sigma"] = sigma;
    nlohmann::json flags = nlohmann::json::array();
    if (z_score(b_minus_a, sigma) < -thresholds.z) {
        flags.push_back(to_string(MarkovFlag::BMinusANegative));
    }
    doc["flags"] = flags;
    return doc;
}

nlohmann::json bound_report_json(const BoundReport &r) {
    return {{"dim", r.dim},
            {"avg_loss", r.avg_loss},
            {"worst_loss", r.worst_loss},
            {"bound", r.bound},
            {"slack", r.slack},
            {"satisfied", r.satisfied},
            {"complement_survival", r.complement_survival},
            {"complement_is_probability", r.complement_is_probability}};
}

// ---------------------------------------------------------------------------

std::string read_text_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        throw IoError("error while reading '" + path.string() + "'");
    }
    return buf.str();
}

void write_text_file(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << text;
    out.close();
    if (!out) {
        throw IoError("error while writing '" + path.string() + "'");
    }
}

}  // namespace lossrb

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

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "lossrb/analysis.hpp"
#include "lossrb/protocol.hpp"

namespace lossrb {

/// File system failure (missing file, unwritable directory).
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed dataset text.
class DatasetFormatError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr const char *kCsvHeader = "m,mean,sem,n_sequences,shots";

const char *tool_version();

/// Shortest decimal form that round-trips the double.
std::string format_real(double v);

/// CSV with header `m,mean,sem,n_sequences,shots`: one row per m, an empty
/// sem field when it is undefined, and `exact` in the shots column for exact
/// expectation values.
std::string to_csv(const DecayDataset &ds);
DecayDataset parse_csv(const std::string &text);

nlohmann::json metadata_json(const DecayDataset &ds);
/// Fills ds.metadata from a metadata.json document (unknown keys ignored).
void apply_metadata(DecayDataset &ds, const nlohmann::json &doc);

nlohmann::json fit_json(const DecayFit &fit, const std::optional<PlateauResult> &plateau,
                        const std::optional<DetectorEfficiency> &detector);
nlohmann::json rb_fit_json(const RBFit &fit, const FlagThresholds &thresholds = {});
nlohmann::json bound_report_json(const BoundReport &report);

std::string read_text_file(const std::filesystem::path &path);
/// Writes atomically enough for our purposes: whole buffer, then close.
void write_text_file(const std::filesystem::path &path, const std::string &text);

}  // namespace lossrb

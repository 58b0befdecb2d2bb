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

#include "lossrb/config.hpp"

#include <set>
#include <sstream>

#include "lossrb/gate_sets.hpp"

namespace lossrb {

using nlohmann::json;

namespace {

std::string describe(const std::vector<FieldError> &errors) {
    std::ostringstream msg;
    msg << "invalid config:";
    for (const FieldError &e : errors) {
        msg << "\n  " << e.path << ": " << e.message;
    }
    return msg.str();
}

constexpr int kQubitDim = 2;

/// Walks a document, recording problems instead of stopping at the first.
class Parser {
  public:
    std::vector<FieldError> errors;

    void fail(const std::string &path, const std::string &message) { errors.push_back({path, message}); }

    bool expect_object(const json &j, const std::string &path) {
        if (!j.is_object()) {
            fail(path, "expected an object");
            return false;
        }
        return true;
    }

    void reject_unknown(const json &j, const std::string &path, std::initializer_list<const char *> allowed) {
        std::set<std::string> ok(allowed.begin(), allowed.end());
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!ok.count(it.key())) {
                fail(join(path, it.key()), "unknown key");
            }
        }
    }

    static std::string join(const std::string &path, const std::string &key) {
        return path.empty() ? key : path + "." + key;
    }

    const json *require(const json &obj, const std::string &path, const char *key) {
        if (!obj.contains(key)) {
            fail(join(path, key), "required field missing");
            return nullptr;
        }
        return &obj.at(key);
    }

    std::optional<double> real(const json *j, const std::string &path) {
        if (!j) {
            return std::nullopt;
        }
        if (!j->is_number()) {
            fail(path, "expected a number");
            return std::nullopt;
        }
        return j->get<double>();
    }

    std::optional<std::int64_t> integer(const json *j, const std::string &path) {
        if (!j) {
            return std::nullopt;
        }
        if (!j->is_number_integer()) {
            fail(path, "expected an integer");
            return std::nullopt;
        }
        return j->get<std::int64_t>();
    }

    std::optional<std::uint64_t> unsigned_integer(const json *j, const std::string &path) {
        if (!j) {
            return std::nullopt;
        }
        if (!j->is_number_unsigned()) {
            fail(path, "expected a non-negative integer");
            return std::nullopt;
        }
        return j->get<std::uint64_t>();
    }

    std::optional<Matrix> matrix(const json &j, const std::string &path) {
        if (!j.is_array() || j.empty()) {
            fail(path, "expected a non-empty array of rows");
            return std::nullopt;
        }
        const auto rows = static_cast<Eigen::Index>(j.size());
        if (!j[0].is_array() || j[0].empty()) {
            fail(path + "[0]", "expected a non-empty row");
            return std::nullopt;
        }
        const auto cols = static_cast<Eigen::Index>(j[0].size());
        Matrix m(rows, cols);
        bool ok = true;
        for (Eigen::Index r = 0; r < rows; ++r) {
            const json &row = j[static_cast<std::size_t>(r)];
            const std::string rpath = path + "[" + std::to_string(r) + "]";
            if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
                fail(rpath, "expected a row of length " + std::to_string(cols));
                ok = false;
                continue;
            }
            for (Eigen::Index c = 0; c < cols; ++c) {
                const json &e = row[static_cast<std::size_t>(c)];
                const std::string epath = rpath + "[" + std::to_string(c) + "]";
                if (e.is_number()) {
                    m(r, c) = e.get<double>();
                } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
                    m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
                } else {
                    fail(epath, "expected [re, im]");
                    ok = false;
                }
            }
        }
        if (ok && rows != cols) {
            fail(path, "matrix must be square");
            ok = false;
        }
        return ok ? std::optional<Matrix>(m) : std::nullopt;
    }

    // -- sections ----------------------------------------------------------

    std::optional<NoiseSpec> noise(const json &j) {
        const std::string path = "noise";
        if (!expect_object(j, path)) {
            return std::nullopt;
        }
        const json *type = require(j, path, "type");
        if (!type) {
            return std::nullopt;
        }
        if (!type->is_string()) {
            fail("noise.type", "expected a string");
            return std::nullopt;
        }
        const std::string t = type->get<std::string>();
        const std::size_t before = errors.size();
        auto opt = [&](const char *key) -> const json * { return j.contains(key) ? &j.at(key) : nullptr; };

        if (t == "basis_loss") {
            reject_unknown(j, path, {"type", "alpha", "level", "dim"});
            LossModelSpec spec;
            auto alpha = real(require(j, path, "alpha"), "noise.alpha");
            auto level = integer(require(j, path, "level"), "noise.level");
            auto dim = integer(opt("dim"), "noise.dim");
            spec.dim = static_cast<int>(dim.value_or(kQubitDim));
            if (alpha) {
                spec.alpha = *alpha;
                if (!(*alpha >= 0.0 && *alpha <= 1.0)) {
                    fail("noise.alpha", "must lie in [0, 1]");
                }
            }
            if (spec.dim < 1 || spec.dim > 8) {
                fail("noise.dim", "must lie in [1, 8]");
            }
            if (level) {
                spec.level = static_cast<int>(*level);
                if (*level < 0 || *level >= spec.dim) {
                    fail("noise.level", "must lie in [0, dim)");
                }
            }
            return errors.size() == before ? std::optional<NoiseSpec>(spec) : std::nullopt;
        }
        if (t == "leakage") {
            reject_unknown(j, path, {"type", "epsilon", "theta", "hamiltonian_seed"});
            LeakageModelSpec spec;
            auto eps = real(require(j, path, "epsilon"), "noise.epsilon");
            auto seed = unsigned_integer(require(j, path, "hamiltonian_seed"), "noise.hamiltonian_seed");
            if (eps) {
                spec.epsilon = *eps;
                if (!(*eps >= 0.0)) {
                    fail("noise.epsilon", "must be non-negative");
                }
            }
            if (seed) {
                spec.hamiltonian_seed = *seed;
            }
            if (opt("theta")) {
                spec.theta = real(opt("theta"), "noise.theta");
            }
            return errors.size() == before ? std::optional<NoiseSpec>(spec) : std::nullopt;
        }
        if (t == "kraus") {
            reject_unknown(j, path, {"type", "operators"});
            const json *ops = require(j, path, "operators");
            if (!ops) {
                return std::nullopt;
            }
            if (!ops->is_array() || ops->empty()) {
                fail("noise.operators", "expected a non-empty array of matrices");
                return std::nullopt;
            }
            KrausNoise spec;
            for (std::size_t i = 0; i < ops->size(); ++i) {
                const std::string p = "noise.operators[" + std::to_string(i) + "]";
                if (auto m = matrix((*ops)[i], p)) {
                    if (!spec.operators.empty() && m->rows() != spec.operators.front().rows()) {
                        fail(p, "all Kraus operators must share one dimension");
                    }
                    spec.operators.push_back(*m);
                }
            }
            if (errors.size() == before) {
                ValidationReport report = validate_kraus(spec.operators);
                for (const ValidationIssue &issue : report) {
                    fail("noise.operators", "violates " + issue.invariant + " (deviation " +
                                                std::to_string(issue.deviation) + ")");
                }
            }
            return errors.size() == before ? std::optional<NoiseSpec>(spec) : std::nullopt;
        }
        if (t == "depolarizing") {
            reject_unknown(j, path, {"type", "q", "dim"});
            DepolarizingNoise spec;
            auto q = real(require(j, path, "q"), "noise.q");
            auto dim = integer(opt("dim"), "noise.dim");
            spec.dim = static_cast<int>(dim.value_or(kQubitDim));
            if (q) {
                spec.q = *q;
                if (!(*q >= 0.0 && *q <= 1.0)) {
                    fail("noise.q", "must lie in [0, 1]");
                }
            }
            if (spec.dim < 1 || spec.dim > 8) {
                fail("noise.dim", "must lie in [1, 8]");
            }
            return errors.size() == before ? std::optional<NoiseSpec>(spec) : std::nullopt;
        }
        if (t == "random_lossy") {
            reject_unknown(j, path, {"type", "dim", "loss_scale", "seed"});
            RandomLossyNoise spec;
            auto dim = integer(opt("dim"), "noise.dim");
            auto scale = real(require(j, path, "loss_scale"), "noise.loss_scale");
            auto seed = unsigned_integer(require(j, path, "seed"), "noise.seed");
            spec.dim = static_cast<int>(dim.value_or(kQubitDim));
            if (spec.dim < 2 || spec.dim > 8) {
                fail("noise.dim", "must lie in [2, 8]");
            }
            if (scale) {
                spec.loss_scale = *scale;
                if (!(*scale >= 0.0 && *scale <= 1.0)) {
                    fail("noise.loss_scale", "must lie in [0, 1]");
                }
            }
            if (seed) {
                spec.seed = *seed;
            }
            return errors.size() == before ? std::optional<NoiseSpec>(spec) : std::nullopt;
        }
        if (t == "identity") {
            reject_unknown(j, path, {"type", "dim"});
            IdentityNoise spec;
            spec.dim = static_cast<int>(integer(opt("dim"), "noise.dim").value_or(kQubitDim));
            if (spec.dim < 1 || spec.dim > 8) {
                fail("noise.dim", "must lie in [1, 8]");
            }
            return errors.size() == before ? std::optional<NoiseSpec>(spec) : std::nullopt;
        }
        fail("noise.type", "unknown noise type '" + t + "'");
        return std::nullopt;
    }

    std::optional<std::variant<std::string, Matrix>> state(const json &j) {
        if (j.is_string()) {
            const std::string name = j.get<std::string>();
            if (name == "zero" || name == "one" || name == "maximally_mixed") {
                return name;
            }
            fail("state", "unknown preset '" + name + "' (zero, one, maximally_mixed)");
            return std::nullopt;
        }
        if (!expect_object(j, "state")) {
            return std::nullopt;
        }
        reject_unknown(j, "state", {"matrix"});
        const json *m = require(j, "state", "matrix");
        if (!m) {
            return std::nullopt;
        }
        auto mat = matrix(*m, "state.matrix");
        if (!mat) {
            return std::nullopt;
        }
        if (mat->rows() != kQubitDim) {
            fail("state.matrix", "expected a 2x2 qubit state");
            return std::nullopt;
        }
        ValidationReport report = validate_state(DensityMatrix(*mat));
        for (const ValidationIssue &issue : report) {
            fail("state.matrix", "violates " + issue.invariant + " (deviation " + std::to_string(issue.deviation) + ")");
        }
        return report.empty() ? std::optional<std::variant<std::string, Matrix>>(*mat) : std::nullopt;
    }

    std::optional<DetectorSpec> detector(const json &j) {
        if (!expect_object(j, "detector")) {
            return std::nullopt;
        }
        reject_unknown(j, "detector", {"eigenvalues", "basis_seed", "basis"});
        const std::size_t before = errors.size();
        DetectorSpec spec;
        const json *ev = require(j, "detector", "eigenvalues");
        if (ev) {
            if (!ev->is_array() || ev->size() != kQubitDim) {
                fail("detector.eigenvalues", "expected 2 eigenvalues");
            } else {
                for (std::size_t i = 0; i < ev->size(); ++i) {
                    const std::string p = "detector.eigenvalues[" + std::to_string(i) + "]";
                    auto v = real(&(*ev)[i], p);
                    if (v) {
                        if (!(*v >= 0.0 && *v <= 1.0)) {
                            fail(p, "value " + format(*v) + " outside [0, 1]");
                        }
                        spec.eigenvalues.push_back(*v);
                    }
                }
            }
        }
        const bool has_seed = j.contains("basis_seed");
        const bool has_basis = j.contains("basis");
        if (has_seed && has_basis) {
            fail("detector", "give either basis_seed or basis, not both");
        } else if (has_basis) {
            if (auto b = matrix(j.at("basis"), "detector.basis")) {
                if (b->rows() != kQubitDim) {
                    fail("detector.basis", "expected a 2x2 matrix");
                } else if (unitarity_error(*b) >= kConstructionTol) {
                    fail("detector.basis", "columns are not orthonormal");
                } else {
                    spec.basis = *b;
                }
            }
        } else if (has_seed) {
            if (auto s = unsigned_integer(&j.at("basis_seed"), "detector.basis_seed")) {
                spec.basis = *s;
            }
        } else {
            fail("detector.basis_seed", "required field missing (or give detector.basis)");
        }
        return errors.size() == before ? std::optional<DetectorSpec>(spec) : std::nullopt;
    }

    std::optional<ProtocolSection> protocol(const json &j) {
        if (!expect_object(j, "protocol")) {
            return std::nullopt;
        }
        reject_unknown(j, "protocol", {"m_grid", "n_sequences", "shots", "variant"});
        const std::size_t before = errors.size();
        ProtocolSection p;
        if (const json *grid = require(j, "protocol", "m_grid")) {
            if (grid->is_array()) {
                for (std::size_t i = 0; i < grid->size(); ++i) {
                    const std::string path = "protocol.m_grid[" + std::to_string(i) + "]";
                    auto v = integer(&(*grid)[i], path);
                    if (v) {
                        if (*v < 1) {
                            fail(path, "sequence lengths must be positive");
                        } else if (!p.m_grid.empty() && *v <= p.m_grid.back()) {
                            fail(path, "m grid must be strictly increasing");
                        }
                        p.m_grid.push_back(static_cast<int>(*v));
                    }
                }
                if (grid->empty()) {
                    fail("protocol.m_grid", "empty grid");
                }
            } else if (grid->is_object()) {
                reject_unknown(*grid, "protocol.m_grid", {"start", "stop", "step"});
                auto start = integer(require(*grid, "protocol.m_grid", "start"), "protocol.m_grid.start");
                auto stop = integer(require(*grid, "protocol.m_grid", "stop"), "protocol.m_grid.stop");
                auto step = integer(require(*grid, "protocol.m_grid", "step"), "protocol.m_grid.step");
                if (start && stop && step) {
                    if (*start < 1 || *step < 1 || *stop < *start) {
                        fail("protocol.m_grid", "need 1 <= start <= stop and step >= 1");
                    } else {
                        p.m_grid = arithmetic_grid(static_cast<int>(*start), static_cast<int>(*stop),
                                                   static_cast<int>(*step));
                    }
                }
            } else {
                fail("protocol.m_grid", "expected an array or {start, stop, step}");
            }
        }
        if (auto n = integer(require(j, "protocol", "n_sequences"), "protocol.n_sequences")) {
            if (*n < 1) {
                fail("protocol.n_sequences", "must be positive");
            }
            p.n_sequences = static_cast<int>(*n);
        }
        if (j.contains("shots")) {
            const json &s = j.at("shots");
            if (s.is_string() && s.get<std::string>() == "exact") {
                p.shots = std::nullopt;
            } else if (s.is_number_unsigned() && s.get<std::uint64_t>() > 0) {
                p.shots = s.get<std::uint64_t>();
            } else {
                fail("protocol.shots", "expected a positive integer or \"exact\"");
            }
        }
        if (j.contains("variant")) {
            const json &v = j.at("variant");
            if (v == "loss") {
                p.variant = Variant::Loss;
            } else if (v == "rb") {
                p.variant = Variant::RB;
            } else {
                fail("protocol.variant", "expected \"loss\" or \"rb\"");
            }
        }
        return errors.size() == before ? std::optional<ProtocolSection>(p) : std::nullopt;
    }

    static std::string format(double v) {
        std::ostringstream s;
        s << v;
        return s.str();
    }
};

json parse_document(const std::string &text) {
    json doc;
    try {
        doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error &e) {
        throw ConfigError(std::vector<FieldError>{{"", std::string("syntax error: ") + e.what()}});
    }
    if (doc.is_null()) {
        doc = json::object();
    }
    if (!doc.is_object()) {
        throw ConfigError(std::vector<FieldError>{{"", "top level must be an object"}});
    }
    return doc;
}

int noise_dim(const NoiseSpec &noise) {
    return std::visit(
        [](const auto &spec) -> int {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, LossModelSpec>) {
                return spec.dim;
            } else if constexpr (std::is_same_v<T, LeakageModelSpec>) {
                return 3;
            } else if constexpr (std::is_same_v<T, KrausNoise>) {
                return static_cast<int>(spec.operators.front().rows());
            } else {
                return spec.dim;
            }
        },
        noise);
}

constexpr std::initializer_list<const char *> kTopLevelKeys = {"gateset", "noise",    "state", "detector",
                                                               "protocol", "seed",    "output_dir"};

}  // namespace

ConfigError::ConfigError(std::vector<FieldError> errors)
    : std::invalid_argument(describe(errors)), errors_(std::move(errors)) {
}

RunConfig parse_config(const std::string &text) {
    json doc = parse_document(text);
    Parser p;
    p.reject_unknown(doc, "", kTopLevelKeys);
    RunConfig cfg;

    if (const json *g = p.require(doc, "", "gateset")) {
        if (*g == "pauli" || *g == "clifford") {
            cfg.gateset = g->get<std::string>();
        } else {
            p.fail("gateset", "expected \"pauli\" or \"clifford\"");
        }
    }
    std::optional<NoiseSpec> noise;
    if (const json *n = p.require(doc, "", "noise")) {
        noise = p.noise(*n);
    }
    if (const json *s = p.require(doc, "", "state")) {
        if (auto st = p.state(*s)) {
            cfg.state = *st;
        }
    }
    if (const json *d = p.require(doc, "", "detector")) {
        if (auto det = p.detector(*d)) {
            cfg.detector = *det;
        }
    }
    if (const json *pr = p.require(doc, "", "protocol")) {
        if (auto sec = p.protocol(*pr)) {
            cfg.protocol = *sec;
        }
    }
    if (auto seed = p.unsigned_integer(p.require(doc, "", "seed"), "seed")) {
        cfg.seed = *seed;
    }
    if (doc.contains("output_dir")) {
        if (doc["output_dir"].is_string()) {
            cfg.output_dir = doc["output_dir"].get<std::string>();
        } else {
            p.fail("output_dir", "expected a string");
        }
    }
    if (noise) {
        const bool leakage = std::holds_alternative<LeakageModelSpec>(*noise);
        if (!leakage && noise_dim(*noise) != kQubitDim) {
            p.fail("noise.dim", "dimension " + std::to_string(noise_dim(*noise)) +
                                    " is inconsistent with the qubit gate set");
        }
        cfg.noise = *noise;
    }
    if (!p.errors.empty()) {
        throw ConfigError(std::move(p.errors));
    }
    return cfg;
}

NoiseSpec parse_noise_config(const std::string &text) {
    json doc = parse_document(text);
    Parser p;
    p.reject_unknown(doc, "", kTopLevelKeys);
    std::optional<NoiseSpec> noise;
    if (const json *n = p.require(doc, "", "noise")) {
        noise = p.noise(*n);
    }
    if (!p.errors.empty() || !noise) {
        throw ConfigError(std::move(p.errors));
    }
    return *noise;
}

QuantumChannel build_channel(const NoiseSpec &noise) {
    return std::visit(
        [](const auto &spec) -> QuantumChannel {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, LossModelSpec>) {
                return basis_loss_channel(spec);
            } else if constexpr (std::is_same_v<T, LeakageModelSpec>) {
                return coherent_leakage_error(spec);
            } else if constexpr (std::is_same_v<T, KrausNoise>) {
                return QuantumChannel(spec.operators);
            } else if constexpr (std::is_same_v<T, DepolarizingNoise>) {
                return depolarizing_channel(spec.dim, spec.q);
            } else if constexpr (std::is_same_v<T, RandomLossyNoise>) {
                return random_lossy_channel(spec.dim, spec.loss_scale, spec.seed);
            } else {
                return QuantumChannel::identity(spec.dim);
            }
        },
        noise);
}

ProtocolConfig build_protocol(const RunConfig &cfg) {
    GateSet qubit_gates = cfg.gateset == "clifford" ? clifford_gateset() : pauli_gateset();

    Matrix rho;
    if (const auto *name = std::get_if<std::string>(&cfg.state)) {
        if (*name == "one") {
            rho = basis_projector(kQubitDim, 1);
        } else if (*name == "maximally_mixed") {
            rho = Matrix::Identity(kQubitDim, kQubitDim) / 2.0;
        } else {
            rho = basis_projector(kQubitDim, 0);
        }
    } else {
        rho = std::get<Matrix>(cfg.state);
    }
    Matrix q = detector_model(cfg.detector).matrix();

    const auto *leak = std::get_if<LeakageModelSpec>(&cfg.noise);
    const int dim = leak ? 3 : kQubitDim;
    GateSet gates = leak ? embed_gateset_in_qutrit(qubit_gates, leakage_phase(*leak)) : qubit_gates;
    if (leak) {
        rho = pad_with_zeros(rho, dim);
        q = pad_with_zeros(q, dim);
    }
    ProtocolConfig out{
        std::move(gates),
        build_channel(cfg.noise),
        DensityMatrix(dim, rho),
        MeasurementOperator(q),
        cfg.protocol.m_grid,
        cfg.protocol.n_sequences,
        cfg.protocol.shots,
        cfg.seed,
        cfg.protocol.variant,
    };
    validate_config(out);
    return out;
}

}  // namespace lossrb

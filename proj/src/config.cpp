#include "maqa/config.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

namespace maqa::cli {

using nlohmann::json;
using qsim::CMatrix;
using qsim::Complex;
using qsim::Observable;
using qsim::UnitaryGate;

std::string mode_name(Mode mode) {
    switch (mode) {
        case Mode::VerifyAppendix: return "verify-appendix";
        case Mode::Aggregate: return "aggregate";
        case Mode::QslpTrain: return "qslp-train";
        case Mode::Ensemble: return "ensemble";
        case Mode::Resources: return "resources";
    }
    return "?";
}

Mode mode_from_name(const std::string& name) {
    if (name == "verify-appendix") return Mode::VerifyAppendix;
    if (name == "aggregate") return Mode::Aggregate;
    if (name == "qslp-train") return Mode::QslpTrain;
    if (name == "ensemble") return Mode::Ensemble;
    if (name == "resources") return Mode::Resources;
    throw ConfigError("mode", "unknown mode '" + name +
                              "' (expected aggregate, qslp-train, ensemble, "
                              "verify-appendix or resources)");
}

namespace {

void check_keys(const json& obj, const std::string& field,
                std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) {
                known = true;
                break;
            }
        if (!known) throw ConfigError(field, "unknown field '" + item.key() + "'");
    }
}

const json& require(const json& obj, const std::string& field, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(field, std::string("missing field '") + key + "'");
    return *it;
}

double as_double(const json& j, const std::string& field) {
    if (!j.is_number()) throw ConfigError(field, "expected a number");
    return j.get<double>();
}

std::size_t as_size(const json& j, const std::string& field) {
    if (!j.is_number_integer() && !j.is_number_unsigned())
        throw ConfigError(field, "expected a non-negative integer");
    if (j.is_number_integer() && j.get<std::int64_t>() < 0)
        throw ConfigError(field, "expected a non-negative integer");
    return j.get<std::size_t>();
}

std::uint64_t as_u64(const json& j, const std::string& field) {
    if (!j.is_number_integer() && !j.is_number_unsigned())
        throw ConfigError(field, "expected a non-negative integer");
    if (j.is_number_integer() && j.get<std::int64_t>() < 0)
        throw ConfigError(field, "expected a non-negative integer");
    return j.get<std::uint64_t>();
}

Complex as_complex(const json& j, const std::string& field) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw ConfigError(field, "expected a number or an [re, im] pair");
}

std::vector<Complex> parse_complex_vector(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) throw ConfigError(field, "expected a non-empty array");
    std::vector<Complex> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(as_complex(j[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<double> parse_real_vector(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) throw ConfigError(field, "expected a non-empty array");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(as_double(j[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

double parse_preset_angle(const std::string& text, std::size_t prefix_len,
                          const std::string& field) {
    if (text.back() != ')') throw ConfigError(field, "malformed preset '" + text + "'");
    const std::string inner = text.substr(prefix_len, text.size() - prefix_len - 1);
    std::size_t consumed = 0;
    double angle = 0.0;
    try {
        angle = std::stod(inner, &consumed);
    } catch (const std::exception&) {
        throw ConfigError(field, "bad angle in preset '" + text + "'");
    }
    if (consumed != inner.size()) throw ConfigError(field, "bad angle in preset '" + text + "'");
    return angle;
}

CMatrix parse_preset(const std::string& name, const std::string& field) {
    if (name == "I") return gates::identity(1);
    if (name == "X") return gates::pauli_x();
    if (name == "Y") return gates::pauli_y();
    if (name == "Z") return gates::pauli_z();
    if (name == "H") return gates::hadamard();
    if (name.rfind("Ry(", 0) == 0) return gates::ry(parse_preset_angle(name, 3, field));
    if (name.rfind("Rz(", 0) == 0) return gates::rz(parse_preset_angle(name, 3, field));
    throw ConfigError(field, "unknown gate preset '" + name +
                             "' (expected I, X, Y, Z, H, Ry(t) or Rz(t))");
}

CMatrix parse_matrix_object(const json& j, const std::string& field) {
    check_keys(j, field, {"qubits", "matrix"});
    const std::size_t qubits = as_size(require(j, field, "qubits"), field + ".qubits");
    if (qubits < 1 || qubits > 10) throw ConfigError(field + ".qubits", "expected 1..10");
    const std::size_t dim = std::size_t{1} << qubits;
    const json& entries = require(j, field, "matrix");
    if (!entries.is_array() || entries.size() != dim * dim)
        throw ConfigError(field + ".matrix", "expected " + std::to_string(dim * dim) +
                                                 " row-major [re, im] entries");
    CMatrix m(dim, dim);
    for (std::size_t i = 0; i < dim * dim; ++i)
        m.a[i] = as_complex(entries[i], field + ".matrix[" + std::to_string(i) + "]");
    return m;
}

// Gate grammar: preset string, matrix object, or array of those (Kronecker
// product, first factor most significant).
CMatrix parse_gate_matrix(const json& j, const std::string& field) {
    if (j.is_string()) return parse_preset(j.get<std::string>(), field);
    if (j.is_object()) return parse_matrix_object(j, field);
    if (j.is_array()) {
        if (j.empty()) throw ConfigError(field, "empty gate list");
        CMatrix m(0, 0);
        for (std::size_t i = 0; i < j.size(); ++i) {
            const std::string sub = field + "[" + std::to_string(i) + "]";
            if (!j[i].is_string() && !j[i].is_object())
                throw ConfigError(sub, "expected a preset name or a matrix object");
            CMatrix factor = parse_gate_matrix(j[i], sub);
            m = (i == 0) ? std::move(factor) : qsim::kron(m, factor);
        }
        return m;
    }
    throw ConfigError(field, "expected a preset name, matrix object or gate list");
}

UnitaryGate parse_unitary(const json& j, const std::string& field, std::size_t want_qubits) {
    CMatrix m = parse_gate_matrix(j, field);
    try {
        UnitaryGate gate(std::move(m));
        if (gate.dim_qubits() != want_qubits)
            throw ConfigError(field, "gate acts on " + std::to_string(gate.dim_qubits()) +
                                         " qubits, expected " + std::to_string(want_qubits));
        return gate;
    } catch (const qsim::NonUnitaryError& e) {
        throw ConfigError(field, e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(field, e.what());
    }
}

Observable parse_observable(const json& j, const std::string& field, std::size_t want_qubits) {
    CMatrix m = parse_gate_matrix(j, field);
    try {
        Observable obs(std::move(m));
        if (obs.dim_qubits() != want_qubits)
            throw ConfigError(field, "observable acts on " + std::to_string(obs.dim_qubits()) +
                                         " qubits, expected " + std::to_string(want_qubits));
        return obs;
    } catch (const qsim::NonHermitianError& e) {
        throw ConfigError(field, e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(field, e.what());
    }
}

std::vector<Complex> parse_beta_amps(const json& j, const std::string& field, std::size_t d) {
    if (j.is_string()) {
        if (j.get<std::string>() == "uniform") return ensemble::uniform_control_amps(d);
        throw ConfigError(field, "expected 'uniform' or an amplitude array");
    }
    auto amps = parse_complex_vector(j, field);
    if (amps.size() != (std::size_t{1} << d))
        throw ConfigError(field, "expected 2^d = " + std::to_string(std::size_t{1} << d) +
                                     " amplitudes");
    double norm2 = 0.0;
    for (const Complex& c : amps) norm2 += std::norm(c);
    if (std::abs(std::sqrt(norm2) - 1.0) > qsim::kNormTol)
        throw ConfigError(field, "amplitudes are not unit norm");
    return amps;
}

AggregateJob parse_aggregate_spec(const json& spec) {
    check_keys(spec, "spec",
               {"d", "n", "beta_amps", "x_raw", "gate_pairs", "f_gate", "observable"});
    const std::size_t d = as_size(require(spec, "spec", "d"), "spec.d");
    const std::size_t n = as_size(require(spec, "spec", "n"), "spec.n");
    if (n < 1) throw ConfigError("spec.n", "need at least one data qubit");

    auto beta = parse_beta_amps(require(spec, "spec", "beta_amps"), "spec.beta_amps", d);
    auto x_raw = parse_complex_vector(require(spec, "spec", "x_raw"), "spec.x_raw");

    const json& pairs_json = require(spec, "spec", "gate_pairs");
    if (!pairs_json.is_array() || pairs_json.size() != d)
        throw ConfigError("spec.gate_pairs", "expected exactly d = " + std::to_string(d) +
                                                 " gate pairs");
    std::vector<GatePair> pairs;
    pairs.reserve(d);
    for (std::size_t i = 0; i < d; ++i) {
        const std::string field = "spec.gate_pairs[" + std::to_string(i) + "]";
        const json& pair = pairs_json[i];
        if (!pair.is_array() || pair.size() != 2)
            throw ConfigError(field, "expected a [gate_on_one, gate_on_zero] pair");
        pairs.push_back({parse_unitary(pair[0], field + "[0]", n),
                         parse_unitary(pair[1], field + "[1]", n)});
    }

    UnitaryGate f = spec.contains("f_gate")
                        ? parse_unitary(spec["f_gate"], "spec.f_gate", n)
                        : UnitaryGate(gates::identity(n));
    Observable obs = parse_observable(require(spec, "spec", "observable"), "spec.observable", n);

    try {
        return AggregateJob{MaqaSpec(d, n, std::move(beta), std::move(x_raw), std::move(pairs),
                                     std::move(f), std::move(obs))};
    } catch (const std::invalid_argument& e) {
        throw ConfigError("spec", e.what());
    }
}

QslpTrainJob parse_qslp_spec(const json& spec, const std::filesystem::path& base_dir) {
    check_keys(spec, "spec",
               {"d", "n", "epochs", "learning_rate", "fd_step", "dataset", "theta",
                "beta_params", "f_gate"});
    QslpTrainJob job;
    job.spec.d = as_size(require(spec, "spec", "d"), "spec.d");
    job.spec.n = as_size(require(spec, "spec", "n"), "spec.n");
    if (job.spec.n < 1) throw ConfigError("spec.n", "need at least one data qubit");
    job.epochs = spec.contains("epochs") ? as_size(spec["epochs"], "spec.epochs") : 100;
    if (job.epochs < 1) throw ConfigError("spec.epochs", "need at least one epoch");
    job.learning_rate =
        spec.contains("learning_rate") ? as_double(spec["learning_rate"], "spec.learning_rate")
                                       : 0.5;
    if (job.learning_rate <= 0.0) throw ConfigError("spec.learning_rate", "must be positive");
    job.fd_step = spec.contains("fd_step") ? as_double(spec["fd_step"], "spec.fd_step") : 1e-4;
    if (job.fd_step <= 0.0) throw ConfigError("spec.fd_step", "must be positive");

    if (spec.contains("theta")) {
        job.spec.theta = parse_real_vector(spec["theta"], "spec.theta");
        if (job.spec.theta.size() != job.spec.theta_count())
            throw ConfigError("spec.theta", "expected 2*d*n = " +
                                                std::to_string(job.spec.theta_count()) +
                                                " angles");
    }
    if (spec.contains("beta_params")) {
        job.spec.beta_params = parse_real_vector(spec["beta_params"], "spec.beta_params");
        if (job.spec.beta_params.size() != job.spec.d)
            throw ConfigError("spec.beta_params", "expected d = " + std::to_string(job.spec.d) +
                                                      " angles");
    }
    if (spec.contains("f_gate"))
        job.spec.f_gate = parse_unitary(spec["f_gate"], "spec.f_gate", job.spec.n);

    const json& dataset = require(spec, "spec", "dataset");
    if (dataset.is_string()) {
        const std::filesystem::path path = base_dir / dataset.get<std::string>();
        job.dataset = parse_dataset_csv(read_text_file(path.string()), path.string());
    } else if (dataset.is_object()) {
        check_keys(dataset, "spec.dataset", {"points"});
        const json& points = require(dataset, "spec.dataset", "points");
        if (!points.is_array() || points.empty())
            throw ConfigError("spec.dataset.points", "expected a non-empty array");
        for (std::size_t i = 0; i < points.size(); ++i) {
            const std::string field = "spec.dataset.points[" + std::to_string(i) + "]";
            if (!points[i].is_object()) throw ConfigError(field, "expected an object");
            check_keys(points[i], field, {"x", "label"});
            qslp::DataPoint p;
            p.x = parse_real_vector(require(points[i], field, "x"), field + ".x");
            p.label = as_double(require(points[i], field, "label"), field + ".label");
            job.dataset.points.push_back(std::move(p));
        }
    } else {
        throw ConfigError("spec.dataset", "expected a CSV path or an inline {points: ...}");
    }
    try {
        qslp::validate_dataset(job.dataset, job.spec.n);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("spec.dataset", e.what());
    }
    return job;
}

EnsembleJob parse_ensemble_spec(const json& spec) {
    check_keys(spec, "spec", {"d", "n", "weak_learner_angles", "x", "observable"});
    ensemble::EnsembleSpec espec;
    espec.d = as_size(require(spec, "spec", "d"), "spec.d");
    espec.n = spec.contains("n") ? as_size(spec["n"], "spec.n") : 1;
    if (espec.n != 1) throw ConfigError("spec.n", "bagging demo runs on a single data qubit");
    espec.weak_learner_angles =
        parse_real_vector(require(spec, "spec", "weak_learner_angles"),
                          "spec.weak_learner_angles");
    if (espec.weak_learner_angles.size() != (std::size_t{1} << espec.d))
        throw ConfigError("spec.weak_learner_angles",
                          "expected 2^d = " + std::to_string(std::size_t{1} << espec.d) +
                              " angles");
    std::vector<double> x = parse_real_vector(require(spec, "spec", "x"), "spec.x");
    Observable obs = parse_observable(require(spec, "spec", "observable"), "spec.observable", 1);
    return EnsembleJob{std::move(espec), std::move(x), std::move(obs)};
}

ResourcesJob parse_resources_spec(const json& spec) {
    check_keys(spec, "spec", {"d_min", "d_max", "n_samples", "p_features", "alpha", "beta"});
    ResourcesJob job;
    if (spec.contains("d_min")) job.d_min = as_size(spec["d_min"], "spec.d_min");
    if (spec.contains("d_max")) job.d_max = as_size(spec["d_max"], "spec.d_max");
    if (job.d_min > job.d_max) throw ConfigError("spec.d_min", "d_min exceeds d_max");
    if (job.d_max > 12) throw ConfigError("spec.d_max", "d_max larger than 12");
    job.params.n_samples =
        spec.contains("n_samples") ? as_double(spec["n_samples"], "spec.n_samples") : 100.0;
    job.params.p_features =
        spec.contains("p_features") ? as_double(spec["p_features"], "spec.p_features") : 2.0;
    job.params.alpha = spec.contains("alpha") ? as_double(spec["alpha"], "spec.alpha") : 1.0;
    job.params.beta = spec.contains("beta") ? as_double(spec["beta"], "spec.beta") : 1.0;
    if (job.params.alpha < 1.0 || job.params.beta < 1.0)
        throw ConfigError("spec.alpha", "cost exponents must be >= 1");
    if (job.params.n_samples < 1.0 || job.params.p_features < 1.0)
        throw ConfigError("spec.n_samples", "cost sizes must be >= 1");
    return job;
}

}  // namespace

qslp::ToyDataset parse_dataset_csv(const std::string& text, const std::string& source_name) {
    qslp::ToyDataset data;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> values;
        std::istringstream fields(line);
        std::string cell;
        while (std::getline(fields, cell, ',')) {
            std::size_t consumed = 0;
            double v = 0.0;
            try {
                v = std::stod(cell, &consumed);
            } catch (const std::exception&) {
                throw ConfigError(source_name + ":" + std::to_string(line_no),
                                  "bad number '" + cell + "'");
            }
            while (consumed < cell.size() && std::isspace(static_cast<unsigned char>(cell[consumed])))
                ++consumed;
            if (consumed != cell.size())
                throw ConfigError(source_name + ":" + std::to_string(line_no),
                                  "bad number '" + cell + "'");
            values.push_back(v);
        }
        if (values.size() < 2)
            throw ConfigError(source_name + ":" + std::to_string(line_no),
                              "expected at least one feature and a label");
        qslp::DataPoint p;
        p.label = values.back();
        values.pop_back();
        p.x = std::move(values);
        if (p.label != 0.0 && p.label != 1.0)
            throw ConfigError(source_name + ":" + std::to_string(line_no),
                              "label must be 0 or 1");
        data.points.push_back(std::move(p));
    }
    if (data.points.empty()) throw ConfigError(source_name, "dataset is empty");
    return data;
}

ExperimentConfig parse_config(const std::string& path) {
    return parse_config_text(read_text_file(path), path);
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& source_name) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(source_name, e.what());
    }
    if (!root.is_object()) throw ConfigError(source_name, "config root must be an object");
    check_keys(root, "", {"mode", "seed", "tolerance", "output_path", "spec"});

    ExperimentConfig config;
    config.config_hash = hex64(fnv1a64(text));
    if (!root.contains("mode")) throw ConfigError("mode", "missing field 'mode'");
    if (!root["mode"].is_string()) throw ConfigError("mode", "expected a string");
    config.mode = mode_from_name(root["mode"].get<std::string>());
    if (root.contains("seed")) config.seed = as_u64(root["seed"], "seed");
    if (root.contains("tolerance")) {
        config.tolerance = as_double(root["tolerance"], "tolerance");
        if (*config.tolerance <= 0.0) throw ConfigError("tolerance", "must be positive");
    }
    if (root.contains("output_path")) {
        if (!root["output_path"].is_string())
            throw ConfigError("output_path", "expected a string");
        config.output_path = root["output_path"].get<std::string>();
    }

    const bool spec_optional =
        config.mode == Mode::VerifyAppendix || config.mode == Mode::Resources;
    if (!root.contains("spec")) {
        if (!spec_optional) throw ConfigError("spec", "missing field 'spec'");
    } else if (!root["spec"].is_object()) {
        throw ConfigError("spec", "expected an object");
    }
    const json spec = root.contains("spec") ? root["spec"] : json::object();

    const std::filesystem::path base_dir = std::filesystem::path(source_name).parent_path();
    switch (config.mode) {
        case Mode::VerifyAppendix:
            check_keys(spec, "spec", {});
            config.job = VerifyAppendixJob{};
            break;
        case Mode::Aggregate: config.job = parse_aggregate_spec(spec); break;
        case Mode::QslpTrain: config.job = parse_qslp_spec(spec, base_dir); break;
        case Mode::Ensemble: config.job = parse_ensemble_spec(spec); break;
        case Mode::Resources: config.job = parse_resources_spec(spec); break;
    }
    return config;
}

namespace {

JsonValue complex_pair(const Complex& c) {
    JsonValue pair = JsonValue::array();
    pair.push(JsonValue::num(c.real()));
    pair.push(JsonValue::num(c.imag()));
    return pair;
}

JsonValue complex_vector_json(const std::vector<Complex>& v) {
    JsonValue arr = JsonValue::array();
    for (const Complex& c : v) arr.push(complex_pair(c));
    return arr;
}

JsonValue real_vector_json(const std::vector<double>& v) {
    JsonValue arr = JsonValue::array();
    for (double x : v) arr.push(JsonValue::num(x));
    return arr;
}

JsonValue matrix_json(const CMatrix& m, std::size_t qubits) {
    JsonValue obj = JsonValue::object();
    obj.set("qubits", JsonValue::uinteger(qubits));
    JsonValue entries = JsonValue::array();
    for (const Complex& c : m.a) entries.push(complex_pair(c));
    obj.set("matrix", std::move(entries));
    return obj;
}

JsonValue canonical_spec(const AggregateJob& job) {
    const MaqaSpec& s = job.spec;
    JsonValue spec = JsonValue::object();
    spec.set("d", JsonValue::uinteger(s.d));
    spec.set("n", JsonValue::uinteger(s.n));
    spec.set("beta_amps", complex_vector_json(s.beta_amps));
    spec.set("x_raw", complex_vector_json(s.x_raw));
    JsonValue pairs = JsonValue::array();
    for (const GatePair& p : s.gate_pairs) {
        JsonValue pair = JsonValue::array();
        pair.push(matrix_json(p.on_one.matrix(), s.n));
        pair.push(matrix_json(p.on_zero.matrix(), s.n));
        pairs.push(std::move(pair));
    }
    spec.set("gate_pairs", std::move(pairs));
    spec.set("f_gate", matrix_json(s.f_gate.matrix(), s.n));
    spec.set("observable", matrix_json(s.observable.matrix(), s.n));
    return spec;
}

JsonValue canonical_spec(const QslpTrainJob& job) {
    JsonValue spec = JsonValue::object();
    spec.set("d", JsonValue::uinteger(job.spec.d));
    spec.set("n", JsonValue::uinteger(job.spec.n));
    spec.set("epochs", JsonValue::uinteger(job.epochs));
    spec.set("learning_rate", JsonValue::num(job.learning_rate));
    spec.set("fd_step", JsonValue::num(job.fd_step));
    if (!job.spec.theta.empty()) spec.set("theta", real_vector_json(job.spec.theta));
    if (!job.spec.beta_params.empty())
        spec.set("beta_params", real_vector_json(job.spec.beta_params));
    if (job.spec.f_gate)
        spec.set("f_gate", matrix_json(job.spec.f_gate->matrix(), job.spec.n));
    JsonValue points = JsonValue::array();
    for (const qslp::DataPoint& p : job.dataset.points) {
        JsonValue point = JsonValue::object();
        point.set("x", real_vector_json(p.x));
        point.set("label", JsonValue::num(p.label));
        points.push(std::move(point));
    }
    JsonValue dataset = JsonValue::object();
    dataset.set("points", std::move(points));
    spec.set("dataset", std::move(dataset));
    return spec;
}

JsonValue canonical_spec(const EnsembleJob& job) {
    JsonValue spec = JsonValue::object();
    spec.set("d", JsonValue::uinteger(job.spec.d));
    spec.set("n", JsonValue::uinteger(job.spec.n));
    spec.set("weak_learner_angles", real_vector_json(job.spec.weak_learner_angles));
    spec.set("x", real_vector_json(job.x));
    spec.set("observable", matrix_json(job.observable.matrix(), 1));
    return spec;
}

JsonValue canonical_spec(const ResourcesJob& job) {
    JsonValue spec = JsonValue::object();
    spec.set("d_min", JsonValue::uinteger(job.d_min));
    spec.set("d_max", JsonValue::uinteger(job.d_max));
    spec.set("n_samples", JsonValue::num(job.params.n_samples));
    spec.set("p_features", JsonValue::num(job.params.p_features));
    spec.set("alpha", JsonValue::num(job.params.alpha));
    spec.set("beta", JsonValue::num(job.params.beta));
    return spec;
}

}  // namespace

std::string canonical_config_json(const ExperimentConfig& config) {
    JsonValue root = JsonValue::object();
    root.set("mode", JsonValue::str(mode_name(config.mode)));
    if (config.seed) root.set("seed", JsonValue::uinteger(*config.seed));
    if (config.tolerance) root.set("tolerance", JsonValue::num(*config.tolerance));
    if (!config.output_path.empty())
        root.set("output_path", JsonValue::str(config.output_path));
    if (const auto* agg = std::get_if<AggregateJob>(&config.job))
        root.set("spec", canonical_spec(*agg));
    else if (const auto* train = std::get_if<QslpTrainJob>(&config.job))
        root.set("spec", canonical_spec(*train));
    else if (const auto* ens = std::get_if<EnsembleJob>(&config.job))
        root.set("spec", canonical_spec(*ens));
    else if (const auto* res = std::get_if<ResourcesJob>(&config.job))
        root.set("spec", canonical_spec(*res));
    return root.dump();
}

std::uint64_t resolve_seed(const ExperimentConfig& config, const RunOptions& opts) {
    if (opts.seed_flag) return *opts.seed_flag;
    if (config.seed) return *config.seed;
    if (opts.seed_env) return *opts.seed_env;
    return 0;
}

double default_tolerance(Mode mode) {
    switch (mode) {
        case Mode::VerifyAppendix: return 1e-12;
        case Mode::Ensemble: return 1e-10;
        default: return 1e-9;
    }
}

double resolve_tolerance(const ExperimentConfig& config, const RunOptions& opts) {
    if (opts.tolerance_flag) return *opts.tolerance_flag;
    if (config.tolerance) return *config.tolerance;
    return default_tolerance(config.mode);
}

namespace {

JsonValue report_header(const ReportContext& ctx) {
    JsonValue root = JsonValue::object();
    root.set("mode", JsonValue::str(mode_name(ctx.mode)));
    root.set("seed", JsonValue::uinteger(ctx.seed));
    root.set("config_hash", JsonValue::str(ctx.config_hash));
    return root;
}

JsonValue resources_json(const ResourceReport& r) {
    JsonValue res = JsonValue::object();
    res.set("controlled_g_applications", JsonValue::uinteger(r.controlled_g_applications));
    res.set("f_applications", JsonValue::uinteger(r.f_applications));
    res.set("trajectory_count", JsonValue::uinteger(r.trajectory_count));
    JsonValue model = JsonValue::object();
    model.set("h", JsonValue::uinteger(r.classical_cost_model.h));
    model.set("n_samples", JsonValue::num(r.classical_cost_model.n_samples));
    model.set("p_features", JsonValue::num(r.classical_cost_model.p_features));
    model.set("alpha", JsonValue::num(r.classical_cost_model.alpha));
    model.set("beta", JsonValue::num(r.classical_cost_model.beta));
    model.set("cost", JsonValue::num(r.classical_cost_model.cost));
    res.set("classical_cost_model", std::move(model));
    return res;
}

std::string join_path(const std::string& dir, const std::string& file) {
    return (std::filesystem::path(dir) / file).string();
}

}  // namespace

int finish_aggregate(const AggregateResult& result, const ResourceReport& resources,
                     std::size_t d, std::size_t n, const ReportContext& ctx) {
    const bool within = result.abs_diff <= ctx.tolerance;
    JsonValue root = report_header(ctx);
    root.set("d", JsonValue::uinteger(d));
    root.set("n", JsonValue::uinteger(n));
    root.set("tolerance", JsonValue::num(ctx.tolerance));
    root.set("quantum_value", JsonValue::num(result.quantum_value));
    root.set("oracle_value", JsonValue::num(result.oracle_value));
    root.set("abs_diff", JsonValue::num(result.abs_diff));
    root.set("within_tolerance", JsonValue::boolean(within));
    JsonValue table = JsonValue::array();
    for (const TrajectoryComponent& t : result.per_trajectory) {
        JsonValue row = JsonValue::object();
        row.set("h", JsonValue::uinteger(t.h));
        row.set("weight", JsonValue::num(t.weight));
        row.set("component", JsonValue::num(t.component));
        table.push(std::move(row));
    }
    root.set("per_trajectory", std::move(table));
    root.set("resources", resources_json(resources));
    write_text_file(join_path(ctx.out_dir, "aggregate_report.json"), root.dump());
    return within ? 0 : 2;
}

namespace {

int run_aggregate(const AggregateJob& job, const ReportContext& ctx) {
    const RunOutput out = run_maqa(job.spec);
    return finish_aggregate(out.aggregate, out.resources, job.spec.d, job.spec.n, ctx);
}

int run_qslp_train(const QslpTrainJob& job, const ReportContext& ctx) {
    qslp::QslpSpec spec = job.spec;
    spec.seed = ctx.seed;
    const qslp::TrainReport report =
        qslp::qslp_train(job.dataset, spec, job.epochs, job.learning_rate, job.fd_step,
                         ctx.seed);

    JsonValue root = report_header(ctx);
    root.set("epochs", JsonValue::uinteger(report.epochs));
    root.set("learning_rate", JsonValue::num(report.learning_rate));
    root.set("fd_step", JsonValue::num(report.fd_step));
    root.set("initial_loss", JsonValue::num(report.loss_trace.front()));
    root.set("final_loss", JsonValue::num(report.loss_trace.back()));
    root.set("final_theta", real_vector_json(report.final_theta));
    root.set("final_beta_params", real_vector_json(report.final_beta_params));
    write_text_file(join_path(ctx.out_dir, "train_report.json"), root.dump());

    std::string csv = "epoch,loss\n";
    for (std::size_t i = 0; i < report.loss_trace.size(); ++i)
        csv += std::to_string(i) + "," + format_double(report.loss_trace[i]) + "\n";
    write_text_file(join_path(ctx.out_dir, "loss_trace.csv"), csv);
    return 0;
}

int run_ensemble(const EnsembleJob& job, const ReportContext& ctx) {
    ensemble::EnsembleSpec spec = job.spec;
    spec.seed = ctx.seed;
    const ensemble::BaggingOutcome out = ensemble::run_bagging_demo(spec, job.x, job.observable);
    const bool within = out.abs_diff <= ctx.tolerance;

    JsonValue root = report_header(ctx);
    root.set("d", JsonValue::uinteger(spec.d));
    root.set("tolerance", JsonValue::num(ctx.tolerance));
    root.set("quantum_avg", JsonValue::num(out.quantum_avg));
    root.set("classical_avg", JsonValue::num(out.classical_avg));
    root.set("abs_diff", JsonValue::num(out.abs_diff));
    root.set("within_tolerance", JsonValue::boolean(within));
    JsonValue learners = JsonValue::array();
    for (const ensemble::LearnerRow& row : out.learners) {
        JsonValue r = JsonValue::object();
        r.set("h", JsonValue::uinteger(row.h));
        r.set("angle", JsonValue::num(row.angle));
        r.set("expectation", JsonValue::num(row.expectation));
        learners.push(std::move(r));
    }
    root.set("learners", std::move(learners));
    JsonValue assignment = JsonValue::array();
    for (const ensemble::StepAngles& s : out.assignment) {
        JsonValue r = JsonValue::object();
        r.set("step", JsonValue::uinteger(s.step));
        r.set("on_one", JsonValue::num(s.on_one));
        r.set("on_zero", JsonValue::num(s.on_zero));
        assignment.push(std::move(r));
    }
    root.set("assignment", std::move(assignment));
    write_text_file(join_path(ctx.out_dir, "ensemble_report.json"), root.dump());
    return within ? 0 : 2;
}

int run_verify_appendix(const ReportContext& ctx) {
    AppendixReport report = verify_appendix(ctx.seed);
    const bool passed = report.max_diff <= ctx.tolerance;

    JsonValue root = report_header(ctx);
    root.set("tolerance", JsonValue::num(ctx.tolerance));
    root.set("passed", JsonValue::boolean(passed));
    root.set("max_diff", JsonValue::num(report.max_diff));
    JsonValue blocks = JsonValue::array();
    for (const AppendixBlockCheck& b : report.blocks) {
        JsonValue row = JsonValue::object();
        row.set("h", JsonValue::uinteger(b.h));
        row.set("composition", JsonValue::str(b.composition));
        row.set("max_diff", JsonValue::num(b.max_diff));
        blocks.push(std::move(row));
    }
    root.set("blocks", std::move(blocks));
    write_text_file(join_path(ctx.out_dir, "appendix_report.json"), root.dump());
    return passed ? 0 : 2;
}

MaqaSpec identity_spec(std::size_t d) {
    std::vector<GatePair> pairs;
    pairs.reserve(d);
    for (std::size_t i = 0; i < d; ++i)
        pairs.push_back({UnitaryGate(gates::identity(1)), UnitaryGate(gates::identity(1))});
    return MaqaSpec(d, 1, ensemble::uniform_control_amps(d), {Complex{1.0, 0.0}},
                    std::move(pairs), UnitaryGate(gates::identity(1)),
                    Observable(gates::pauli_z()));
}

int run_resources(const ResourcesJob& job, const ReportContext& ctx) {
    std::string csv = "d,controlled_gates,trajectories,classical_cost\n";
    JsonValue rows = JsonValue::array();
    for (std::size_t d = job.d_min; d <= job.d_max; ++d) {
        const ResourceReport r = count_resources(identity_spec(d), job.params);
        csv += std::to_string(d) + "," + std::to_string(r.controlled_g_applications) + "," +
               std::to_string(r.trajectory_count) + "," +
               format_double(r.classical_cost_model.cost) + "\n";
        JsonValue row = JsonValue::object();
        row.set("d", JsonValue::uinteger(d));
        row.set("resources", resources_json(r));
        rows.push(std::move(row));
    }
    write_text_file(join_path(ctx.out_dir, "resources.csv"), csv);

    JsonValue root = report_header(ctx);
    root.set("d_min", JsonValue::uinteger(job.d_min));
    root.set("d_max", JsonValue::uinteger(job.d_max));
    root.set("rows", std::move(rows));
    write_text_file(join_path(ctx.out_dir, "resources_report.json"), root.dump());
    return 0;
}

}  // namespace

int run_command(const ExperimentConfig& config, const RunOptions& opts) {
    ReportContext ctx;
    ctx.mode = config.mode;
    ctx.seed = resolve_seed(config, opts);
    ctx.tolerance = resolve_tolerance(config, opts);
    ctx.config_hash = config.config_hash.empty()
                          ? hex64(fnv1a64(canonical_config_json(config)))
                          : config.config_hash;
    ctx.out_dir = opts.out_flag ? *opts.out_flag
                                : (config.output_path.empty() ? "." : config.output_path);
    std::filesystem::create_directories(ctx.out_dir);

    if (const auto* agg = std::get_if<AggregateJob>(&config.job)) return run_aggregate(*agg, ctx);
    if (const auto* train = std::get_if<QslpTrainJob>(&config.job))
        return run_qslp_train(*train, ctx);
    if (const auto* ens = std::get_if<EnsembleJob>(&config.job)) return run_ensemble(*ens, ctx);
    if (const auto* res = std::get_if<ResourcesJob>(&config.job)) return run_resources(*res, ctx);
    return run_verify_appendix(ctx);
}

}  // namespace maqa::cli

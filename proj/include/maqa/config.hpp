#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "maqa/engine.hpp"
#include "maqa/ensemble.hpp"
#include "maqa/qslp.hpp"
#include "maqa/report.hpp"

// Experiment configs in, deterministic report files out. Configs are strict
// JSON: unknown fields are rejected and every error names the offending
// field. Matrices are row-major [re, im] pair arrays or named presets
// (I, X, Y, Z, H, Ry(t), Rz(t)); an array of gates means their Kronecker
// product, first factor most significant.

namespace maqa::cli {

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field.empty() ? message : field + ": " + message),
          field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

enum class Mode { VerifyAppendix, Aggregate, QslpTrain, Ensemble, Resources };

std::string mode_name(Mode mode);
Mode mode_from_name(const std::string& name);

struct VerifyAppendixJob {};

struct AggregateJob {
    MaqaSpec spec;
};

struct QslpTrainJob {
    qslp::QslpSpec spec;
    qslp::ToyDataset dataset;
    std::size_t epochs = 1;
    double learning_rate = 0.1;
    double fd_step = 1e-4;
};

struct EnsembleJob {
    ensemble::EnsembleSpec spec;
    std::vector<double> x;
    qsim::Observable observable;
};

struct ResourcesJob {
    std::size_t d_min = 1;
    std::size_t d_max = 8;
    ClassicalParams params;
};

struct ExperimentConfig {
    Mode mode = Mode::VerifyAppendix;
    std::optional<std::uint64_t> seed;
    std::optional<double> tolerance;
    std::string output_path;  // empty = current directory unless overridden
    std::string config_hash;  // FNV-1a of the config source bytes
    std::variant<VerifyAppendixJob, AggregateJob, QslpTrainJob, EnsembleJob, ResourcesJob>
        job = VerifyAppendixJob{};
};

/// Parse and schema-validate a config file. Dataset paths are resolved
/// relative to the config file's directory.
ExperimentConfig parse_config(const std::string& path);

/// Same, from an in-memory string; source_name is used in error messages and
/// relative-path resolution.
ExperimentConfig parse_config_text(const std::string& text, const std::string& source_name);

/// Fully expanded, preset-free form; parse_config_text on the result yields a
/// structurally identical config that re-emits the same bytes.
std::string canonical_config_json(const ExperimentConfig& config);

/// Rows of "x1,...,xk,label" with binary labels; errors carry line numbers.
qslp::ToyDataset parse_dataset_csv(const std::string& text, const std::string& source_name);

struct RunOptions {
    std::optional<std::uint64_t> seed_flag;
    std::optional<std::uint64_t> seed_env;
    std::optional<double> tolerance_flag;
    std::optional<std::string> out_flag;
};

struct ReportContext {
    Mode mode = Mode::Aggregate;
    std::uint64_t seed = 0;
    std::string config_hash;
    double tolerance = 1e-9;
    std::string out_dir;
};

std::uint64_t resolve_seed(const ExperimentConfig& config, const RunOptions& opts);
double resolve_tolerance(const ExperimentConfig& config, const RunOptions& opts);
double default_tolerance(Mode mode);

/// Write the aggregate report and gate the quantum/oracle difference:
/// returns 0 when abs_diff <= tolerance, 2 otherwise.
int finish_aggregate(const AggregateResult& result, const ResourceReport& resources,
                     std::size_t d, std::size_t n, const ReportContext& ctx);

/// Dispatch one config: writes the mode's report files into the resolved
/// output directory. Returns 0 on success, 2 on a tolerance breach;
/// validation and I/O problems throw.
int run_command(const ExperimentConfig& config, const RunOptions& opts = {});

}  // namespace maqa::cli

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "maqa/config.hpp"

// maqa: run aggregation experiments from JSON configs and write
// machine-readable reports. Exit codes: 0 success, 1 validation/I-O failure,
// 2 tolerance breach in a verification mode.

namespace {

std::optional<std::uint64_t> env_seed() {
    const char* raw = std::getenv("MAQA_SEED");
    if (raw == nullptr || *raw == '\0') return std::nullopt;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(raw, &end, 10);
    if (end == raw || *end != '\0') return std::nullopt;
    return static_cast<std::uint64_t>(v);
}

// "3" or "1..8"
bool parse_d_range(const std::string& text, std::size_t& lo, std::size_t& hi) {
    const auto dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            lo = hi = std::stoul(text);
        } else {
            lo = std::stoul(text.substr(0, dots));
            hi = std::stoul(text.substr(dots + 2));
        }
    } catch (const std::exception&) {
        return false;
    }
    return lo <= hi;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MAQA statevector experiment runner"};
    app.require_subcommand(0, 1);
    app.fallthrough();  // global flags remain valid after a subcommand name

    std::string config_path;
    std::string mode_flag;
    std::string out_dir;
    std::uint64_t seed_flag = 0;
    double tolerance_flag = 0.0;
    app.add_option("--config", config_path, "experiment config (JSON)");
    app.add_option("--mode", mode_flag,
                   "aggregate | qslp-train | ensemble | verify-appendix | resources");
    auto* seed_opt = app.add_option("--seed", seed_flag, "seed override (u64)");
    auto* out_opt = app.add_option("--out", out_dir, "output directory for reports");
    auto* tol_opt =
        app.add_option("--tolerance", tolerance_flag, "tolerance override (default 1e-9)");

    std::string d_range = "1..8";
    double res_samples = 100.0;
    double res_features = 2.0;
    double res_alpha = 1.0;
    double res_beta = 1.0;

    CLI::App* verify = app.add_subcommand("verify-appendix", "run the built-in d=3 golden check");
    CLI::App* resources = app.add_subcommand("resources", "tabulate gate counts over a d range");
    resources->add_option("--d", d_range, "single d or range, e.g. 3 or 1..8");
    resources->add_option("--N", res_samples, "classical dataset size");
    resources->add_option("--p", res_features, "classical feature count");
    resources->add_option("--alpha", res_alpha, "classical sample exponent");
    resources->add_option("--beta", res_beta, "classical feature exponent");
    CLI::App* aggregate = app.add_subcommand("aggregate", "run one aggregation experiment");
    CLI::App* qslp = app.add_subcommand("qslp-train", "train the perceptron instantiation");
    CLI::App* ensemble_cmd = app.add_subcommand("ensemble", "run the bagging average demo");

    CLI11_PARSE(app, argc, argv);

    std::string mode_request = mode_flag;
    for (const CLI::App* sub : {verify, resources, aggregate, qslp, ensemble_cmd})
        if (sub->parsed()) {
            if (!mode_request.empty() && mode_request != sub->get_name()) {
                std::cerr << "error: --mode disagrees with subcommand\n";
                return 1;
            }
            mode_request = sub->get_name();
        }

    try {
        maqa::cli::ExperimentConfig config;
        if (!config_path.empty()) {
            config = maqa::cli::parse_config(config_path);
            if (!mode_request.empty() &&
                maqa::cli::mode_from_name(mode_request) != config.mode)
                throw maqa::cli::ConfigError("mode", "config mode '" +
                                                         maqa::cli::mode_name(config.mode) +
                                                         "' does not match the requested '" +
                                                         mode_request + "'");
        } else {
            if (mode_request.empty())
                throw maqa::cli::ConfigError("", "nothing to do: pass --config or a mode");
            const maqa::cli::Mode mode = maqa::cli::mode_from_name(mode_request);
            if (mode == maqa::cli::Mode::VerifyAppendix) {
                config.mode = mode;
            } else if (mode == maqa::cli::Mode::Resources) {
                config.mode = mode;
                maqa::cli::ResourcesJob job;
                if (!parse_d_range(d_range, job.d_min, job.d_max))
                    throw maqa::cli::ConfigError("--d", "expected '<lo>..<hi>' or a single value");
                if (job.d_max > 12)
                    throw maqa::cli::ConfigError("--d", "d larger than 12 is not supported");
                job.params = {res_samples, res_features, res_alpha, res_beta};
                if (res_alpha < 1.0 || res_beta < 1.0)
                    throw maqa::cli::ConfigError("--alpha", "cost exponents must be >= 1");
                config.job = job;
            } else {
                throw maqa::cli::ConfigError("", "mode '" + mode_request + "' needs --config");
            }
            config.config_hash =
                maqa::cli::hex64(maqa::cli::fnv1a64(maqa::cli::canonical_config_json(config)));
        }

        maqa::cli::RunOptions opts;
        if (seed_opt->count() > 0) opts.seed_flag = seed_flag;
        opts.seed_env = env_seed();
        if (tol_opt->count() > 0) {
            if (tolerance_flag <= 0.0)
                throw maqa::cli::ConfigError("--tolerance", "must be positive");
            opts.tolerance_flag = tolerance_flag;
        }
        if (out_opt->count() > 0) opts.out_flag = out_dir;

        const int code = maqa::cli::run_command(config, opts);
        if (code == 0)
            std::cout << maqa::cli::mode_name(config.mode) << ": ok\n";
        else
            std::cerr << maqa::cli::mode_name(config.mode) << ": tolerance breach\n";
        return code;
    } catch (const maqa::cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

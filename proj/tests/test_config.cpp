#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <filesystem>

#include "maqa/config.hpp"

using namespace maqa;
using namespace maqa::cli;

namespace {

const char* kMinimalAggregate = R"json({
  "mode": "aggregate",
  "seed": 7,
  "spec": {
    "d": 1,
    "n": 1,
    "beta_amps": "uniform",
    "x_raw": [0.6, 0.8],
    "gate_pairs": [["I", "I"]],
    "observable": "Z"
  }
})json";

std::filesystem::path fresh_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("maqa_cfg_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("minimal identity config parses and reproduces the plain expectation") {
    const ExperimentConfig config = parse_config_text(kMinimalAggregate, "<memory>");
    REQUIRE(config.mode == Mode::Aggregate);
    REQUIRE(config.seed.has_value());
    CHECK(*config.seed == 7);

    const auto& job = std::get<AggregateJob>(config.job);
    const RunOutput out = run_maqa(job.spec);
    CHECK(out.aggregate.quantum_value == doctest::Approx(-0.28).epsilon(1e-12));
    CHECK(out.aggregate.abs_diff <= 1e-12);
}

TEST_CASE("non-unitary gate entries are rejected by field name") {
    const std::string config = R"json({
      "mode": "aggregate",
      "spec": {
        "d": 1, "n": 1,
        "beta_amps": "uniform",
        "x_raw": [1.0],
        "gate_pairs": [[{"qubits": 1, "matrix": [[2,0],[0,0],[0,0],[2,0]]}, "I"]],
        "observable": "Z"
      }
    })json";
    try {
        parse_config_text(config, "<memory>");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "spec.gate_pairs[0][0]");
        CHECK(std::string(e.what()).find("not unitary") != std::string::npos);
    }
}

TEST_CASE("unknown fields are rejected") {
    CHECK_THROWS_AS(parse_config_text(R"json({"mode": "verify-appendix", "extra": 1})json", "<memory>"),
                    ConfigError);
    CHECK_THROWS_AS(
        parse_config_text(R"json({"mode": "verify-appendix", "spec": {"stray": true}})json", "<memory>"),
        ConfigError);
}

TEST_CASE("malformed syntax carries the parser position") {
    try {
        parse_config_text("{\n  \"mode\": \"aggregate\",\n  !\n}", "bad.json");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("bad.json") != std::string::npos);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("gate grammar") {
    SUBCASE("rotation presets parse their angle") {
        const std::string config = R"json({
          "mode": "aggregate",
          "spec": {
            "d": 1, "n": 1,
            "beta_amps": "uniform",
            "x_raw": [1.0],
            "gate_pairs": [["Ry(0.7)", "Rz(-0.25)"]],
            "observable": "Z"
          }
        })json";
        const auto cfg = parse_config_text(config, "<memory>");
        const auto& spec = std::get<AggregateJob>(cfg.job).spec;
        const auto want = gates::ry(0.7);
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(std::abs(spec.gate_pairs[0].on_one.matrix().a[i] - want.a[i]) == 0.0);
    }

    SUBCASE("gate lists mean kronecker products") {
        const std::string config = R"json({
          "mode": "aggregate",
          "spec": {
            "d": 1, "n": 2,
            "beta_amps": "uniform",
            "x_raw": [1.0],
            "gate_pairs": [[["H", "I"], ["I", "X"]]],
            "observable": ["Z", "Z"]
          }
        })json";
        const auto cfg = parse_config_text(config, "<memory>");
        const auto& spec = std::get<AggregateJob>(cfg.job).spec;
        const auto want = qsim::kron(gates::hadamard(), gates::identity(1));
        for (std::size_t i = 0; i < 16; ++i)
            CHECK(std::abs(spec.gate_pairs[0].on_one.matrix().a[i] - want.a[i]) == 0.0);
    }

    SUBCASE("bad presets and bad angles are named") {
        CHECK_THROWS_AS(parse_config_text(R"json({
          "mode": "aggregate",
          "spec": {"d": 1, "n": 1, "beta_amps": "uniform", "x_raw": [1.0],
                   "gate_pairs": [["Q", "I"]], "observable": "Z"}})json",
                                          "<memory>"),
                        ConfigError);
        CHECK_THROWS_AS(parse_config_text(R"json({
          "mode": "aggregate",
          "spec": {"d": 1, "n": 1, "beta_amps": "uniform", "x_raw": [1.0],
                   "gate_pairs": [["Ry(x)", "I"]], "observable": "Z"}})json",
                                          "<memory>"),
                        ConfigError);
    }

    SUBCASE("non-hermitian observables are rejected") {
        CHECK_THROWS_AS(parse_config_text(R"json({
          "mode": "aggregate",
          "spec": {"d": 1, "n": 1, "beta_amps": "uniform", "x_raw": [1.0],
                   "gate_pairs": [["I", "I"]], "observable": "Ry(0.4)"}})json",
                                          "<memory>"),
                        ConfigError);
    }

    SUBCASE("beta amplitudes must be unit norm") {
        CHECK_THROWS_AS(parse_config_text(R"json({
          "mode": "aggregate",
          "spec": {"d": 1, "n": 1, "beta_amps": [[1,0],[1,0]], "x_raw": [1.0],
                   "gate_pairs": [["I", "I"]], "observable": "Z"}})json",
                                          "<memory>"),
                        ConfigError);
    }
}

TEST_CASE("canonical config round-trips byte for byte") {
    SUBCASE("aggregate") {
        const ExperimentConfig config = parse_config_text(kMinimalAggregate, "<memory>");
        const std::string canonical = canonical_config_json(config);
        const ExperimentConfig reparsed = parse_config_text(canonical, "<memory>");
        CHECK(canonical_config_json(reparsed) == canonical);
    }

    SUBCASE("qslp-train with an inline dataset") {
        const std::string config = R"json({
          "mode": "qslp-train",
          "seed": 3,
          "spec": {
            "d": 2, "n": 1, "epochs": 5, "learning_rate": 0.25, "fd_step": 1e-4,
            "dataset": {"points": [
              {"x": [1.0, 0.1], "label": 0},
              {"x": [0.1, 1.0], "label": 1}
            ]}
          }
        })json";
        const ExperimentConfig parsed = parse_config_text(config, "<memory>");
        const std::string canonical = canonical_config_json(parsed);
        CHECK(canonical_config_json(parse_config_text(canonical, "<memory>")) == canonical);
    }

    SUBCASE("ensemble") {
        const std::string config = R"json({
          "mode": "ensemble",
          "spec": {"d": 1, "weak_learner_angles": [0.0, 1.5], "x": [0.6, 0.8],
                   "observable": {"qubits": 1, "matrix": [[0,0],[0,0],[0,0],[1,0]]}}
        })json";
        const ExperimentConfig parsed = parse_config_text(config, "<memory>");
        const std::string canonical = canonical_config_json(parsed);
        CHECK(canonical_config_json(parse_config_text(canonical, "<memory>")) == canonical);
    }
}

TEST_CASE("dataset csv parsing") {
    SUBCASE("plain rows with comments") {
        const auto data = parse_dataset_csv("# toy\n1.0,0.1,0\n0.2,0.9,1\n\n", "toy.csv");
        REQUIRE(data.points.size() == 2);
        CHECK(data.points[0].x == std::vector<double>{1.0, 0.1});
        CHECK(data.points[1].label == 1.0);
    }

    SUBCASE("bad number is reported with its line") {
        try {
            parse_dataset_csv("1.0,0.1,0\n1.0,oops,1\n", "toy.csv");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.field() == "toy.csv:2");
        }
    }

    SUBCASE("non-binary labels are rejected") {
        CHECK_THROWS_AS(parse_dataset_csv("1.0,0.3\n", "toy.csv"), ConfigError);
        CHECK_THROWS_AS(parse_dataset_csv("1.0\n", "toy.csv"), ConfigError);
    }
}

TEST_CASE("report serialization is stable") {
    SUBCASE("doubles keep 17 significant digits") {
        CHECK(format_double(0.1) == "0.10000000000000001");
        CHECK(format_double(1.0) == "1.0");
        CHECK(format_double(-0.28) == "-0.28000000000000003");
    }

    SUBCASE("fnv1a64 matches the reference vectors") {
        CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
        CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
        CHECK(hex64(0xcbf29ce484222325ULL) == "cbf29ce484222325");
    }

    SUBCASE("json writer emits ordered members") {
        JsonValue obj = JsonValue::object();
        obj.set("b", JsonValue::integer(1));
        obj.set("a", JsonValue::num(0.5));
        CHECK(obj.dump() == "{\n  \"b\": 1,\n  \"a\": 0.5\n}\n");
    }
}

TEST_CASE("a corrupted oracle value trips the tolerance gate") {
    MaqaSpec spec = random_maqa_spec(2, 1, 301);
    RunOutput out = run_maqa(spec);
    REQUIRE(out.aggregate.abs_diff <= 1e-9);

    AggregateResult corrupted = out.aggregate;
    corrupted.oracle_value += 1.0;
    corrupted.abs_diff = std::abs(corrupted.quantum_value - corrupted.oracle_value);

    const auto dir = fresh_dir("corrupt");
    ReportContext ctx;
    ctx.mode = Mode::Aggregate;
    ctx.seed = 301;
    ctx.config_hash = "deadbeefdeadbeef";
    ctx.tolerance = 1e-9;
    ctx.out_dir = dir.string();

    CHECK(finish_aggregate(out.aggregate, out.resources, 2, 1, ctx) == 0);
    CHECK(finish_aggregate(corrupted, out.resources, 2, 1, ctx) == 2);

    const auto report = nlohmann::json::parse(read_text_file((dir / "aggregate_report.json").string()));
    CHECK(report.at("within_tolerance").get<bool>() == false);
    CHECK(report.at("config_hash").get<std::string>() == "deadbeefdeadbeef");
    std::filesystem::remove_all(dir);
}

TEST_CASE("run_command writes byte-identical reports for identical inputs") {
    const ExperimentConfig config = parse_config_text(kMinimalAggregate, "<memory>");
    const auto dir_a = fresh_dir("rep_a");
    const auto dir_b = fresh_dir("rep_b");
    RunOptions opts;
    opts.out_flag = dir_a.string();
    CHECK(run_command(config, opts) == 0);
    opts.out_flag = dir_b.string();
    CHECK(run_command(config, opts) == 0);
    CHECK(read_text_file((dir_a / "aggregate_report.json").string()) ==
          read_text_file((dir_b / "aggregate_report.json").string()));
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
}

TEST_CASE("seed and tolerance resolution order") {
    ExperimentConfig config = parse_config_text(kMinimalAggregate, "<memory>");
    RunOptions opts;
    CHECK(resolve_seed(config, opts) == 7);  // from the config
    opts.seed_env = 11;
    CHECK(resolve_seed(config, opts) == 7);  // config beats env
    opts.seed_flag = 13;
    CHECK(resolve_seed(config, opts) == 13);  // flag beats config
    config.seed.reset();
    opts.seed_flag.reset();
    CHECK(resolve_seed(config, opts) == 11);  // env as fallback

    CHECK(resolve_tolerance(config, opts) == 1e-9);
    config.tolerance = 1e-7;
    CHECK(resolve_tolerance(config, opts) == 1e-7);
    opts.tolerance_flag = 1e-5;
    CHECK(resolve_tolerance(config, opts) == 1e-5);
    CHECK(default_tolerance(Mode::VerifyAppendix) == 1e-12);
    CHECK(default_tolerance(Mode::Ensemble) == 1e-10);
}

TEST_CASE("mode names round-trip and bad names are caught") {
    for (Mode mode : {Mode::VerifyAppendix, Mode::Aggregate, Mode::QslpTrain, Mode::Ensemble,
                      Mode::Resources})
        CHECK(mode_from_name(mode_name(mode)) == mode);
    CHECK_THROWS_AS(mode_from_name("bogus"), ConfigError);
}

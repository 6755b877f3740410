#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "muntz/experiment.hpp"

using namespace muntz;
using namespace muntz::cli;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("muntz_test_" + name);
    fs::remove_all(dir);
    return dir;
}

RunRecord fake(const std::string& experiment, std::optional<std::size_t> n, double value, Verdict v) {
    RunRecord r;
    r.experiment = experiment;
    r.n = n;
    r.value = value;
    r.bound = 0.5;
    r.verdict = v;
    return r;
}

}  // namespace

TEST(ParseConfig, DefaultsFilled) {
    const ExperimentConfig cfg = parse_config(R"({"experiment": "bernstein", "n": 2, "eps": 0.1})");
    EXPECT_EQ(cfg.experiment, Experiment::bernstein);
    EXPECT_EQ(cfg.n, 2u);
    EXPECT_EQ(cfg.eps, 0.1);
    EXPECT_EQ(cfg.seed, kDefaultSeed);
    EXPECT_EQ(cfg.starts, 32u);
    EXPECT_EQ(cfg.evals_per_start, 10000u);
    EXPECT_EQ(cfg.workers, 1u);
    EXPECT_EQ(cfg.rule, ExponentRule::geometric(1.0, 2.0, 64));
    EXPECT_FALSE(cfg.rho.has_value());
}

TEST(ParseConfig, PerExperimentDefaults) {
    EXPECT_EQ(parse_config(R"({"experiment": "hq-bound"})").samples, 500u);
    EXPECT_EQ(parse_config(R"({"experiment": "volterra-essential"})").samples, 1000u);
    EXPECT_EQ(parse_config(R"({"experiment": "newman"})").n, 4u);
    EXPECT_EQ(parse_config(R"({"experiment": "hq-bound", "weight": "x"})").variant, "R1");
}

TEST(ParseConfig, UnknownExperiment) {
    try {
        parse_config(R"({"experiment": "frobnicate"})");
        FAIL();
    } catch (const ConfigError& ex) {
        EXPECT_EQ(ex.keys(), std::vector<std::string>{"experiment"});
    }
}

TEST(ParseConfig, RhoOutsideUnitInterval) {
    try {
        parse_config(R"({"experiment": "hq-bound", "rho": 1.5})");
        FAIL();
    } catch (const ConfigError& ex) {
        EXPECT_EQ(ex.keys(), std::vector<std::string>{"rho"});
    }
}

TEST(ParseConfig, ListsEveryOffendingKey) {
    try {
        parse_config(R"({"experiment": "hq-bound", "samples": 0, "trials": -3, "bogus": 1, "eps": 2,
                         "rule": {"kind": "geometric", "parameters": {"base": 1, "ratio": 0.5}, "length": 4}})");
        FAIL();
    } catch (const ConfigError& ex) {
        auto keys = ex.keys();
        std::sort(keys.begin(), keys.end());
        EXPECT_EQ(keys, (std::vector<std::string>{"bogus", "eps", "rule", "samples", "trials"}));
    }
}

TEST(ParseConfig, MalformedText) {
    EXPECT_THROW(parse_config("{experiment: bernstein"), ConfigError);
    EXPECT_THROW(parse_config("[1, 2]"), ConfigError);
    EXPECT_THROW(parse_config("{}"), ConfigError);
}

TEST(ParseConfig, RoundTripIsLossless) {
    const std::vector<std::string> sources = {
        R"({"experiment": "hq-bound", "rho": 0.95, "c": 0.8, "weight": "x", "seed": 7, "workers": 3})",
        R"({"experiment": "bernstein", "op": "cesaro", "n": 3,
            "rule": {"kind": "power", "parameters": {"p": 2.5}, "length": 30}})",
        R"({"experiment": "newman", "rule": {"kind": "explicit", "parameters": {"values": [1, 200, 90000]}}, "use_pool": true})",
        R"({"experiment": "composition-demo", "theta": "identity", "alpha": 0.5, "n_max": 4096, "output_dir": "x/y"})",
    };
    for (const std::string& src : sources) {
        const ExperimentConfig cfg = parse_config(src);
        const ExperimentConfig again = parse_config(to_json(cfg).dump());
        EXPECT_EQ(again, cfg) << src;
        EXPECT_EQ(to_json(again), to_json(cfg));
    }
}

TEST(ConfigHash, InsensitiveToLayout) {
    const auto a = parse_config(R"({"experiment": "bernstein", "n": 2, "eps": 0.1})");
    const auto b = parse_config("{\n  \"eps\" : 0.1,\n\t\"n\":2, \"experiment\":\"bernstein\"}");
    EXPECT_EQ(config_hash(a), config_hash(b));
    EXPECT_EQ(config_hash(a).size(), 16u);
}

TEST(ConfigHash, ChangesIffSemanticFieldChanges) {
    const ExperimentConfig base = parse_config(R"({"experiment": "bernstein"})");
    const std::string h = config_hash(base);
    auto changed = [&](auto mutate) {
        ExperimentConfig c = base;
        mutate(c);
        return config_hash(c) != h;
    };
    EXPECT_TRUE(changed([](auto& c) { c.eps = 0.2; }));
    EXPECT_TRUE(changed([](auto& c) { c.n = 3; }));
    EXPECT_TRUE(changed([](auto& c) { c.seed = 1; }));
    EXPECT_TRUE(changed([](auto& c) { c.rho = 0.5; }));
    EXPECT_TRUE(changed([](auto& c) { c.op = "cesaro"; }));
    EXPECT_TRUE(changed([](auto& c) { c.starts = 4; }));
    EXPECT_TRUE(changed([](auto& c) { c.rule = ExponentRule::geometric(1.0, 3.0, 64); }));
    EXPECT_TRUE(changed([](auto& c) { c.experiment = Experiment::newman; }));
    EXPECT_FALSE(changed([](auto& c) { c.workers = 8; }));
    EXPECT_FALSE(changed([](auto& c) { c.output_dir = "/elsewhere"; }));
}

TEST(RunExperiment, Examples) {
    const RunRecord v = execute_experiment(parse_config(R"({"experiment": "volterra-essential"})"));
    EXPECT_EQ(v.verdict, Verdict::pass);
    EXPECT_NEAR(v.outputs.at("lower_bound").get<double>(), 0.5, 0.02);
    EXPECT_LE(v.outputs.at("sampled_gap").get<double>(), 0.5 + 1e-9);

    const RunRecord b = execute_experiment(parse_config(R"({"experiment": "bernstein", "n": 1})"));
    EXPECT_EQ(b.verdict, Verdict::pass);
    EXPECT_NEAR(b.value, 1.0, 1e-6);
    EXPECT_EQ(b.n, 1u);

    const RunRecord c = execute_experiment(parse_config(R"({"experiment": "composition-demo"})"));
    EXPECT_EQ(c.verdict, Verdict::pass);
    EXPECT_NEAR(c.value, 1.0, 0.02);
}

TEST(RunExperiment, ModuleErrorsBecomeErrorVerdict) {
    const RunRecord r = execute_experiment(parse_config(
        R"({"experiment": "newman", "n": 6, "use_pool": true,
            "rule": {"kind": "geometric", "parameters": {"base": 1, "ratio": 2}, "length": 10}})"));
    EXPECT_EQ(r.verdict, Verdict::error);
    EXPECT_NE(r.outputs.at("error").get<std::string>().find("pool exhausted"), std::string::npos);
    EXPECT_EQ(exit_code(r.verdict), 2);
    EXPECT_EQ(exit_code(Verdict::pass), 0);
    EXPECT_EQ(exit_code(Verdict::fail), 1);
}

TEST(RunExperiment, PersistsRecordCsvAndIndex) {
    const fs::path dir = fresh_dir("persist");
    ExperimentConfig cfg = parse_config(R"({"experiment": "newman", "trials": 50})");
    cfg.output_dir = dir.string();
    const RunRecord r1 = run_experiment(cfg);
    const RunRecord r2 = run_experiment(cfg);
    const fs::path run_dir = dir / r1.config_hash.substr(0, 12);
    ASSERT_TRUE(fs::exists(run_dir / "record.json"));
    ASSERT_TRUE(fs::exists(run_dir / "data.csv"));
    std::ifstream index(dir / "index.jsonl");
    std::size_t lines = 0;
    for (std::string line; std::getline(index, line);) {
        const RunRecord back = record_from_json(json::parse(line));
        EXPECT_EQ(back.config_hash, r1.config_hash);
        EXPECT_EQ(back.outputs, r1.outputs);
        ++lines;
    }
    EXPECT_EQ(lines, 2u);
    std::ifstream rec(run_dir / "record.json");
    EXPECT_EQ(record_from_json(json::parse(rec)).payload(), r2.payload());
    fs::remove_all(dir);
}

TEST(RunExperiment, OutputDirFromEnvironment) {
    const fs::path dir = fresh_dir("env");
    ::setenv(kOutputDirEnv, dir.c_str(), 1);
    const ExperimentConfig cfg = parse_config(R"({"experiment": "newman", "trials": 10})");
    EXPECT_EQ(resolve_output_dir(cfg), dir);
    run_experiment(cfg);
    EXPECT_TRUE(fs::exists(dir / "index.jsonl"));
    ExperimentConfig explicit_dir = cfg;
    explicit_dir.output_dir = "/tmp/other";
    EXPECT_EQ(resolve_output_dir(explicit_dir), fs::path("/tmp/other"));
    ::unsetenv(kOutputDirEnv);
    EXPECT_EQ(resolve_output_dir(cfg), fs::path(kDefaultOutputDir));
    fs::remove_all(dir);
}

TEST(EmitReport, SingleBernsteinRecord) {
    const std::string csv = emit_report({fake("bernstein", 2, 1.0 / 3.0, Verdict::pass)}, ReportFormat::csv);
    EXPECT_EQ(csv, "experiment,n,value,bound,verdict\nbernstein,2,0.333333333333,0.5,pass\n");
}

TEST(EmitReport, SortedByExperimentThenN) {
    const std::vector<RunRecord> records = {
        fake("newman", 4, 0.98, Verdict::pass),       fake("bernstein", 3, 0.2, Verdict::pass),
        fake("bernstein", 1, 1.0, Verdict::pass),     fake("volterra-essential", std::nullopt, 0.5, Verdict::pass),
        fake("cesaro-essential", std::nullopt, 0.5, Verdict::fail),
    };
    const std::string csv = emit_report(records, ReportFormat::csv);
    EXPECT_EQ(csv,
              "experiment,n,value,bound,verdict\n"
              "bernstein,1,1,0.5,pass\n"
              "bernstein,3,0.2,0.5,pass\n"
              "cesaro-essential,,0.5,0.5,fail\n"
              "newman,4,0.98,0.5,pass\n"
              "volterra-essential,,0.5,0.5,pass\n");
    EXPECT_EQ(csv.find('\r'), std::string::npos);
}

TEST(EmitReport, EmptyCsvIsError) {
    EXPECT_THROW(emit_report({}, ReportFormat::csv), std::invalid_argument);
    EXPECT_EQ(json::parse(emit_report({}, ReportFormat::json)), json::array());
}

TEST(EmitReport, JsonIsArrayOfRecords) {
    const auto doc = json::parse(emit_report({fake("newman", 4, 0.98, Verdict::pass)}, ReportFormat::json));
    ASSERT_TRUE(doc.is_array());
    EXPECT_EQ(doc[0].at("experiment"), "newman");
    EXPECT_EQ(doc[0].at("verdict"), "pass");
}

TEST(Serialization, Shapes) {
    const MuntzPoly f{{0.5, 2.0}, {3.0, -1.0}};
    EXPECT_EQ(to_json(f), json::parse(R"([{"exponent":0.5,"coefficient":2.0},{"exponent":3.0,"coefficient":-1.0}])"));
    EXPECT_EQ(poly_from_json(to_json(f)), f);
    EXPECT_EQ(to_json(ExponentRule::geometric(1.0, 2.0, 8)),
              json::parse(R"({"kind":"geometric","parameters":{"base":1.0,"ratio":2.0},"length":8})"));
    for (const ExponentRule& r : {ExponentRule::geometric(0.5, 3.0, 5), ExponentRule::power(1.5, 9),
                                  ExponentRule::explicit_list({0.0, 2.0, 9.5})}) {
        EXPECT_EQ(rule_from_json(to_json(r)), r);
    }
    const json n = to_json(NormResult{1.0, 0.5, 1e-16});
    EXPECT_EQ(n.at("value"), 1.0);
    EXPECT_EQ(n.at("argmax"), 0.5);
    EXPECT_TRUE(to_json(NormResult{0.25, std::nullopt, 0.0}).at("argmax").is_null());
}

// --- properties --------------------------------------------------------------

TEST(ExperimentProperty, PayloadIdenticalAcrossWorkerCounts) {
    const std::vector<std::string> sources = {
        R"({"experiment": "volterra-essential", "samples": 300})",
        R"({"experiment": "cesaro-essential", "samples": 300})",
        R"({"experiment": "hq-bound", "samples": 200})",
        R"({"experiment": "hq-bound", "samples": 200, "weight": "x"})",
        R"({"experiment": "bernstein", "n": 2, "starts": 8, "evals_per_start": 1000})",
        R"({"experiment": "newman", "trials": 200})",
        R"({"experiment": "composition-demo"})",
    };
    for (const std::string& src : sources) {
        ExperimentConfig cfg = parse_config(src);
        std::optional<std::string> first;
        for (unsigned w : {1u, 2u, 8u}) {
            cfg.workers = w;
            const RunRecord r = execute_experiment(cfg);
            EXPECT_NE(r.verdict, Verdict::error) << src;
            if (!first) first = r.payload();
            EXPECT_EQ(r.payload(), *first) << src << " workers " << w;
            EXPECT_EQ(r.config_hash, config_hash(parse_config(src)));
        }
    }
}

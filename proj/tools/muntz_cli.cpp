// muntz_cli: run experiments, persist records, render reports.
//
//   muntz_cli <experiment> [--key value ...]
//   muntz_cli run --config cfg.json [--key value ...]
//   muntz_cli report [--format json|csv] record.json ...
//
// Exit status: 0 pass, 1 fail, 2 error.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "muntz/experiment.hpp"

namespace {

using muntz::json;
namespace mc = muntz::cli;

// Keys whose values are always strings, even when they look like numbers.
bool is_string_key(const std::string& key) {
    return key == "op" || key == "weight" || key == "variant" || key == "theta" || key == "output_dir" ||
           key == "experiment";
}

std::string flag_name(const std::string& key) {
    std::string out = key;
    for (char& ch : out) {
        if (ch == '_') ch = '-';
    }
    return "--" + out;
}

struct Overrides {
    std::map<std::string, std::string> raw;

    void attach(CLI::App& app) {
        for (const std::string& key : mc::config_keys()) {
            if (key == "experiment") continue;
            app.add_option_function<std::string>(
                flag_name(key), [this, key](const std::string& v) { raw[key] = v; },
                "overrides config key '" + key + "'");
        }
    }

    void apply(json& doc) const {
        for (const auto& [key, text] : raw) {
            if (is_string_key(key)) {
                doc[key] = text;
                continue;
            }
            json value = json::parse(text, nullptr, false);
            doc[key] = value.is_discarded() ? json(text) : value;
        }
    }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_config(json doc, bool quiet) {
    mc::ExperimentConfig cfg;
    try {
        cfg = mc::config_from_json(doc);
    } catch (const mc::ConfigError& ex) {
        std::cerr << ex.what() << '\n';
        return 2;
    }
    const mc::RunRecord rec = mc::execute_experiment(cfg);
    const auto dir = mc::resolve_output_dir(cfg);
    try {
        const auto run_dir = mc::persist_record(rec, dir);
        if (!quiet) std::cerr << "record: " << (run_dir / "record.json").string() << '\n';
    } catch (const std::exception& ex) {
        std::cerr << ex.what() << '\n';
        return 2;
    }
    std::cout << mc::to_json(rec).dump(2) << '\n';
    if (rec.verdict == mc::Verdict::error) std::cerr << "error: " << rec.outputs.value("error", "") << '\n';
    return mc::exit_code(rec.verdict);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Muntz-space operator experiments"};
    app.require_subcommand(1);
    bool quiet = false;
    app.add_flag("-q,--quiet", quiet, "suppress progress notes on stderr");

    std::vector<Overrides> per_experiment(mc::experiment_names().size());
    std::vector<CLI::App*> experiment_cmds;
    for (std::size_t i = 0; i < mc::experiment_names().size(); ++i) {
        const std::string& name = mc::experiment_names()[i].second;
        CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
        per_experiment[i].attach(*sub);
        experiment_cmds.push_back(sub);
    }

    CLI::App* run = app.add_subcommand("run", "run the experiment described by a JSON config");
    std::string config_path;
    run->add_option("--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
    Overrides run_overrides;
    run_overrides.attach(*run);

    CLI::App* report = app.add_subcommand("report", "render records as json or csv");
    std::string format = "csv";
    std::vector<std::string> record_paths;
    report->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    report->add_option("records", record_paths, "record.json files or index.jsonl files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& ex) {
        const int code = app.exit(ex);
        return code == 0 ? 0 : 2;
    }

    try {
        for (std::size_t i = 0; i < experiment_cmds.size(); ++i) {
            if (!experiment_cmds[i]->parsed()) continue;
            json doc = {{"experiment", mc::experiment_names()[i].second}};
            per_experiment[i].apply(doc);
            return run_config(doc, quiet);
        }
        if (run->parsed()) {
            json doc = json::parse(read_file(config_path), nullptr, false);
            if (doc.is_discarded()) {
                std::cerr << "invalid config:\n  <document>: malformed JSON in " << config_path << '\n';
                return 2;
            }
            run_overrides.apply(doc);
            return run_config(doc, quiet);
        }
        if (report->parsed()) {
            std::vector<mc::RunRecord> records;
            for (const std::string& path : record_paths) {
                std::istringstream lines(read_file(path));
                if (path.ends_with(".jsonl")) {
                    for (std::string line; std::getline(lines, line);) {
                        if (!line.empty()) records.push_back(mc::record_from_json(json::parse(line)));
                    }
                } else {
                    records.push_back(mc::record_from_json(json::parse(lines.str())));
                }
            }
            std::cout << mc::emit_report(records, format == "json" ? mc::ReportFormat::json : mc::ReportFormat::csv);
            return 0;
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 2;
    }
    return 2;
}

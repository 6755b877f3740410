#pragma once

// Experiment runner: config parsing and hashing, dispatch to the numerical
// modules, run records on disk, and json/csv reports.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "muntz/bernstein.hpp"
#include "muntz/essential.hpp"
#include "muntz/serialize.hpp"

namespace muntz::cli {

enum class Experiment { volterra_essential, cesaro_essential, hq_bound, bernstein, newman, composition_demo };

inline const std::vector<std::pair<Experiment, std::string>>& experiment_names() {
    static const std::vector<std::pair<Experiment, std::string>> names = {
        {Experiment::volterra_essential, "volterra-essential"},
        {Experiment::cesaro_essential, "cesaro-essential"},
        {Experiment::hq_bound, "hq-bound"},
        {Experiment::bernstein, "bernstein"},
        {Experiment::newman, "newman"},
        {Experiment::composition_demo, "composition-demo"},
    };
    return names;
}

inline std::string to_string(Experiment e) {
    for (const auto& [tag, name] : experiment_names()) {
        if (tag == e) return name;
    }
    return "unknown";
}

inline std::optional<Experiment> experiment_from_string(const std::string& s) {
    for (const auto& [tag, name] : experiment_names()) {
        if (name == s) return tag;
    }
    return std::nullopt;
}

inline constexpr const char* kOutputDirEnv = "MUNTZ_OUTPUT_DIR";
inline constexpr const char* kDefaultOutputDir = "muntz-runs";
inline constexpr std::uint64_t kDefaultSeed = 20240517;

struct ExperimentConfig {
    Experiment experiment = Experiment::volterra_essential;
    ExponentRule rule = ExponentRule::geometric(1.0, 2.0, 64);
    double eps = 0.1;
    std::optional<double> rho;  // hq-bound: replaces 1 - eps/N_eps
    std::optional<double> c;    // hq-bound: replaces the derived cut point
    std::size_t samples = 1000;
    std::size_t trials = 500;
    std::size_t n = 1;
    std::string op = "volterra";   // bernstein
    std::string weight = "one";    // hq-bound: "one" (q = 1) or "x" (q = x)
    std::string variant = "R";     // hq-bound: "R" or "R1"
    bool use_pool = true;          // bernstein/newman: restrict exponents to the rule
    std::string theta = "square";  // composition-demo: "square" or "identity"
    double alpha = 0.25;
    std::size_t n_max = 10000;
    std::size_t starts = 32;
    std::size_t evals_per_start = 10000;
    std::uint64_t seed = kDefaultSeed;
    unsigned workers = 1;
    std::string output_dir;  // empty: environment, then kDefaultOutputDir

    bool operator==(const ExperimentConfig&) const = default;
};

/// Every offending key with its reason.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(std::vector<std::pair<std::string, std::string>> problems)
        : std::invalid_argument(render(problems)), problems_(std::move(problems)) {}

    const std::vector<std::pair<std::string, std::string>>& problems() const { return problems_; }
    std::vector<std::string> keys() const {
        std::vector<std::string> out;
        for (const auto& p : problems_) out.push_back(p.first);
        return out;
    }

private:
    static std::string render(const std::vector<std::pair<std::string, std::string>>& problems) {
        std::string msg = "invalid config:";
        for (const auto& [key, why] : problems) msg += "\n  " + key + ": " + why;
        return msg;
    }
    std::vector<std::pair<std::string, std::string>> problems_;
};

inline const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "experiment", "rule",   "eps",    "rho",   "c",     "samples", "trials",
        "n",          "op",     "weight", "variant", "use_pool", "theta", "alpha",
        "n_max",      "starts", "evals_per_start", "seed", "workers", "output_dir"};
    return keys;
}

inline json to_json(const ExperimentConfig& cfg) {
    return {{"experiment", to_string(cfg.experiment)},
            {"rule", muntz::to_json(cfg.rule)},
            {"eps", cfg.eps},
            {"rho", cfg.rho ? json(*cfg.rho) : json(nullptr)},
            {"c", cfg.c ? json(*cfg.c) : json(nullptr)},
            {"samples", cfg.samples},
            {"trials", cfg.trials},
            {"n", cfg.n},
            {"op", cfg.op},
            {"weight", cfg.weight},
            {"variant", cfg.variant},
            {"use_pool", cfg.use_pool},
            {"theta", cfg.theta},
            {"alpha", cfg.alpha},
            {"n_max", cfg.n_max},
            {"starts", cfg.starts},
            {"evals_per_start", cfg.evals_per_start},
            {"seed", cfg.seed},
            {"workers", cfg.workers},
            {"output_dir", cfg.output_dir}};
}

namespace detail {

// Per-experiment defaults that differ from the struct defaults.
inline ExperimentConfig defaults_for(Experiment e) {
    ExperimentConfig cfg;
    cfg.experiment = e;
    switch (e) {
        case Experiment::hq_bound: cfg.samples = 500; break;
        case Experiment::bernstein: cfg.n = 2; break;
        case Experiment::newman:
            cfg.n = 4;
            cfg.use_pool = false;
            break;
        default: break;
    }
    return cfg;
}

class Collector {
public:
    void fail(const std::string& key, const std::string& why) { problems_.emplace_back(key, why); }
    bool ok() const { return problems_.empty(); }
    [[noreturn]] void raise() { throw ConfigError(std::move(problems_)); }

    template <class T, class Check>
    void read(const json& doc, const std::string& key, T& out, Check check, const std::string& why) {
        if (!doc.contains(key)) return;
        T value;
        try {
            value = doc.at(key).get<T>();
        } catch (const json::exception&) {
            fail(key, "wrong type");
            return;
        }
        if (!check(value)) {
            fail(key, why);
            return;
        }
        out = value;
    }

    void read_count(const json& doc, const std::string& key, std::size_t& out) {
        if (!doc.contains(key)) return;
        const json& v = doc.at(key);
        if (!v.is_number_integer()) {
            fail(key, "must be a positive integer");
            return;
        }
        if (v.is_number_unsigned() ? v.get<std::uint64_t>() == 0 : v.get<std::int64_t>() <= 0) {
            fail(key, "must be a positive integer");
            return;
        }
        out = v.get<std::size_t>();
    }

private:
    std::vector<std::pair<std::string, std::string>> problems_;
};

}  // namespace detail

/// Validates a parsed document and fills defaults.
inline ExperimentConfig config_from_json(const json& doc) {
    detail::Collector errors;
    if (!doc.is_object()) {
        errors.fail("<document>", "config must be a JSON object");
        errors.raise();
    }
    for (const auto& [key, _] : doc.items()) {
        if (std::find(config_keys().begin(), config_keys().end(), key) == config_keys().end()) {
            errors.fail(key, "unknown key");
        }
    }

    ExperimentConfig cfg;
    if (!doc.contains("experiment")) {
        errors.fail("experiment", "missing");
    } else if (!doc.at("experiment").is_string()) {
        errors.fail("experiment", "must be a string");
    } else if (auto e = experiment_from_string(doc.at("experiment").get<std::string>())) {
        cfg = detail::defaults_for(*e);
    } else {
        errors.fail("experiment", "unknown experiment '" + doc.at("experiment").get<std::string>() + "'");
    }

    if (doc.contains("rule")) {
        try {
            cfg.rule = rule_from_json(doc.at("rule"));
        } catch (const std::exception& ex) {
            errors.fail("rule", ex.what());
        }
    }
    auto open_unit = [](double v) { return v > 0.0 && v < 1.0; };
    errors.read(doc, "eps", cfg.eps, open_unit, "must lie in (0, 1)");
    for (const char* key : {"rho", "c"}) {
        std::optional<double>& slot = std::string(key) == "rho" ? cfg.rho : cfg.c;
        if (doc.contains(key) && !doc.at(key).is_null()) {
            double v = 0.0;
            errors.read(doc, key, v, open_unit, "must lie in (0, 1)");
            if (open_unit(v)) slot = v;
        }
    }
    for (const char* key : {"samples", "trials", "n", "n_max", "starts", "evals_per_start"}) {
        std::size_t* slot = nullptr;
        const std::string k = key;
        if (k == "samples") slot = &cfg.samples;
        if (k == "trials") slot = &cfg.trials;
        if (k == "n") slot = &cfg.n;
        if (k == "n_max") slot = &cfg.n_max;
        if (k == "starts") slot = &cfg.starts;
        if (k == "evals_per_start") slot = &cfg.evals_per_start;
        errors.read_count(doc, k, *slot);
    }
    auto one_of = [](std::vector<std::string> allowed) {
        return [allowed](const std::string& s) { return std::find(allowed.begin(), allowed.end(), s) != allowed.end(); };
    };
    errors.read(doc, "op", cfg.op, one_of({"volterra", "cesaro"}), "must be 'volterra' or 'cesaro'");
    errors.read(doc, "weight", cfg.weight, one_of({"one", "x"}), "must be 'one' or 'x'");
    if (doc.contains("weight") && !doc.contains("variant") && cfg.weight == "x") cfg.variant = "R1";
    errors.read(doc, "variant", cfg.variant, one_of({"R", "R1"}), "must be 'R' or 'R1'");
    errors.read(doc, "use_pool", cfg.use_pool, [](bool) { return true; }, "");
    errors.read(doc, "theta", cfg.theta, one_of({"square", "identity"}), "must be 'square' or 'identity'");
    errors.read(doc, "alpha", cfg.alpha, [](double v) { return v >= 0.0 && v <= 1.0; }, "must lie in [0, 1]");
    errors.read(doc, "seed", cfg.seed, [](std::uint64_t) { return true; }, "");
    std::size_t workers = cfg.workers;
    errors.read_count(doc, "workers", workers);
    cfg.workers = unsigned(std::min<std::size_t>(workers, 1024));
    errors.read(doc, "output_dir", cfg.output_dir, [](const std::string&) { return true; }, "");

    if (cfg.experiment == Experiment::newman && cfg.n < 2) errors.fail("n", "newman needs n >= 2");
    if (cfg.experiment == Experiment::composition_demo && cfg.n_max < 2 * kDefaultTail) {
        errors.fail("n_max", "must be at least " + std::to_string(2 * kDefaultTail));
    }
    if (!errors.ok()) errors.raise();
    return cfg;
}

/// Parses JSON text; malformed text is reported as a ConfigError.
inline ExperimentConfig parse_config(const std::string& source) {
    json doc;
    try {
        doc = json::parse(source);
    } catch (const json::parse_error& ex) {
        throw ConfigError({{"<document>", std::string("malformed JSON: ") + ex.what()}});
    }
    return config_from_json(doc);
}

/// FNV-1a over the canonical (key-sorted, compact) JSON of the semantic
/// fields.  Worker count and output directory do not change results.
inline std::string config_hash(const ExperimentConfig& cfg) {
    json doc = to_json(cfg);
    doc.erase("workers");
    doc.erase("output_dir");
    const std::string canonical = doc.dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : canonical) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg) {
    if (!cfg.output_dir.empty()) return cfg.output_dir;
    if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
    return kDefaultOutputDir;
}

// ---------------------------------------------------------------------------
// Records

enum class Verdict { pass, fail, error };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::error: return "error";
    }
    return "error";
}

inline Verdict verdict_from_string(const std::string& s) {
    if (s == "pass") return Verdict::pass;
    if (s == "fail") return Verdict::fail;
    if (s == "error") return Verdict::error;
    throw std::invalid_argument("unknown verdict '" + s + "'");
}

inline int exit_code(Verdict v) { return v == Verdict::pass ? 0 : v == Verdict::fail ? 1 : 2; }

struct RunRecord {
    std::string experiment;
    std::string config_hash;
    std::string timestamp;  // UTC, ISO 8601; not part of the payload
    std::uint64_t seed = 0;
    json config;
    json outputs;          // the payload
    std::string plot_csv;  // plot data, deterministic
    Verdict verdict = Verdict::error;
    std::optional<std::size_t> n;
    double value = 0.0;
    double bound = 0.0;

    /// Byte-stable rendering of the outputs.
    std::string payload() const { return outputs.dump(); }
};

inline json to_json(const RunRecord& r) {
    return {{"experiment", r.experiment},
            {"config_hash", r.config_hash},
            {"timestamp", r.timestamp},
            {"seed", r.seed},
            {"config", r.config},
            {"verdict", to_string(r.verdict)},
            {"n", r.n ? json(*r.n) : json(nullptr)},
            {"value", r.value},
            {"bound", r.bound},
            {"outputs", r.outputs}};
}

inline RunRecord record_from_json(const json& j) {
    RunRecord r;
    r.experiment = j.at("experiment").get<std::string>();
    r.config_hash = j.value("config_hash", "");
    r.timestamp = j.value("timestamp", "");
    r.seed = j.value("seed", std::uint64_t(0));
    r.config = j.value("config", json::object());
    r.outputs = j.value("outputs", json::object());
    r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
    if (j.contains("n") && !j.at("n").is_null()) r.n = j.at("n").get<std::size_t>();
    r.value = j.at("value").is_null() ? std::nan("") : j.at("value").get<double>();
    r.bound = j.at("bound").is_null() ? std::nan("") : j.at("bound").get<double>();
    return r;
}

namespace detail {

inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string limit_csv(const DiscontinuityEstimate& est, double tolerance) {
    std::string out = "t,value,spread,converged\n";
    for (const LimitSample& s : est.limit_samples) {
        out += fmt12(s.t) + "," + fmt12(s.value) + "," + fmt12(s.spread) + "," +
               (s.spread <= tolerance ? "1" : "0") + "\n";
    }
    return out;
}

inline json estimate_json(const DiscontinuityEstimate& est) {
    return {{"t0", est.t0}, {"height", est.height}, {"radii", est.radii}, {"diameters", est.diameters}};
}

inline bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

inline void run_essential(const ExperimentConfig& cfg, RunRecord& rec) {
    const OperatorTag tag =
        cfg.experiment == Experiment::volterra_essential ? OperatorTag::volterra : OperatorTag::cesaro;
    const std::vector<double> exps = cfg.rule.materialize();
    const EssentialLowerBound lb = essential_lower_bound(tag, WitnessFamily(exps));
    const UnitBallSampler sampler = UnitBallSampler::with_witnesses(exps, cfg.seed);
    const OperatorGap gap = sampled_operator_gap(tag == OperatorTag::volterra ? PolyMap(volterra_minus_s)
                                                                              : PolyMap(cesaro_minus_s),
                                                 sampler, cfg.samples, cfg.workers);
    rec.outputs = {{"operator", muntz::to_string(tag)},
                   {"lower_bound", lb.value},
                   {"limit_converged", lb.converged},
                   {"estimate", estimate_json(lb.estimate)},
                   {"sampled_gap", gap.max_gap},
                   {"gap_arg_index", gap.arg_index},
                   {"gap_arg", muntz::to_json(gap.arg)},
                   {"samples", cfg.samples}};
    rec.plot_csv = limit_csv(lb.estimate, kDefaultSpreadTolerance);
    rec.value = lb.value;
    rec.bound = 0.5;
    const bool ok = within(lb.value, 0.48, 0.50) && within(gap.max_gap, 0.5 - 1e-6, 0.5 + 1e-9);
    rec.verdict = ok ? Verdict::pass : Verdict::fail;
}

inline void run_hq(const ExperimentConfig& cfg, RunRecord& rec) {
    const Weight q = cfg.weight == "x" ? Weight::identity() : Weight::one();
    const bool use_r1 = cfg.variant == "R1";
    const UnitBallSampler sampler = UnitBallSampler::with_witnesses(cfg.rule.materialize(), cfg.seed);
    const HqBoundResult r = hq_bound_experiment(q, use_r1, cfg.eps, sampler, cfg.samples, cfg.workers, cfg.c, cfg.rho);
    rec.outputs = {{"weight", cfg.weight},
                   {"variant", cfg.variant},
                   {"eps", cfg.eps},
                   {"c", r.c},
                   {"n_epsilon", r.n_epsilon},
                   {"rho", r.rho},
                   {"max_gap", r.max_gap},
                   {"bound", r.bound},
                   {"arg_index", r.arg_index},
                   {"arg", muntz::to_json(r.arg)},
                   {"samples", cfg.samples}};
    rec.plot_csv = "c,n_epsilon,rho,max_gap,bound\n" + fmt12(r.c) + "," + fmt12(r.n_epsilon) + "," + fmt12(r.rho) +
                   "," + fmt12(r.max_gap) + "," + fmt12(r.bound) + "\n";
    rec.value = r.max_gap;
    rec.bound = r.bound;
    rec.verdict = r.max_gap <= r.bound + 1e-6 ? Verdict::pass : Verdict::fail;
}

inline void run_bernstein(const ExperimentConfig& cfg, RunRecord& rec) {
    const OperatorTag op = cfg.op == "cesaro" ? OperatorTag::cesaro : OperatorTag::volterra;
    const OptimizerBudget budget{cfg.starts, cfg.evals_per_start, cfg.workers};
    const std::optional<ExponentRule> pool = cfg.use_pool ? std::optional<ExponentRule>(cfg.rule) : std::nullopt;
    const BernsteinReport r = bernstein_estimate(op, cfg.n, cfg.eps, pool, budget, cfg.seed);
    rec.outputs = {{"operator", muntz::to_string(op)},
                   {"n", r.n},
                   {"eps", r.eps},
                   {"exponents", r.exponents},
                   {"value", r.value},
                   {"witness", r.witness},
                   {"witness_poly", muntz::to_json(r.witness_poly)},
                   {"witness_a_l1", r.witness_a_l1},
                   {"witness_f_l1", r.witness_f_l1},
                   {"theory_lower", r.theory_lower},
                   {"theory_value", r.theory_value},
                   {"converged", r.converged}};
    rec.plot_csv = "n,value,theory_lower,theory_value,gap\n" + std::to_string(r.n) + "," + fmt12(r.value) + "," +
                   fmt12(r.theory_lower) + "," + fmt12(r.theory_value) + "," + fmt12(r.value - r.theory_value) +
                   "\n";
    rec.n = r.n;
    rec.value = r.value;
    rec.bound = r.theory_value;
    const bool ok = r.n == 1 ? std::abs(r.value - 1.0) <= 1e-6
                             : within(r.value, r.theory_lower - 0.01, r.theory_value + 0.05);
    rec.verdict = ok ? Verdict::pass : Verdict::fail;
}

inline void run_newman(const ExperimentConfig& cfg, RunRecord& rec) {
    std::vector<double> members;
    if (cfg.use_pool) members = cfg.rule.materialize();
    const NewmanSequence seq = cfg.use_pool ? newman_sequence(1.0, cfg.eps, cfg.n, std::span<const double>(members))
                                            : newman_sequence(1.0, cfg.eps, cfg.n);
    const NewmanStats stats = newman_inequality_stats(seq, cfg.trials, cfg.seed, cfg.workers);
    rec.outputs = {{"exponents", seq.exponents},
                   {"factors", seq.factors},
                   {"product", seq.product()},
                   {"eps", cfg.eps},
                   {"trials", stats.trials},
                   {"violations", stats.violations},
                   {"skipped", stats.skipped},
                   {"min_ratio", stats.min_ratio}};
    rec.plot_csv = "k,exponent,factor\n";
    for (std::size_t k = 0; k < seq.exponents.size(); ++k) {
        rec.plot_csv += std::to_string(k) + "," + fmt12(seq.exponents[k]) + "," +
                        (k < seq.factors.size() ? fmt12(seq.factors[k]) : std::string()) + "\n";
    }
    rec.n = cfg.n;
    rec.value = stats.min_ratio;
    rec.bound = 1.0 - cfg.eps;
    rec.verdict = stats.violations == 0 ? Verdict::pass : Verdict::fail;
}

inline void run_composition(const ExperimentConfig& cfg, RunRecord& rec) {
    const std::function<double(double)> theta =
        cfg.theta == "identity" ? std::function<double(double)>([](double t) { return t; })
                                : std::function<double(double)>([](double t) { return t * t; });
    const CompositionDemoResult r = composition_demo(theta, cfg.alpha, cfg.n_max);
    rec.outputs = {{"theta", cfg.theta},
                   {"alpha", cfg.alpha},
                   {"n_max", cfg.n_max},
                   {"lower_bound", r.lower_bound},
                   {"estimate", estimate_json(r.estimate)}};
    rec.plot_csv = limit_csv(r.estimate, kCompositionSpreadTolerance);
    rec.value = r.lower_bound;
    rec.bound = 1.0;
    rec.verdict = within(r.lower_bound, 0.98, 1.0) ? Verdict::pass : Verdict::fail;
}

}  // namespace detail

/// Runs the experiment without touching the filesystem.  Module errors end up
/// in the record with verdict "error".
inline RunRecord execute_experiment(const ExperimentConfig& cfg) {
    RunRecord rec;
    rec.experiment = to_string(cfg.experiment);
    rec.config_hash = config_hash(cfg);
    rec.timestamp = detail::utc_timestamp();
    rec.seed = cfg.seed;
    rec.config = to_json(cfg);
    if (cfg.experiment == Experiment::bernstein || cfg.experiment == Experiment::newman) rec.n = cfg.n;
    try {
        switch (cfg.experiment) {
            case Experiment::volterra_essential:
            case Experiment::cesaro_essential: detail::run_essential(cfg, rec); break;
            case Experiment::hq_bound: detail::run_hq(cfg, rec); break;
            case Experiment::bernstein: detail::run_bernstein(cfg, rec); break;
            case Experiment::newman: detail::run_newman(cfg, rec); break;
            case Experiment::composition_demo: detail::run_composition(cfg, rec); break;
        }
    } catch (const std::exception& ex) {
        rec.outputs = {{"error", ex.what()}};
        rec.plot_csv.clear();
        rec.verdict = Verdict::error;
        rec.value = std::nan("");
        rec.bound = std::nan("");
    }
    return rec;
}

/// <dir>/<hash prefix>/record.json and data.csv, plus one line in <dir>/index.jsonl.
inline std::filesystem::path persist_record(const RunRecord& rec, const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    const fs::path run_dir = dir / rec.config_hash.substr(0, 12);
    fs::create_directories(run_dir);
    const json doc = to_json(rec);
    {
        std::ofstream out(run_dir / "record.json", std::ios::binary | std::ios::trunc);
        out << doc.dump(2) << '\n';
        if (!out) throw std::runtime_error("cannot write " + (run_dir / "record.json").string());
    }
    if (!rec.plot_csv.empty()) {
        std::ofstream out(run_dir / "data.csv", std::ios::binary | std::ios::trunc);
        out << rec.plot_csv;
    }
    std::ofstream index(dir / "index.jsonl", std::ios::binary | std::ios::app);
    index << doc.dump() << '\n';
    if (!index) throw std::runtime_error("cannot append to " + (dir / "index.jsonl").string());
    return run_dir;
}

inline RunRecord run_experiment(const ExperimentConfig& cfg) {
    RunRecord rec = execute_experiment(cfg);
    persist_record(rec, resolve_output_dir(cfg));
    return rec;
}

// ---------------------------------------------------------------------------
// Reports

enum class ReportFormat { json, csv };

/// json: array of records.  csv: header plus one row per record, columns
/// experiment,n,value,bound,verdict, sorted by (experiment, n).
inline std::string emit_report(const std::vector<RunRecord>& records, ReportFormat format) {
    if (format == ReportFormat::json) {
        json arr = json::array();
        for (const RunRecord& r : records) arr.push_back(to_json(r));
        return arr.dump(2) + "\n";
    }
    if (records.empty()) throw std::invalid_argument("emit_report: csv needs at least one record");
    std::vector<const RunRecord*> sorted;
    for (const RunRecord& r : records) sorted.push_back(&r);
    std::stable_sort(sorted.begin(), sorted.end(), [](const RunRecord* a, const RunRecord* b) {
        if (a->experiment != b->experiment) return a->experiment < b->experiment;
        return a->n < b->n;  // absent n first
    });
    auto num = [](double v) { return std::isnan(v) ? std::string() : detail::fmt12(v); };
    std::string out = "experiment,n,value,bound,verdict\n";
    for (const RunRecord* r : sorted) {
        out += r->experiment + "," + (r->n ? std::to_string(*r->n) : std::string()) + "," + num(r->value) + "," +
               num(r->bound) + "," + to_string(r->verdict) + "\n";
    }
    return out;
}

}  // namespace muntz::cli

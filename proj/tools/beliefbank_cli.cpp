// Command-line surface: datagen, calibrate, run, solve, export-wcnf,
// inspect, correct. One binary, one manifest per run.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "beliefbank/harness.hpp"
#include "beliefbank/manifest.hpp"
#include "beliefbank/remote_oracle.hpp"
#include "beliefbank/rng.hpp"
#include "beliefbank/version.hpp"

namespace bb = beliefbank;

namespace {

struct DataOptions {
    std::string dir;
    std::string constraints, facts, templates;

    bb::DatasetPaths paths() const {
        if (!dir.empty()) return bb::DatasetPaths::in_dir(dir);
        if (constraints.empty() || facts.empty())
            throw bb::Error("dataset location missing: pass --data DIR or both --constraints and --facts");
        return bb::DatasetPaths{constraints, facts, templates};
    }
};

void add_data_options(CLI::App* cmd, DataOptions& opts) {
    cmd->add_option("--data", opts.dir, "dataset directory (constraints.txt, facts.txt, templates.txt)");
    cmd->add_option("--constraints", opts.constraints, "constraints file");
    cmd->add_option("--facts", opts.facts, "facts file");
    cmd->add_option("--templates", opts.templates, "templates file");
}

struct OracleOptions {
    std::string kind = "synthetic";
    std::string url;
    double tpr = 0.98;
    double precision_target = 0.54;
    double tnr = -1.0;  // <0 means derive from precision target
    double p_follow = 0.8;
};

void add_oracle_options(CLI::App* cmd, OracleOptions& opts) {
    cmd->add_option("--oracle", opts.kind, "oracle kind: synthetic | remote")
        ->check(CLI::IsMember({"synthetic", "remote"}));
    cmd->add_option("--oracle-url", opts.url,
                    "remote oracle base URL (or env BELIEFBANK_ORACLE_URL)");
    cmd->add_option("--tpr", opts.tpr, "synthetic oracle true-positive rate");
    cmd->add_option("--precision-target", opts.precision_target,
                    "no-context precision the synthetic tnr is derived from");
    cmd->add_option("--tnr", opts.tnr, "synthetic oracle true-negative rate (overrides derivation)");
    cmd->add_option("--p-follow", opts.p_follow, "probability of following a context-implied label");
}

bb::SyntheticOracleConfig resolve_synthetic(const OracleOptions& opts, const bb::Dataset& ds,
                                            std::uint64_t seed) {
    bb::SyntheticOracleConfig cfg;
    cfg.tpr = opts.tpr;
    cfg.tnr = opts.tnr >= 0.0
                  ? opts.tnr
                  : bb::SyntheticOracleConfig::tnr_for_precision(opts.precision_target,
                                                                 ds.positive_rate(), opts.tpr);
    cfg.p_follow = opts.p_follow;
    cfg.seed = seed;
    return cfg;
}

std::string resolve_remote_url(const OracleOptions& opts) {
    if (!opts.url.empty()) return opts.url;
    if (const char* env = std::getenv("BELIEFBANK_ORACLE_URL")) return env;
    throw bb::Error("remote oracle selected but no URL: pass --oracle-url or set BELIEFBANK_ORACLE_URL");
}

std::unique_ptr<bb::Oracle> build_oracle(const OracleOptions& opts, const bb::Dataset& ds,
                                         std::uint64_t seed, bb::RunManifest& manifest) {
    manifest.oracle_kind = opts.kind;
    if (opts.kind == "remote") {
        bb::RemoteOracleConfig rc;
        rc.base_url = resolve_remote_url(opts);
        manifest.remote_url = rc.base_url;
        return std::make_unique<bb::RemoteOracle>(rc, ds.templates);
    }
    bb::SyntheticOracleConfig cfg = resolve_synthetic(opts, ds, seed);
    manifest.oracle = cfg;
    return std::make_unique<bb::SyntheticOracle>(cfg, ds.gold(), ds.templates, ds.constraints);
}

// Optional JSON parameter file; any key present overrides the built-in
// default, and explicit flags override the file.
struct RunParams {
    std::vector<std::string> configs{"raw"};
    int n_batches = 10;
    int feedback_k = 3;
    bb::Seeds seeds;
    bb::SolverConfig solver;
};

void apply_params_file(const std::string& path, RunParams& p, OracleOptions& oracle) {
    std::ifstream in(path);
    if (!in) throw bb::Error("cannot open params file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw bb::Error("bad params file '" + path + "': " + e.what());
    }
    if (j.contains("config")) {
        p.configs.clear();
        if (j["config"].is_array())
            for (const auto& c : j["config"]) p.configs.push_back(c.get<std::string>());
        else
            p.configs.push_back(j["config"].get<std::string>());
    }
    p.n_batches = j.value("n_batches", p.n_batches);
    p.feedback_k = j.value("feedback_k", p.feedback_k);
    if (j.contains("seeds")) {
        const auto& s = j["seeds"];
        p.seeds.shuffle = s.value("shuffle", p.seeds.shuffle);
        p.seeds.oracle = s.value("oracle", p.seeds.oracle);
        p.seeds.feedback = s.value("feedback", p.seeds.feedback);
    }
    if (j.contains("solver")) {
        const auto& s = j["solver"];
        p.solver.lambda = s.value("lambda", p.solver.lambda);
        p.solver.exact_threshold = s.value("exact_threshold", p.solver.exact_threshold);
        p.solver.max_flips = s.value("max_flips", p.solver.max_flips);
        p.solver.restarts = s.value("restarts", p.solver.restarts);
        p.solver.noise = s.value("noise", p.solver.noise);
        p.solver.seed = s.value("seed", p.solver.seed);
    }
    if (j.contains("oracle")) {
        const auto& o = j["oracle"];
        oracle.kind = o.value("kind", oracle.kind);
        oracle.url = o.value("url", oracle.url);
        oracle.tpr = o.value("tpr", oracle.tpr);
        oracle.precision_target = o.value("precision_target", oracle.precision_target);
        oracle.tnr = o.value("tnr", oracle.tnr);
        oracle.p_follow = o.value("p_follow", oracle.p_follow);
    }
}

int cmd_datagen(const bb::GeneratorConfig& gen, const std::string& out_dir) {
    bb::Dataset ds = bb::generate(gen);
    std::filesystem::create_directories(out_dir);
    bb::save_dataset(ds, bb::DatasetPaths::in_dir(out_dir));
    std::size_t positives = 0;
    for (const auto& f : ds.facts) positives += f.label ? 1 : 0;
    std::cout << "dataset written to " << out_dir << ": " << ds.entities.size() << " entities, "
              << ds.facts.size() << " facts (" << positives << " true, positive rate "
              << std::fixed << std::setprecision(3) << ds.positive_rate() << "), "
              << ds.constraints.size() << " constraints\n";
    return 0;
}

int cmd_run(const DataOptions& data, const RunParams& params, const OracleOptions& oracle_opts,
            const std::string& out_dir, const std::string& manifest_in, int correct_after,
            const std::string& correct_script) {
    bb::DatasetPaths paths;
    RunParams p = params;
    OracleOptions oracle = oracle_opts;

    std::optional<bb::RunManifest> replay;
    if (!manifest_in.empty()) {
        replay = bb::RunManifest::load(manifest_in);
        replay->verify_dataset();
        paths = bb::DatasetPaths{replay->constraints_path, replay->facts_path,
                                 replay->templates_path};
        p.configs = {replay->config_name};
        p.n_batches = replay->n_batches;
        p.feedback_k = replay->feedback_k;
        p.seeds = replay->seeds;
        p.solver = replay->solver;
        oracle.kind = replay->oracle_kind;
        oracle.url = replay->remote_url;
    } else {
        paths = data.paths();
    }

    bb::Dataset ds = bb::load_dataset(paths);
    std::filesystem::create_directories(out_dir);

    std::vector<bb::ConfigReports> all_reports;
    for (const std::string& config_name : p.configs) {
        auto kind = bb::experiment_kind_from_name(config_name);
        if (!kind) throw bb::Error("unknown configuration '" + config_name + "'");

        bb::RunManifest manifest;
        manifest.artifact_version = bb::kArtifactVersion;
        manifest.config_name = config_name;
        manifest.n_batches = p.n_batches;
        manifest.feedback_k = p.feedback_k;
        manifest.seeds = p.seeds;
        manifest.solver = p.solver;
        manifest.fill_dataset(paths);

        std::unique_ptr<bb::Oracle> oracle_impl;
        if (replay && replay->oracle_kind == "synthetic") {
            manifest.oracle_kind = "synthetic";
            manifest.oracle = replay->oracle;
            oracle_impl = std::make_unique<bb::SyntheticOracle>(replay->oracle, ds.gold(),
                                                                ds.templates, ds.constraints);
        } else {
            oracle_impl = build_oracle(oracle, ds, p.seeds.oracle, manifest);
        }

        bb::ExperimentConfig cfg;
        cfg.kind = *kind;
        cfg.n_batches = p.n_batches;
        cfg.feedback_k = p.feedback_k;
        cfg.seeds = p.seeds;
        cfg.solver = p.solver;

        bb::BatchHook hook;
        if (correct_after > 0) {
            hook = [&](int batch, bb::BeliefBank& bank) {
                if (batch != correct_after) return;
                std::cout << "-- paused after batch " << batch << " for corrections --\n";
                if (!correct_script.empty()) {
                    std::ifstream script(correct_script);
                    if (!script) throw bb::Error("cannot open correction script '" + correct_script + "'");
                    bb::run_correction_session(bank, ds, script, std::cout);
                } else {
                    bb::run_correction_session(bank, ds, std::cin, std::cout);
                }
            };
        }

        bb::RunResult result = bb::run(ds, *oracle_impl, cfg, hook);
        if (result.aborted) {
            // Flush whatever completed before the failure, then report it.
            all_reports.push_back(bb::ConfigReports{config_name, result.batches});
            bb::write_csv(all_reports, std::filesystem::path(out_dir) / "report.csv");
            throw bb::Error("run aborted (" + std::to_string(result.batches.size()) +
                            " complete batches flushed): " + result.abort_reason);
        }

        all_reports.push_back(bb::ConfigReports{config_name, result.batches});
        std::string suffix = p.configs.size() > 1 ? "-" + config_name : "";
        manifest.save(std::filesystem::path(out_dir) / ("manifest" + suffix + ".json"));
        result.bank.save(std::filesystem::path(out_dir) / ("bank" + suffix + ".txt"));

        const bb::BatchReport& last = result.batches.back();
        std::cout << config_name << ": final F1 " << std::fixed << std::setprecision(3)
                  << last.f1_true << ", consistency " << last.consistency << " ("
                  << last.consistency_all << " incl. disjunctions), " << last.n_beliefs
                  << " beliefs\n";
    }

    bb::write_csv(all_reports, std::filesystem::path(out_dir) / "report.csv");
    bb::write_table(all_reports, std::filesystem::path(out_dir) / "report.txt");
    std::cout << "reports written to " << out_dir << "\n";
    return 0;
}

int cmd_calibrate(const DataOptions& data, const OracleOptions& oracle_opts, int dev_count,
                  std::vector<std::string> dev_entities, const bb::CalibrationGrid& grid,
                  const bb::SolverConfig& solver, std::uint64_t oracle_seed,
                  const std::string& out_path) {
    bb::Dataset ds = bb::load_dataset(data.paths());
    if (dev_entities.empty()) {
        if (dev_count < 1 || static_cast<std::size_t>(dev_count) > ds.entities.size())
            throw bb::Error("bad --dev-count: dataset has " + std::to_string(ds.entities.size()) +
                            " entities");
        dev_entities.assign(ds.entities.begin(), ds.entities.begin() + dev_count);
    }
    std::vector<std::string> test_entities;
    for (const std::string& e : ds.entities)
        if (std::find(dev_entities.begin(), dev_entities.end(), e) == dev_entities.end())
            test_entities.push_back(e);

    bb::RunManifest unused;
    std::unique_ptr<bb::Oracle> oracle = build_oracle(oracle_opts, ds, oracle_seed, unused);
    bb::CalibrationResult result =
        bb::calibrate(ds, *oracle, dev_entities, grid, solver, test_entities);

    std::cout << "best: w_forward=" << result.best.w_forward
              << " w_backward=" << result.best.w_backward << " lambda=" << result.best.lambda
              << " (dev F1 " << std::fixed << std::setprecision(3) << result.best.dev_f1 << ", "
              << result.grid.size() << " grid points, " << dev_entities.size()
              << " dev entities)\n";
    if (!out_path.empty()) {
        nlohmann::json j;
        j["best"] = {{"w_forward", result.best.w_forward},
                     {"w_backward", result.best.w_backward},
                     {"lambda", result.best.lambda},
                     {"dev_f1", result.best.dev_f1}};
        j["dev_entities"] = dev_entities;
        auto grid_json = nlohmann::json::array();
        for (const auto& g : result.grid)
            grid_json.push_back({{"w_forward", g.w_forward},
                                 {"w_backward", g.w_backward},
                                 {"lambda", g.lambda},
                                 {"dev_f1", g.dev_f1}});
        j["grid"] = grid_json;
        std::ofstream out(out_path);
        if (!out) throw bb::Error("cannot open '" + out_path + "' for writing");
        out << j.dump(2) << "\n";
    }
    return 0;
}

int cmd_solve(const DataOptions& data, const std::string& bank_path, double lambda,
              std::uint64_t seed, bool apply, const std::string& out_path) {
    bb::Dataset ds = bb::load_dataset(data.paths());
    bb::BeliefBank bank = bb::BeliefBank::load(bank_path, ds.templates);

    bb::SolverConfig solver;
    solver.lambda = lambda;
    solver.seed = seed;

    auto grounds = ds.ground_all();
    bb::ConsistencyReport before = bb::consistency(bank, grounds);
    bb::BeliefBank solved = bank;
    int flips = bb::solve_bank(solved, ds, solver);
    bb::ConsistencyReport after = bb::consistency(solved, grounds);

    std::cout << "solve: " << flips << " flips over " << bank.size() << " beliefs\n";
    std::cout << std::fixed << std::setprecision(4) << "consistency (fwd+mutex): "
              << before.consistency_fm << " -> " << after.consistency_fm << "\n";
    std::cout << "consistency (all):       " << before.consistency << " -> " << after.consistency
              << "\n";
    for (const auto& [key, b] : solved.beliefs()) {
        const bb::Belief* old = bank.find(key);
        if (old && old->label != b.label)
            std::cout << "  flip " << key.str() << ": " << (old->label ? 'T' : 'F') << " -> "
                      << (b.label ? 'T' : 'F') << " (w=" << b.weight << ")\n";
    }
    if (apply || !out_path.empty()) {
        std::string target = out_path.empty() ? bank_path : out_path;
        solved.save(target);
        std::cout << "bank written to " << target << "\n";
    }
    return 0;
}

int cmd_export_wcnf(const DataOptions& data, const std::string& bank_path, double lambda,
                    const std::string& out_path) {
    bb::Dataset ds = bb::load_dataset(data.paths());
    bb::BeliefBank bank = bb::BeliefBank::load(bank_path, ds.templates);

    // Ground only the entities present in the bank; everything else would
    // just add free variables.
    std::set<std::string> entities;
    for (const auto& [key, b] : bank.beliefs()) entities.insert(key.entity);
    std::vector<bb::GroundConstraint> grounds;
    for (const std::string& e : entities) {
        auto g = ds.grounds_for(e);
        grounds.insert(grounds.end(), g.begin(), g.end());
    }

    bb::SolverConfig solver;
    solver.lambda = lambda;
    bb::MaxSatInstance inst = bb::encode(bank, grounds, solver);
    bb::export_wcnf(inst, out_path);
    std::cout << "wcnf written to " << out_path << ": " << inst.num_vars() << " vars, "
              << inst.soft_clauses.size() << " soft, " << inst.hard_clauses.size() << " hard\n";
    return 0;
}

int cmd_inspect(const DataOptions& data, const std::string& bank_path, const std::string& entity) {
    bb::Dataset ds = bb::load_dataset(data.paths());
    bb::BeliefBank bank = bb::BeliefBank::load(bank_path, ds.templates);
    auto grounds = ds.grounds_for(entity);
    auto gold = ds.gold();

    auto ranked = bb::rank_by_clash(bank, grounds, entity);
    if (ranked.empty()) {
        std::cout << "no beliefs about '" << entity << "'\n";
        return 0;
    }
    std::cout << "beliefs about '" << entity << "' (clash-ranked):\n";
    for (const auto& [b, clash] : ranked) {
        auto g = gold.find(b.key);
        std::string gold_mark = g == gold.end() ? "?" : (g->second == b.label ? "ok" : "WRONG");
        std::cout << "  " << (b.label ? 'T' : 'F') << " clash=" << std::fixed
                  << std::setprecision(2) << clash << " w=" << b.weight << " gold=" << gold_mark
                  << "  " << ds.templates->surface(b.key, b.label) << "\n";
    }
    int violated = 0;
    for (const auto& g : grounds)
        if (bb::is_violated(bank, g)) ++violated;
    std::cout << violated << " violated constraints for '" << entity << "'\n";
    return 0;
}

int cmd_correct(const DataOptions& data, const std::string& bank_path,
                const std::string& script_path, const std::string& out_path,
                const std::string& transcript_path) {
    bb::Dataset ds = bb::load_dataset(data.paths());
    bb::BeliefBank bank = bb::BeliefBank::load(bank_path, ds.templates);

    std::ostringstream transcript;
    int corrections = 0;
    if (!script_path.empty()) {
        std::ifstream script(script_path);
        if (!script) throw bb::Error("cannot open correction script '" + script_path + "'");
        corrections = bb::run_correction_session(bank, ds, script, transcript);
        std::cout << transcript.str();
    } else {
        corrections = bb::run_correction_session(bank, ds, std::cin, std::cout);
    }
    if (!transcript_path.empty()) {
        std::ofstream t(transcript_path);
        t << transcript.str();
    }
    bank.save(out_path.empty() ? bank_path : out_path);
    std::cout << corrections << " corrections saved to "
              << (out_path.empty() ? bank_path : out_path) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"belief maintenance over a true/false QA oracle: BeliefBank store, "
                 "weighted-MaxSAT consistency solving, and feedback re-querying"};
    app.require_subcommand(1);
    app.set_version_flag("--version", bb::kArtifactVersion);

    // datagen
    auto* datagen = app.add_subcommand("datagen", "generate a synthetic dataset");
    bb::GeneratorConfig gen;
    std::string datagen_out = "data";
    datagen->add_option("--out", datagen_out, "output directory");
    datagen->add_option("--concepts", gen.n_concepts, "number of concepts");
    datagen->add_option("--entities", gen.n_entities, "number of entities");
    datagen->add_option("--props-per-concept", gen.properties_per_concept, "properties per concept");
    datagen->add_option("--mutex-groups", gen.mutex_sibling_groups, "sibling groups given mutex rules");
    datagen->add_option("--property-pool", gen.property_pool, "size of the shared property pool");
    datagen->add_option("--seed", gen.seed, "generator seed");

    // run
    auto* run = app.add_subcommand("run", "run a batched experiment");
    DataOptions run_data;
    add_data_options(run, run_data);
    OracleOptions run_oracle;
    add_oracle_options(run, run_oracle);
    std::vector<std::string> run_configs;
    std::string run_out = "out";
    std::string params_file, manifest_in, correct_script;
    int correct_after = 0;
    std::uint64_t run_seed_all = 0;
    RunParams params;
    run->add_option("--config", run_configs,
                    "configuration: raw | constraints | feedback_on_topic | feedback_relevant | "
                    "feedback_off_topic | feedback_relevant_plus_constraints | omniscient "
                    "(repeatable)");
    run->add_option("--out", run_out, "output directory");
    run->add_option("--params", params_file, "JSON parameter file (documented in README)");
    run->add_option("--manifest", manifest_in, "reproduce a previous run from its manifest");
    run->add_option("--batches", params.n_batches, "number of batches");
    run->add_option("--feedback-k", params.feedback_k, "beliefs per feedback context");
    run->add_option("--seed", run_seed_all, "sets shuffle/oracle/feedback/solver seeds at once");
    run->add_option("--shuffle-seed", params.seeds.shuffle, "question shuffle seed");
    run->add_option("--oracle-seed", params.seeds.oracle, "oracle seed");
    run->add_option("--feedback-seed", params.seeds.feedback, "feedback sampling seed");
    run->add_option("--lambda", params.solver.lambda, "confidence scaling for the solver");
    run->add_option("--exact-threshold", params.solver.exact_threshold,
                    "max variables for exhaustive solving");
    run->add_option("--max-flips", params.solver.max_flips, "local search flips per restart");
    run->add_option("--restarts", params.solver.restarts, "local search restarts");
    run->add_option("--noise", params.solver.noise, "local search noise probability");
    run->add_option("--correct-after", correct_after,
                    "pause for a human correction session after this batch");
    run->add_option("--correct-script", correct_script, "scripted correction commands file");

    // calibrate
    auto* calibrate = app.add_subcommand("calibrate", "grid-search constraint weights and lambda");
    DataOptions cal_data;
    add_data_options(calibrate, cal_data);
    OracleOptions cal_oracle;
    add_oracle_options(calibrate, cal_oracle);
    int dev_count = 7;
    std::vector<std::string> dev_entities;
    std::string cal_out;
    std::uint64_t cal_seed = 2;
    bb::CalibrationGrid grid;
    bb::SolverConfig cal_solver;
    calibrate->add_option("--dev-count", dev_count, "number of dev entities (taken from the front)");
    calibrate->add_option("--dev-entity", dev_entities, "explicit dev entity (repeatable)");
    calibrate->add_option("--grid-forward", grid.w_forward, "forward/mutex weight grid");
    calibrate->add_option("--grid-backward", grid.w_backward, "backward weight grid");
    calibrate->add_option("--grid-lambda", grid.lambda, "lambda grid");
    calibrate->add_option("--oracle-seed", cal_seed, "oracle seed");
    calibrate->add_option("--out", cal_out, "write full grid results to this JSON file");

    // solve
    auto* solve = app.add_subcommand("solve", "run the solver over a bank file and report the diff");
    DataOptions solve_data;
    add_data_options(solve, solve_data);
    std::string solve_bank_path, solve_out;
    double solve_lambda = 1.0;
    std::uint64_t solve_seed = 0;
    bool solve_apply = false;
    solve->add_option("--bank", solve_bank_path, "bank file")->required();
    solve->add_option("--lambda", solve_lambda, "confidence scaling");
    solve->add_option("--seed", solve_seed, "solver seed");
    solve->add_flag("--apply", solve_apply, "write the solved bank back");
    solve->add_option("--out", solve_out, "write the solved bank to this path");

    // export-wcnf
    auto* export_cmd = app.add_subcommand("export-wcnf", "export bank+constraints as weighted CNF");
    DataOptions export_data;
    add_data_options(export_cmd, export_data);
    std::string export_bank, export_out = "instance.wcnf";
    double export_lambda = 1.0;
    export_cmd->add_option("--bank", export_bank, "bank file")->required();
    export_cmd->add_option("--out", export_out, "output wcnf path");
    export_cmd->add_option("--lambda", export_lambda, "confidence scaling");

    // inspect
    auto* inspect = app.add_subcommand("inspect", "show an entity's beliefs and clashes");
    DataOptions inspect_data;
    add_data_options(inspect, inspect_data);
    std::string inspect_bank, inspect_entity;
    inspect->add_option("entity", inspect_entity, "entity name")->required();
    inspect->add_option("--bank", inspect_bank, "bank file")->required();

    // correct
    auto* correct = app.add_subcommand("correct", "interactive human-correction session on a bank");
    DataOptions correct_data;
    add_data_options(correct, correct_data);
    std::string correct_bank, correct_script_path, correct_out, correct_transcript;
    correct->add_option("--bank", correct_bank, "bank file")->required();
    correct->add_option("--script", correct_script_path, "scripted commands instead of stdin");
    correct->add_option("--out", correct_out, "write corrected bank here instead of in place");
    correct->add_option("--transcript", correct_transcript, "write the session transcript here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (datagen->parsed()) return cmd_datagen(gen, datagen_out);
        if (run->parsed()) {
            OracleOptions oracle = run_oracle;
            if (!params_file.empty()) {
                // Precedence: built-in defaults < params file < explicit
                // flags. Flags already landed in `params`, so snapshot them,
                // let the file overwrite, then restore whatever was explicit.
                RunParams from_flags = params;
                OracleOptions oracle_flags = oracle;
                apply_params_file(params_file, params, oracle);
                if (run->count("--batches")) params.n_batches = from_flags.n_batches;
                if (run->count("--feedback-k")) params.feedback_k = from_flags.feedback_k;
                if (run->count("--shuffle-seed")) params.seeds.shuffle = from_flags.seeds.shuffle;
                if (run->count("--oracle-seed")) params.seeds.oracle = from_flags.seeds.oracle;
                if (run->count("--feedback-seed")) params.seeds.feedback = from_flags.seeds.feedback;
                if (run->count("--lambda")) params.solver.lambda = from_flags.solver.lambda;
                if (run->count("--exact-threshold"))
                    params.solver.exact_threshold = from_flags.solver.exact_threshold;
                if (run->count("--max-flips")) params.solver.max_flips = from_flags.solver.max_flips;
                if (run->count("--restarts")) params.solver.restarts = from_flags.solver.restarts;
                if (run->count("--noise")) params.solver.noise = from_flags.solver.noise;
                if (run->count("--oracle")) oracle.kind = oracle_flags.kind;
                if (run->count("--oracle-url")) oracle.url = oracle_flags.url;
                if (run->count("--tpr")) oracle.tpr = oracle_flags.tpr;
                if (run->count("--precision-target"))
                    oracle.precision_target = oracle_flags.precision_target;
                if (run->count("--tnr")) oracle.tnr = oracle_flags.tnr;
                if (run->count("--p-follow")) oracle.p_follow = oracle_flags.p_follow;
            }
            if (!run_configs.empty()) params.configs = run_configs;
            if (run->count("--seed") > 0) {
                params.seeds.shuffle = bb::hash_combine(run_seed_all, 1);
                params.seeds.oracle = bb::hash_combine(run_seed_all, 2);
                params.seeds.feedback = bb::hash_combine(run_seed_all, 3);
                params.solver.seed = bb::hash_combine(run_seed_all, 4);
            }
            return cmd_run(run_data, params, oracle, run_out, manifest_in, correct_after,
                           correct_script);
        }
        if (calibrate->parsed())
            return cmd_calibrate(cal_data, cal_oracle, dev_count, dev_entities, grid, cal_solver,
                                 cal_seed, cal_out);
        if (solve->parsed())
            return cmd_solve(solve_data, solve_bank_path, solve_lambda, solve_seed, solve_apply,
                             solve_out);
        if (export_cmd->parsed())
            return cmd_export_wcnf(export_data, export_bank, export_lambda, export_out);
        if (inspect->parsed()) return cmd_inspect(inspect_data, inspect_bank, inspect_entity);
        if (correct->parsed())
            return cmd_correct(correct_data, correct_bank, correct_script_path, correct_out,
                               correct_transcript);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

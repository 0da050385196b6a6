#include "beliefbank/manifest.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "beliefbank/rng.hpp"
#include "beliefbank/version.hpp"

namespace beliefbank {

std::string file_checksum(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "' for checksum");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    std::ostringstream hex;
    hex << std::hex << std::setw(16) << std::setfill('0') << hash64(buffer.str());
    return hex.str();
}

ExperimentConfig RunManifest::experiment_config() const {
    ExperimentConfig cfg;
    auto kind = experiment_kind_from_name(config_name);
    if (!kind) throw Error("manifest has unknown configuration '" + config_name + "'");
    cfg.kind = *kind;
    cfg.n_batches = n_batches;
    cfg.feedback_k = feedback_k;
    cfg.seeds = seeds;
    cfg.solver = solver;
    return cfg;
}

void RunManifest::fill_dataset(const DatasetPaths& paths) {
    constraints_path = paths.constraints;
    facts_path = paths.facts;
    templates_path = paths.templates;
    constraints_checksum = file_checksum(paths.constraints);
    facts_checksum = file_checksum(paths.facts);
    templates_checksum =
        std::filesystem::exists(paths.templates) ? file_checksum(paths.templates) : "";
}

void RunManifest::verify_dataset() const {
    auto check = [](const std::filesystem::path& p, const std::string& expected) {
        if (expected.empty()) return;
        std::string got = file_checksum(p);
        if (got != expected)
            throw Error("dataset file '" + p.string() + "' changed since the manifest was written (checksum " +
                        got + " != " + expected + ")");
    };
    check(constraints_path, constraints_checksum);
    check(facts_path, facts_checksum);
    check(templates_path, templates_checksum);
}

namespace {

nlohmann::json seeds_to_json(const Seeds& s) {
    return {{"shuffle", s.shuffle}, {"oracle", s.oracle}, {"feedback", s.feedback}};
}

Seeds seeds_from_json(const nlohmann::json& j) {
    Seeds s;
    s.shuffle = j.at("shuffle").get<std::uint64_t>();
    s.oracle = j.at("oracle").get<std::uint64_t>();
    s.feedback = j.at("feedback").get<std::uint64_t>();
    return s;
}

nlohmann::json solver_to_json(const SolverConfig& s) {
    return {{"lambda", s.lambda},     {"exact_threshold", s.exact_threshold},
            {"max_flips", s.max_flips}, {"restarts", s.restarts},
            {"noise", s.noise},       {"seed", s.seed}};
}

SolverConfig solver_from_json(const nlohmann::json& j) {
    SolverConfig s;
    s.lambda = j.at("lambda").get<double>();
    s.exact_threshold = j.at("exact_threshold").get<int>();
    s.max_flips = j.at("max_flips").get<int>();
    s.restarts = j.at("restarts").get<int>();
    s.noise = j.at("noise").get<double>();
    s.seed = j.at("seed").get<std::uint64_t>();
    return s;
}

nlohmann::json oracle_to_json(const SyntheticOracleConfig& o) {
    return {{"tpr", o.tpr},
            {"tnr", o.tnr},
            {"p_follow", o.p_follow},
            {"conf_correct_alpha", o.conf_correct_alpha},
            {"conf_correct_beta", o.conf_correct_beta},
            {"conf_incorrect_alpha", o.conf_incorrect_alpha},
            {"conf_incorrect_beta", o.conf_incorrect_beta},
            {"seed", o.seed}};
}

SyntheticOracleConfig oracle_from_json(const nlohmann::json& j) {
    SyntheticOracleConfig o;
    o.tpr = j.at("tpr").get<double>();
    o.tnr = j.at("tnr").get<double>();
    o.p_follow = j.at("p_follow").get<double>();
    o.conf_correct_alpha = j.at("conf_correct_alpha").get<double>();
    o.conf_correct_beta = j.at("conf_correct_beta").get<double>();
    o.conf_incorrect_alpha = j.at("conf_incorrect_alpha").get<double>();
    o.conf_incorrect_beta = j.at("conf_incorrect_beta").get<double>();
    o.seed = j.at("seed").get<std::uint64_t>();
    return o;
}

}  // namespace

void RunManifest::save(const std::filesystem::path& path) const {
    nlohmann::json j;
    j["artifact_version"] = artifact_version.empty() ? kArtifactVersion : artifact_version;
    j["config"] = config_name;
    j["n_batches"] = n_batches;
    j["feedback_k"] = feedback_k;
    j["seeds"] = seeds_to_json(seeds);
    j["solver"] = solver_to_json(solver);
    j["oracle_kind"] = oracle_kind;
    if (oracle_kind == "synthetic") j["oracle"] = oracle_to_json(oracle);
    if (!remote_url.empty()) j["remote_url"] = remote_url;
    j["dataset"] = {{"constraints", constraints_path.string()},
                    {"facts", facts_path.string()},
                    {"templates", templates_path.string()},
                    {"constraints_checksum", constraints_checksum},
                    {"facts_checksum", facts_checksum},
                    {"templates_checksum", templates_checksum}};
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    out << j.dump(2) << "\n";
    if (!out) throw Error("write failed for '" + path.string() + "'");
}

RunManifest RunManifest::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error("bad manifest '" + path.string() + "': " + e.what());
    }
    RunManifest m;
    try {
        m.artifact_version = j.at("artifact_version").get<std::string>();
        m.config_name = j.at("config").get<std::string>();
        m.n_batches = j.at("n_batches").get<int>();
        m.feedback_k = j.at("feedback_k").get<int>();
        m.seeds = seeds_from_json(j.at("seeds"));
        m.solver = solver_from_json(j.at("solver"));
        m.oracle_kind = j.at("oracle_kind").get<std::string>();
        if (m.oracle_kind == "synthetic") m.oracle = oracle_from_json(j.at("oracle"));
        m.remote_url = j.value("remote_url", std::string());
        const auto& d = j.at("dataset");
        m.constraints_path = d.at("constraints").get<std::string>();
        m.facts_path = d.at("facts").get<std::string>();
        m.templates_path = d.at("templates").get<std::string>();
        m.constraints_checksum = d.at("constraints_checksum").get<std::string>();
        m.facts_checksum = d.at("facts_checksum").get<std::string>();
        m.templates_checksum = d.at("templates_checksum").get<std::string>();
    } catch (const std::exception& e) {
        throw Error("bad manifest '" + path.string() + "': " + e.what());
    }
    return m;
}

}  // namespace beliefbank

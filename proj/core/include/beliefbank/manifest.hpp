#pragma once

// Run manifest: everything needed to reproduce a run byte-exactly --
// resolved configuration, seeds, oracle parameters, and dataset checksums.
// Written alongside every report; `run --manifest` replays one.

#include <filesystem>
#include <string>

#include "beliefbank/dataset.hpp"
#include "beliefbank/harness.hpp"
#include "beliefbank/oracle.hpp"

namespace beliefbank {

std::string file_checksum(const std::filesystem::path& path);  // fnv1a-64, hex

struct RunManifest {
    std::string artifact_version;
    std::string config_name;  // experiment kind
    int n_batches = 10;
    int feedback_k = 3;
    Seeds seeds;
    SolverConfig solver;

    std::string oracle_kind = "synthetic";  // "synthetic" | "remote"
    SyntheticOracleConfig oracle;           // resolved values when synthetic
    std::string remote_url;

    std::filesystem::path constraints_path, facts_path, templates_path;
    std::string constraints_checksum, facts_checksum, templates_checksum;

    ExperimentConfig experiment_config() const;

    void fill_dataset(const DatasetPaths& paths);
    // Throws when any dataset file no longer matches its checksum.
    void verify_dataset() const;

    void save(const std::filesystem::path& path) const;
    static RunManifest load(const std::filesystem::path& path);
};

}  // namespace beliefbank

#pragma once

// Dataset ingestion and synthetic generation. A dataset is a template
// registry, a set of variabilized constraints, and truth-labeled facts over
// entities. Generated datasets come from a random concept taxonomy whose
// gold labels are the silver-propagation closure of each entity's leaf
// concept, so gold consistency is 1 by construction.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "beliefbank/constraints.hpp"
#include "beliefbank/types.hpp"

namespace beliefbank {

struct Fact {
    SentenceKey key;
    bool label = true;
    bool operator==(const Fact&) const = default;
};

struct Dataset {
    TemplateRegistryPtr templates;
    std::vector<ConstraintTemplate> constraints;
    std::vector<Fact> facts;
    std::vector<std::string> entities;  // sorted, unique

    std::map<SentenceKey, bool> gold() const;
    double positive_rate() const;
    std::vector<GroundConstraint> grounds_for(const std::string& entity) const;
    // Grounded constraints for every entity, entity-major order.
    std::vector<GroundConstraint> ground_all() const;
    // Facts restricted to a subset of entities.
    Dataset restricted_to(const std::vector<std::string>& subset) const;
};

// File layout: a facts file with one `entity template_id label` line per
// fact, a constraints file (see constraints.hpp), and an optional templates
// file with tab-separated `template_id<TAB>positive<TAB>negative` lines.
// Without a templates file, surfaces are synthesized from the template id.
Dataset load_dataset(const std::filesystem::path& constraints_path,
                     const std::filesystem::path& facts_path,
                     const std::filesystem::path& templates_path = {});

struct DatasetPaths {
    std::filesystem::path constraints;
    std::filesystem::path facts;
    std::filesystem::path templates;
    static DatasetPaths in_dir(const std::filesystem::path& dir);
};
Dataset load_dataset(const DatasetPaths& paths);
void save_dataset(const Dataset& ds, const DatasetPaths& paths);

// Fixpoint closure of leaf labels through single-conclusion constraints:
// a held premise label asserts the conclusion's label. Returns leaves plus
// everything derived; derived contradictions throw with both derivation
// chains spelled out.
std::vector<Fact> propagate_silver(const std::vector<Fact>& leaf_labels,
                                   const std::vector<GroundConstraint>& grounds);

struct GeneratorConfig {
    int n_concepts = 12;
    int n_entities = 20;
    int properties_per_concept = 6;
    int mutex_sibling_groups = 8;  // sibling groups (root set first) that get mutex rules
    int property_pool = 64;
    double forward_weight_min = 0.5;
    double forward_weight_max = 1.0;
    double backward_weight_min = 0.01;
    double backward_weight_max = 0.2;
    double mutex_weight = 1.0;
    std::uint64_t seed = 0;

    void validate() const;
};

Dataset generate(const GeneratorConfig& cfg);

}  // namespace beliefbank

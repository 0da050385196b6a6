#pragma once

// Shared fixtures for the test suites: the dog/tail/bird/fish world used
// throughout, plus random-instance generators and the independent
// enumeration oracle the solvers are checked against.

#include <cstdint>
#include <memory>
#include <vector>

#include "beliefbank/belief_bank.hpp"
#include "beliefbank/constraints.hpp"
#include "beliefbank/maxsat.hpp"

namespace beliefbank::testsupport {

// Templates: isa.dog, isa.bird, isa.fish, isa.mammal, isa.animal, isa.plant,
// isa.tree, isa.vertebrate, has.tail, has.gills, has.wings.
TemplateRegistryPtr animal_registry();

Belief make_belief(const std::string& entity, const std::string& template_id, bool label,
                   double weight, Provenance provenance = Provenance::model_raw, int batch = 0);

ConstraintTemplate forward(const std::string& premise, const std::string& conclusion,
                           double weight);
// Both halves of a mutual exclusivity pair.
std::vector<ConstraintTemplate> mutex_pair(const std::string& a, const std::string& b,
                                           double weight);
ConstraintTemplate backward(const std::string& premise,
                            const std::vector<std::string>& disjuncts, double weight);

// Random weighted MaxSAT instances for solver cross-checks.
struct RandomInstanceOptions {
    int max_vars = 15;
    int max_clauses = 40;
    int max_clause_len = 3;
    double unit_fraction = 0.5;  // roughly this share of clauses are units
    bool with_hard_units = false;
};
MaxSatInstance random_instance(std::uint64_t seed, const RandomInstanceOptions& opts = {});

// Independent exhaustive enumeration: scans all 2^n assignments in
// lexicographic order and applies the documented tie-break (min cost, max
// unit agreement, lexicographically smallest). Deliberately simple and
// separate from the solver implementation.
Assignment enumerate_minimum(const MaxSatInstance& inst);

}  // namespace beliefbank::testsupport

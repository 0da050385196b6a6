#pragma once

// Weighted MaxSAT over sentence variables. Beliefs become unit soft clauses
// (hard for human corrections) scaled by lambda; ground constraints become
// implication clauses carrying their own weight. solve_exact is a
// branch-and-bound search with a proven-minimal result; solve_local is an
// anytime weighted WalkSAT for instances past the exact threshold.

#include <cstdint>
#include <filesystem>
#include <map>
#include <vector>

#include "beliefbank/belief_bank.hpp"
#include "beliefbank/constraints.hpp"

namespace beliefbank {

struct Literal {
    int var = 0;           // index into MaxSatInstance::variables
    bool positive = true;  // positive literal means "sentence is true"
    bool operator==(const Literal&) const = default;
};

struct SoftClause {
    std::vector<Literal> literals;
    double weight = 1.0;
    bool operator==(const SoftClause&) const = default;
};

struct MaxSatInstance {
    std::vector<SentenceKey> variables;
    std::vector<SoftClause> soft_clauses;
    std::vector<std::vector<Literal>> hard_clauses;

    int var_index(const SentenceKey& key) const;  // -1 when absent
    std::size_t num_vars() const { return variables.size(); }
};

struct Assignment {
    std::map<SentenceKey, bool> values;
    double cost = 0.0;  // total weight of violated soft clauses

    bool at(const SentenceKey& key) const;
};

struct SolverConfig {
    double lambda = 1.0;      // scales model confidences against constraint weights
    int exact_threshold = 20; // max variables for solve_exact
    int max_flips = 20000;
    int restarts = 3;
    double noise = 0.2;       // random-walk probability in [0,1]
    std::uint64_t seed = 0;

    void validate() const;
};

// Builds the instance. Every bank belief gets a variable; constraint
// sentences missing from the bank get free variables (no unit clause).
MaxSatInstance encode(const BeliefBank& bank, const std::vector<GroundConstraint>& grounds,
                      const SolverConfig& cfg);

// Sum of weights of soft clauses with no satisfied literal.
double evaluate_cost(const MaxSatInstance& inst, const std::vector<bool>& values);
bool hard_clauses_satisfied(const MaxSatInstance& inst, const std::vector<bool>& values);

// Provably minimal cost. Ties prefer the assignment satisfying the most
// unit soft clauses, then the lexicographically smallest value vector
// (false before true, in variable order). Throws when the instance exceeds
// cfg.exact_threshold variables or the hard clauses are unsatisfiable.
Assignment solve_exact(const MaxSatInstance& inst, const SolverConfig& cfg = {});

// Anytime local search: deterministic given cfg.seed, initialized from the
// unit-clause assignment, never returns a hard-clause-violating assignment.
Assignment solve_local(const MaxSatInstance& inst, const SolverConfig& cfg = {});

// solve_exact when the instance fits under the threshold, solve_local
// otherwise.
Assignment solve_auto(const MaxSatInstance& inst, const SolverConfig& cfg = {});

// Flips bank beliefs that disagree with the assignment (provenance becomes
// solver_flipped, weight retained). Returns the flipped keys. The
// assignment must cover every bank key.
std::vector<SentenceKey> apply_assignment(BeliefBank& bank, const Assignment& a);

// Standard weighted-CNF text export. Real weights are scaled by 10^4 and
// rounded (clamped to >= 1); a comment block maps variable numbers back to
// sentence keys.
void export_wcnf(const MaxSatInstance& inst, const std::filesystem::path& path);
void export_wcnf(const MaxSatInstance& inst, std::ostream& out);
constexpr double kWcnfWeightScale = 1e4;
std::int64_t wcnf_weight(double w);

// Reads the variable-map comment block back from an exported file.
std::vector<SentenceKey> read_wcnf_variable_map(const std::filesystem::path& path);

}  // namespace beliefbank

#pragma once

// Variabilized constraints over sentence truth values, their per-entity
// groundings, and the conditional-violation consistency metric.
//
// A constraint reads: if the premise sentence has its required label, then
// at least one conclusion disjunct should have its required label; violating
// that costs the constraint's weight. Forward implications and mutual
// exclusivity halves have exactly one disjunct; backward disjunctions may
// have many.

#include <string>
#include <vector>

#include "beliefbank/belief_bank.hpp"
#include "beliefbank/types.hpp"

namespace beliefbank {

enum class ConstraintKind { forward_implication, mutex_half, backward_disjunction };

const char* constraint_kind_name(ConstraintKind k);
std::optional<ConstraintKind> constraint_kind_from_name(const std::string& s);

struct TemplateCondition {
    std::string template_id;
    bool label = true;
    bool operator==(const TemplateCondition&) const = default;
};

struct ConstraintTemplate {
    TemplateCondition premise;
    std::vector<TemplateCondition> conclusion;  // disjunction, non-empty
    double weight = 1.0;                        // > 0
    ConstraintKind kind = ConstraintKind::forward_implication;

    // Throws on structural violations (weight, disjunct arity per kind).
    void validate() const;
    bool operator==(const ConstraintTemplate&) const = default;
};

struct KeyCondition {
    SentenceKey key;
    bool label = true;
    bool operator==(const KeyCondition&) const = default;
};

struct GroundConstraint {
    KeyCondition premise;
    std::vector<KeyCondition> disjuncts;
    double weight = 1.0;
    ConstraintKind kind = ConstraintKind::forward_implication;

    bool mentions(const SentenceKey& key) const;
};

// Substitutes the shared variable X (the entity slot) into every template.
// Output order follows the input order. Unknown template ids throw.
std::vector<GroundConstraint> ground(const TemplateRegistry& registry,
                                     const std::vector<ConstraintTemplate>& templates,
                                     const std::string& entity);

struct ConsistencyReport {
    // All constraints, disjunctive rule included.
    std::size_t applicable = 0;
    std::size_t violated = 0;
    double tau = 0.0;
    double consistency = 1.0;
    // Restricted to single-conclusion kinds (forward implications + mutex
    // halves), the form the violation metric is usually quoted for.
    std::size_t applicable_fm = 0;
    std::size_t violated_fm = 0;
    double tau_fm = 0.0;
    double consistency_fm = 1.0;
};

// A constraint is applicable iff the bank holds the premise sentence with
// its required label AND every conclusion sentence is present in the bank;
// it is violated iff applicable and no disjunct holds with its required
// label. tau = violated / applicable (0 when nothing is applicable).
ConsistencyReport consistency(const BeliefBank& bank, const std::vector<GroundConstraint>& grounds);

// True iff the constraint is applicable and violated under the bank.
bool is_violated(const BeliefBank& bank, const GroundConstraint& g);

// The label a single-conclusion constraint associates with `query` given a
// belief about the constraint's other sentence: matching one side implies
// the other side's required label, matching its negation implies the
// negation. Nothing for disjunctive constraints or when the constraint does
// not link exactly (belief, query).
std::optional<bool> implied_query_label(const GroundConstraint& g, const SentenceKey& query,
                                        const KeyCondition& belief);

// Constraint file I/O. One constraint per line:
//   kind premise_template L conclusion_template L [| template L ...] weight
// e.g.  forward_implication isa.dog T has.tail T 0.8
std::vector<ConstraintTemplate> load_constraints(const std::filesystem::path& path);
std::vector<ConstraintTemplate> parse_constraints(std::istream& in, const std::string& name);
void save_constraints(const std::vector<ConstraintTemplate>& constraints,
                      const std::filesystem::path& path);
std::string format_constraint(const ConstraintTemplate& c);

}  // namespace beliefbank

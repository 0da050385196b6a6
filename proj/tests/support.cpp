#include "support.hpp"

#include "beliefbank/rng.hpp"

namespace beliefbank::testsupport {

TemplateRegistryPtr animal_registry() {
    auto r = std::make_shared<TemplateRegistry>();
    auto isa = [&](const std::string& noun) {
        r->add(SentenceTemplate{"isa." + noun, "a X is a " + noun, "a X is not a " + noun});
    };
    isa("dog");
    isa("bird");
    isa("fish");
    isa("mammal");
    isa("animal");
    isa("plant");
    isa("tree");
    isa("vertebrate");
    r->add(SentenceTemplate{"has.tail", "a X has a tail", "a X does not have a tail"});
    r->add(SentenceTemplate{"has.gills", "a X has gills", "a X does not have gills"});
    r->add(SentenceTemplate{"has.wings", "a X has wings", "a X does not have wings"});
    return r;
}

Belief make_belief(const std::string& entity, const std::string& template_id, bool label,
                   double weight, Provenance provenance, int batch) {
    return Belief{SentenceKey{entity, template_id}, label, weight, provenance, batch};
}

ConstraintTemplate forward(const std::string& premise, const std::string& conclusion,
                           double weight) {
    ConstraintTemplate t;
    t.kind = ConstraintKind::forward_implication;
    t.premise = TemplateCondition{premise, true};
    t.conclusion = {TemplateCondition{conclusion, true}};
    t.weight = weight;
    return t;
}

std::vector<ConstraintTemplate> mutex_pair(const std::string& a, const std::string& b,
                                           double weight) {
    ConstraintTemplate ab, ba;
    ab.kind = ba.kind = ConstraintKind::mutex_half;
    ab.premise = TemplateCondition{a, true};
    ab.conclusion = {TemplateCondition{b, false}};
    ab.weight = weight;
    ba.premise = TemplateCondition{b, true};
    ba.conclusion = {TemplateCondition{a, false}};
    ba.weight = weight;
    return {ab, ba};
}

ConstraintTemplate backward(const std::string& premise, const std::vector<std::string>& disjuncts,
                            double weight) {
    ConstraintTemplate t;
    t.kind = ConstraintKind::backward_disjunction;
    t.premise = TemplateCondition{premise, true};
    for (const std::string& d : disjuncts) t.conclusion.push_back(TemplateCondition{d, true});
    t.weight = weight;
    return t;
}

MaxSatInstance random_instance(std::uint64_t seed, const RandomInstanceOptions& opts) {
    Rng rng(hash_combine(seed, hash64("random-instance")));
    MaxSatInstance inst;
    int n_vars = 2 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(opts.max_vars - 1)));
    for (int v = 0; v < n_vars; ++v)
        inst.variables.push_back(SentenceKey{"e", "v" + std::to_string(v)});

    int n_clauses =
        1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(opts.max_clauses)));
    for (int c = 0; c < n_clauses; ++c) {
        SoftClause clause;
        clause.weight = 0.05 + rng.next_double() * 2.0;
        if (rng.next_double() < opts.unit_fraction) {
            clause.literals.push_back(
                Literal{static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n_vars))),
                        rng.chance(0.5)});
        } else {
            int len = 2 + static_cast<int>(rng.next_below(
                              static_cast<std::uint64_t>(opts.max_clause_len - 1)));
            std::vector<std::size_t> vars =
                rng.sample_indices(static_cast<std::size_t>(n_vars),
                                   static_cast<std::size_t>(len));
            for (std::size_t v : vars)
                clause.literals.push_back(Literal{static_cast<int>(v), rng.chance(0.5)});
        }
        inst.soft_clauses.push_back(std::move(clause));
    }
    if (opts.with_hard_units && n_vars > 0) {
        int n_hard = static_cast<int>(rng.next_below(3));
        for (int h = 0; h < n_hard; ++h) {
            int v = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n_vars)));
            inst.hard_clauses.push_back({Literal{v, rng.chance(0.5)}});
        }
    }
    return inst;
}

Assignment enumerate_minimum(const MaxSatInstance& inst) {
    const std::size_t n = inst.num_vars();
    if (n == 0) return Assignment{};
    if (n > 25) throw Error("enumeration oracle limited to 25 variables");

    auto unit_agreement = [&](const std::vector<bool>& values) {
        int agree = 0;
        for (const SoftClause& c : inst.soft_clauses)
            if (c.literals.size() == 1 &&
                values[static_cast<std::size_t>(c.literals[0].var)] == c.literals[0].positive)
                ++agree;
        return agree;
    };

    std::vector<bool> values(n, false), best;
    double best_cost = 0.0;
    int best_agree = -1;
    bool found = false;
    // Lexicographic order: treat the value vector as a binary number with
    // variable 0 as the most significant digit (false < true).
    for (std::uint64_t code = 0; code < (1ULL << n); ++code) {
        for (std::size_t v = 0; v < n; ++v) values[v] = (code >> (n - 1 - v)) & 1ULL;
        if (!hard_clauses_satisfied(inst, values)) continue;
        double cost = evaluate_cost(inst, values);
        int agree = unit_agreement(values);
        if (!found || cost < best_cost || (cost == best_cost && agree > best_agree)) {
            found = true;
            best_cost = cost;
            best_agree = agree;
            best = values;
        }
    }
    if (!found) throw UnsatisfiableError("enumeration: hard clauses unsatisfiable");
    Assignment a;
    for (std::size_t v = 0; v < n; ++v) a.values[inst.variables[v]] = best[v];
    a.cost = best_cost;
    return a;
}

}  // namespace beliefbank::testsupport

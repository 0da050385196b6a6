#include "beliefbank/maxsat.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "beliefbank/rng.hpp"

namespace beliefbank {

int MaxSatInstance::var_index(const SentenceKey& key) const {
    for (std::size_t i = 0; i < variables.size(); ++i)
        if (variables[i] == key) return static_cast<int>(i);
    return -1;
}

bool Assignment::at(const SentenceKey& key) const {
    auto it = values.find(key);
    if (it == values.end()) throw Error("assignment does not cover " + key.str());
    return it->second;
}

void SolverConfig::validate() const {
    if (!(lambda > 0.0)) throw Error("lambda must be positive");
    if (exact_threshold < 1) throw Error("exact_threshold must be >= 1");
    if (max_flips < 1) throw Error("max_flips must be >= 1");
    if (restarts < 1) throw Error("restarts must be >= 1");
    if (noise < 0.0 || noise > 1.0) throw Error("noise must lie in [0,1]");
}

MaxSatInstance encode(const BeliefBank& bank, const std::vector<GroundConstraint>& grounds,
                      const SolverConfig& cfg) {
    cfg.validate();
    MaxSatInstance inst;
    std::map<SentenceKey, int> index;

    auto intern = [&](const SentenceKey& key) {
        auto [it, inserted] = index.emplace(key, static_cast<int>(inst.variables.size()));
        if (inserted) inst.variables.push_back(key);
        return it->second;
    };

    // Bank keys first (already sorted), then any constraint-only sentences.
    // The latter get no unit clause: unanswered sentences are free.
    for (const auto& [key, b] : bank.beliefs()) {
        int v = intern(key);
        Literal lit{v, b.label};
        if (b.provenance == Provenance::human) {
            inst.hard_clauses.push_back({lit});
        } else if (b.weight > 0.0) {
            inst.soft_clauses.push_back(SoftClause{{lit}, cfg.lambda * b.weight});
        }
    }
    for (const GroundConstraint& g : grounds) {
        SoftClause clause;
        // premise.label_required -> disjunction   becomes   not(premise) or d1 or ...
        clause.literals.push_back(Literal{intern(g.premise.key), !g.premise.label});
        for (const KeyCondition& d : g.disjuncts)
            clause.literals.push_back(Literal{intern(d.key), d.label});
        clause.weight = g.weight;
        inst.soft_clauses.push_back(std::move(clause));
    }
    return inst;
}

double evaluate_cost(const MaxSatInstance& inst, const std::vector<bool>& values) {
    double cost = 0.0;
    for (const SoftClause& c : inst.soft_clauses) {
        bool sat = false;
        for (const Literal& l : c.literals)
            if (values[static_cast<std::size_t>(l.var)] == l.positive) {
                sat = true;
                break;
            }
        if (!sat) cost += c.weight;
    }
    return cost;
}

bool hard_clauses_satisfied(const MaxSatInstance& inst, const std::vector<bool>& values) {
    for (const auto& clause : inst.hard_clauses) {
        bool sat = false;
        for (const Literal& l : clause)
            if (values[static_cast<std::size_t>(l.var)] == l.positive) {
                sat = true;
                break;
            }
        if (!sat) return false;
    }
    return true;
}

namespace {

Assignment make_assignment(const MaxSatInstance& inst, const std::vector<bool>& values) {
    Assignment a;
    for (std::size_t i = 0; i < inst.variables.size(); ++i) a.values[inst.variables[i]] = values[i];
    a.cost = evaluate_cost(inst, values);
    return a;
}

// Unit hard clauses pinning the same variable both ways make the instance
// unsatisfiable regardless of everything else; report the offending keys.
void check_hard_units(const MaxSatInstance& inst) {
    std::map<int, bool> forced;
    for (const auto& clause : inst.hard_clauses) {
        if (clause.size() != 1) continue;
        auto [it, inserted] = forced.emplace(clause[0].var, clause[0].positive);
        if (!inserted && it->second != clause[0].positive)
            throw UnsatisfiableError("hard clauses unsatisfiable: conflicting hard beliefs for " +
                                     inst.variables[static_cast<std::size_t>(clause[0].var)].str());
    }
}

// Number of satisfied unit soft clauses; the tie-break for "stay close to
// the raw answers".
int unit_agreement(const MaxSatInstance& inst, const std::vector<bool>& values) {
    int n = 0;
    for (const SoftClause& c : inst.soft_clauses)
        if (c.literals.size() == 1 &&
            values[static_cast<std::size_t>(c.literals[0].var)] == c.literals[0].positive)
            ++n;
    return n;
}

struct ClauseState {
    int true_count = 0;
    int unassigned = 0;
};

class BranchAndBound {
public:
    explicit BranchAndBound(const MaxSatInstance& inst) : inst_(inst), n_(inst.num_vars()) {
        values_.assign(n_, false);
        assigned_.assign(n_, false);
        soft_state_.resize(inst_.soft_clauses.size());
        hard_state_.resize(inst_.hard_clauses.size());
        occurrences_.resize(n_);
        for (std::size_t c = 0; c < inst_.soft_clauses.size(); ++c) {
            soft_state_[c].unassigned = static_cast<int>(inst_.soft_clauses[c].literals.size());
            for (const Literal& l : inst_.soft_clauses[c].literals)
                occurrences_[static_cast<std::size_t>(l.var)].push_back(
                    {static_cast<int>(c), l.positive, false});
        }
        for (std::size_t c = 0; c < inst_.hard_clauses.size(); ++c) {
            hard_state_[c].unassigned = static_cast<int>(inst_.hard_clauses[c].size());
            for (const Literal& l : inst_.hard_clauses[c])
                occurrences_[static_cast<std::size_t>(l.var)].push_back(
                    {static_cast<int>(c), l.positive, true});
        }
    }

    Assignment run() {
        search(0);
        if (!found_) throw UnsatisfiableError("hard clauses unsatisfiable");
        Assignment a;
        for (std::size_t i = 0; i < n_; ++i) a.values[inst_.variables[i]] = best_values_[i];
        a.cost = best_cost_;
        return a;
    }

private:
    struct Occurrence {
        int clause;
        bool positive;
        bool hard;
    };

    void search(std::size_t depth) {
        if (hard_falsified_ > 0) return;
        // The running bound accumulates add/subtract rounding, so leave a
        // little slack; equal-cost branches may also still win the agreement
        // tie-break. Never prune anything that could tie.
        if (found_ && falsified_weight_ > best_cost_ + kBoundSlack) return;
        if (depth == n_) {
            // Recompute the leaf cost as a fresh sum in clause order so that
            // equal assignments always produce bit-identical costs.
            double cost = 0.0;
            for (std::size_t c = 0; c < soft_state_.size(); ++c)
                if (soft_state_[c].true_count == 0) cost += inst_.soft_clauses[c].weight;
            int agreement = unit_agreement(inst_, values_);
            if (!found_ || cost < best_cost_ ||
                (cost == best_cost_ && agreement > best_agreement_)) {
                // DFS assigns false before true, so among remaining ties the
                // first leaf reached is the lexicographically smallest.
                found_ = true;
                best_cost_ = cost;
                best_agreement_ = agreement;
                best_values_ = values_;
            }
            return;
        }
        for (bool value : {false, true}) {
            assign(depth, value);
            search(depth + 1);
            unassign(depth, value);
        }
    }

    static constexpr double kBoundSlack = 1e-9;

    void assign(std::size_t var, bool value) {
        values_[var] = value;
        assigned_[var] = true;
        for (const Occurrence& o : occurrences_[var]) {
            ClauseState& s = o.hard ? hard_state_[static_cast<std::size_t>(o.clause)]
                                    : soft_state_[static_cast<std::size_t>(o.clause)];
            --s.unassigned;
            if (o.positive == value) {
                ++s.true_count;
            } else if (s.unassigned == 0 && s.true_count == 0) {
                if (o.hard)
                    ++hard_falsified_;
                else
                    falsified_weight_ += inst_.soft_clauses[static_cast<std::size_t>(o.clause)].weight;
            }
        }
    }

    void unassign(std::size_t var, bool value) {
        for (const Occurrence& o : occurrences_[var]) {
            ClauseState& s = o.hard ? hard_state_[static_cast<std::size_t>(o.clause)]
                                    : soft_state_[static_cast<std::size_t>(o.clause)];
            if (o.positive == value) {
                --s.true_count;
            } else if (s.unassigned == 0 && s.true_count == 0) {
                if (o.hard)
                    --hard_falsified_;
                else
                    falsified_weight_ -= inst_.soft_clauses[static_cast<std::size_t>(o.clause)].weight;
            }
            ++s.unassigned;
        }
        assigned_[var] = false;
    }

    const MaxSatInstance& inst_;
    std::size_t n_;
    std::vector<bool> values_;
    std::vector<bool> assigned_;
    std::vector<ClauseState> soft_state_;
    std::vector<ClauseState> hard_state_;
    std::vector<std::vector<Occurrence>> occurrences_;
    double falsified_weight_ = 0.0;
    int hard_falsified_ = 0;
    bool found_ = false;
    double best_cost_ = 0.0;
    int best_agreement_ = -1;
    std::vector<bool> best_values_;
};

// Initial assignment: hard units, then unit soft clauses (the model's raw
// answers), then false for free variables.
std::vector<bool> unit_initial_assignment(const MaxSatInstance& inst, std::vector<bool>* pinned_out) {
    std::vector<bool> values(inst.num_vars(), false);
    std::vector<bool> pinned(inst.num_vars(), false);
    std::vector<double> unit_weight(inst.num_vars(), -1.0);
    for (const SoftClause& c : inst.soft_clauses) {
        if (c.literals.size() != 1) continue;
        auto v = static_cast<std::size_t>(c.literals[0].var);
        if (c.weight > unit_weight[v]) {
            unit_weight[v] = c.weight;
            values[v] = c.literals[0].positive;
        }
    }
    for (const auto& clause : inst.hard_clauses) {
        if (clause.size() != 1) continue;
        auto v = static_cast<std::size_t>(clause[0].var);
        values[v] = clause[0].positive;
        pinned[v] = true;
    }
    if (pinned_out) *pinned_out = std::move(pinned);
    return values;
}

}  // namespace

Assignment solve_exact(const MaxSatInstance& inst, const SolverConfig& cfg) {
    cfg.validate();
    if (inst.num_vars() > static_cast<std::size_t>(cfg.exact_threshold))
        throw Error("instance has " + std::to_string(inst.num_vars()) +
                    " variables, above the exact threshold of " +
                    std::to_string(cfg.exact_threshold) + "; use solve_local");
    check_hard_units(inst);
    if (inst.num_vars() == 0) return Assignment{};
    return BranchAndBound(inst).run();
}

Assignment solve_local(const MaxSatInstance& inst, const SolverConfig& cfg) {
    cfg.validate();
    check_hard_units(inst);
    if (inst.num_vars() == 0) return Assignment{};

    const std::size_t n = inst.num_vars();
    struct Clause {
        std::vector<Literal> literals;
        double weight;
        bool hard;
    };
    std::vector<Clause> clauses;
    for (const SoftClause& c : inst.soft_clauses) clauses.push_back({c.literals, c.weight, false});
    for (const auto& h : inst.hard_clauses) clauses.push_back({h, 0.0, true});

    std::vector<std::vector<std::pair<int, bool>>> occ(n);  // var -> (clause, positive)
    for (std::size_t c = 0; c < clauses.size(); ++c)
        for (const Literal& l : clauses[c].literals)
            occ[static_cast<std::size_t>(l.var)].push_back({static_cast<int>(c), l.positive});

    std::vector<bool> pinned;
    const std::vector<bool> init = unit_initial_assignment(inst, &pinned);

    Rng rng(hash_combine(cfg.seed, 0x6d61787361740001ULL));
    std::vector<bool> best;
    double best_cost = 0.0;
    bool found = false;

    std::vector<bool> values;
    std::vector<int> true_count(clauses.size());
    // Unsatisfied-clause bookkeeping, maintained incrementally across flips.
    std::vector<int> unsat_hard, unsat_soft;
    std::vector<int> unsat_pos(clauses.size(), -1);
    double unsat_soft_weight = 0.0;

    auto mark_unsat = [&](std::size_t c) {
        auto& list = clauses[c].hard ? unsat_hard : unsat_soft;
        unsat_pos[c] = static_cast<int>(list.size());
        list.push_back(static_cast<int>(c));
        if (!clauses[c].hard) unsat_soft_weight += clauses[c].weight;
    };
    auto mark_sat = [&](std::size_t c) {
        auto& list = clauses[c].hard ? unsat_hard : unsat_soft;
        int pos = unsat_pos[c];
        int last = list.back();
        list[static_cast<std::size_t>(pos)] = last;
        unsat_pos[static_cast<std::size_t>(last)] = pos;
        list.pop_back();
        unsat_pos[c] = -1;
        if (!clauses[c].hard) unsat_soft_weight -= clauses[c].weight;
    };
    auto recount = [&]() {
        unsat_hard.clear();
        unsat_soft.clear();
        unsat_soft_weight = 0.0;
        std::fill(unsat_pos.begin(), unsat_pos.end(), -1);
        for (std::size_t c = 0; c < clauses.size(); ++c) {
            int t = 0;
            for (const Literal& l : clauses[c].literals)
                if (values[static_cast<std::size_t>(l.var)] == l.positive) ++t;
            true_count[c] = t;
            if (t == 0) mark_unsat(c);
        }
    };
    auto consider = [&]() {
        if (!unsat_hard.empty()) return;
        if (!found || unsat_soft_weight < best_cost) {
            found = true;
            best_cost = unsat_soft_weight;
            best = values;
        }
    };
    auto flip = [&](std::size_t v) {
        values[v] = !values[v];
        for (const auto& [c, positive] : occ[v]) {
            auto ci = static_cast<std::size_t>(c);
            if (positive == values[v]) {
                if (++true_count[ci] == 1) mark_sat(ci);
            } else {
                if (--true_count[ci] == 0) mark_unsat(ci);
            }
        }
    };
    // Weighted break of flipping v: total weight of clauses that would
    // become unsatisfied (hard clauses count as effectively infinite).
    auto break_weight = [&](std::size_t v) {
        double w = 0.0;
        for (const auto& [c, positive] : occ[v]) {
            auto ci = static_cast<std::size_t>(c);
            if (true_count[ci] == 1 && positive == values[v])
                w += clauses[ci].hard ? 1e18 : clauses[ci].weight;
        }
        return w;
    };

    for (int restart = 0; restart < cfg.restarts; ++restart) {
        values = init;
        if (restart > 0) {
            for (std::size_t v = 0; v < n; ++v)
                if (!pinned[v] && rng.chance(0.15)) values[v] = !values[v];
        }
        recount();
        consider();

        for (int step = 0; step < cfg.max_flips; ++step) {
            // Pick an unsatisfied clause: any hard one first, otherwise a
            // soft one drawn proportionally to weight.
            int chosen = -1;
            if (!unsat_hard.empty()) {
                chosen = unsat_hard[static_cast<std::size_t>(rng.next_below(unsat_hard.size()))];
            } else if (!unsat_soft.empty()) {
                double target = rng.next_double() * unsat_soft_weight;
                for (int c : unsat_soft) {
                    target -= clauses[static_cast<std::size_t>(c)].weight;
                    if (target <= 0.0) {
                        chosen = c;
                        break;
                    }
                }
                if (chosen < 0) chosen = unsat_soft.back();
            } else {
                break;  // everything satisfied
            }

            std::vector<std::size_t> candidates;
            for (const Literal& l : clauses[static_cast<std::size_t>(chosen)].literals)
                if (!pinned[static_cast<std::size_t>(l.var)])
                    candidates.push_back(static_cast<std::size_t>(l.var));
            if (candidates.empty()) break;  // clause fully pinned, no move can fix it

            std::size_t picked;
            double min_break = 0.0;
            std::size_t min_var = candidates[0];
            for (std::size_t i = 0; i < candidates.size(); ++i) {
                double b = break_weight(candidates[i]);
                if (i == 0 || b < min_break) {
                    min_break = b;
                    min_var = candidates[i];
                }
            }
            if (min_break > 0.0 && rng.chance(cfg.noise))
                picked = candidates[static_cast<std::size_t>(rng.next_below(candidates.size()))];
            else
                picked = min_var;

            flip(picked);
            consider();
        }
    }

    if (!found) throw UnsatisfiableError("hard clauses unsatisfiable");
    return make_assignment(inst, best);
}

Assignment solve_auto(const MaxSatInstance& inst, const SolverConfig& cfg) {
    if (inst.num_vars() <= static_cast<std::size_t>(cfg.exact_threshold))
        return solve_exact(inst, cfg);
    return solve_local(inst, cfg);
}

std::vector<SentenceKey> apply_assignment(BeliefBank& bank, const Assignment& a) {
    std::vector<SentenceKey> flipped;
    std::vector<Belief> updates;
    for (const auto& [key, belief] : bank.beliefs()) {
        bool value = a.at(key);  // throws when the assignment misses a key
        if (value == belief.label) continue;
        Belief b = belief;
        b.label = value;
        b.provenance = Provenance::solver_flipped;
        updates.push_back(b);
        flipped.push_back(key);
    }
    for (const Belief& b : updates) bank.upsert(b);
    return flipped;
}

std::int64_t wcnf_weight(double w) {
    auto scaled = static_cast<std::int64_t>(std::llround(w * kWcnfWeightScale));
    return std::max<std::int64_t>(1, scaled);
}

void export_wcnf(const MaxSatInstance& inst, std::ostream& out) {
    std::int64_t top = 1;
    for (const SoftClause& c : inst.soft_clauses) top += wcnf_weight(c.weight);

    out << "c weighted maxsat instance: " << inst.num_vars() << " vars, "
        << inst.soft_clauses.size() << " soft, " << inst.hard_clauses.size() << " hard\n";
    for (std::size_t i = 0; i < inst.variables.size(); ++i)
        out << "c var " << (i + 1) << ' ' << inst.variables[i].entity << ' '
            << inst.variables[i].template_id << "\n";
    out << "p wcnf " << inst.num_vars() << ' ' << (inst.soft_clauses.size() + inst.hard_clauses.size())
        << ' ' << top << "\n";
    auto write_literals = [&](const std::vector<Literal>& lits) {
        for (const Literal& l : lits) out << ' ' << (l.positive ? l.var + 1 : -(l.var + 1));
        out << " 0\n";
    };
    for (const SoftClause& c : inst.soft_clauses) {
        out << wcnf_weight(c.weight);
        write_literals(c.literals);
    }
    for (const auto& h : inst.hard_clauses) {
        out << top;
        write_literals(h);
    }
}

void export_wcnf(const MaxSatInstance& inst, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    export_wcnf(inst, out);
    if (!out) throw Error("write failed for '" + path.string() + "'");
}

std::vector<SentenceKey> read_wcnf_variable_map(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    std::vector<SentenceKey> vars;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream is(line);
        std::string c, tag;
        if (!(is >> c) || c != "c") continue;
        if (!(is >> tag) || tag != "var") continue;
        std::size_t num = 0;
        SentenceKey key;
        if (!(is >> num >> key.entity >> key.template_id))
            throw ParseError(path.string(), line_no, "malformed variable-map comment");
        if (num != vars.size() + 1)
            throw ParseError(path.string(), line_no, "variable map out of order");
        vars.push_back(std::move(key));
    }
    return vars;
}

}  // namespace beliefbank

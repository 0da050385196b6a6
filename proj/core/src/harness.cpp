#include "beliefbank/harness.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "beliefbank/feedback.hpp"
#include "beliefbank/remote_oracle.hpp"
#include "beliefbank/rng.hpp"

namespace beliefbank {

const char* experiment_kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::raw: return "raw";
        case ExperimentKind::constraints: return "constraints";
        case ExperimentKind::feedback_on_topic: return "feedback_on_topic";
        case ExperimentKind::feedback_relevant: return "feedback_relevant";
        case ExperimentKind::feedback_off_topic: return "feedback_off_topic";
        case ExperimentKind::feedback_relevant_plus_constraints:
            return "feedback_relevant_plus_constraints";
        case ExperimentKind::omniscient: return "omniscient";
    }
    return "raw";
}

std::optional<ExperimentKind> experiment_kind_from_name(const std::string& s) {
    for (ExperimentKind k :
         {ExperimentKind::raw, ExperimentKind::constraints, ExperimentKind::feedback_on_topic,
          ExperimentKind::feedback_relevant, ExperimentKind::feedback_off_topic,
          ExperimentKind::feedback_relevant_plus_constraints, ExperimentKind::omniscient})
        if (s == experiment_kind_name(k)) return k;
    return std::nullopt;
}

bool experiment_uses_solver(ExperimentKind k) {
    return k == ExperimentKind::constraints ||
           k == ExperimentKind::feedback_relevant_plus_constraints;
}

void ExperimentConfig::validate() const {
    if (n_batches < 1) throw Error("n_batches must be >= 1");
    if (feedback_k < 1) throw Error("feedback_k must be >= 1");
    solver.validate();
}

double f1_true(const BeliefBank& bank, const std::map<SentenceKey, bool>& gold) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (const auto& [key, b] : bank.beliefs()) {
        auto it = gold.find(key);
        if (it == gold.end()) continue;
        if (b.label && it->second) ++tp;
        else if (b.label && !it->second) ++fp;
        else if (!b.label && it->second) ++fn;
    }
    std::size_t denom = 2 * tp + fp + fn;
    return denom == 0 ? 1.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

namespace {

struct EntityGrounds {
    const Dataset& ds;
    std::map<std::string, std::vector<GroundConstraint>> cache;

    const std::vector<GroundConstraint>& for_entity(const std::string& entity) {
        auto it = cache.find(entity);
        if (it == cache.end()) it = cache.emplace(entity, ds.grounds_for(entity)).first;
        return it->second;
    }
};

std::uint64_t question_seed(const Seeds& seeds, const SentenceKey& q) {
    return hash_combine(seeds.feedback, hash64(q.str()));
}

FeedbackSelection select_for(ExperimentKind kind, const BeliefBank& bank, EntityGrounds& grounds,
                             const SentenceKey& q, int k, const Seeds& seeds) {
    switch (kind) {
        case ExperimentKind::feedback_on_topic:
            return select_on_topic(bank, q.entity, k, question_seed(seeds, q), q);
        case ExperimentKind::feedback_relevant:
        case ExperimentKind::feedback_relevant_plus_constraints:
        case ExperimentKind::omniscient:
            return select_relevant(bank, grounds.for_entity(q.entity), q, k,
                                   question_seed(seeds, q));
        case ExperimentKind::feedback_off_topic:
            return select_off_topic(bank, q.entity, k, question_seed(seeds, q));
        default:
            return FeedbackSelection{};
    }
}

std::vector<Fact> shuffled_questions(const Dataset& ds, std::uint64_t seed) {
    std::vector<Fact> qs = ds.facts;
    Rng rng(hash_combine(seed, hash64("shuffle")));
    rng.shuffle(qs);
    return qs;
}

BatchReport make_report(int batch_index, const BeliefBank& bank,
                        const std::map<SentenceKey, bool>& gold,
                        const std::vector<GroundConstraint>& all_grounds, int flips,
                        double pre_solve_fm) {
    BatchReport r;
    r.batch_index = batch_index;
    r.f1_true = f1_true(bank, gold);
    ConsistencyReport cr = consistency(bank, all_grounds);
    r.consistency = cr.consistency_fm;
    r.consistency_all = cr.consistency;
    r.consistency_pre_solve = pre_solve_fm;
    r.n_flips = flips;
    r.n_beliefs = bank.size();
    return r;
}

}  // namespace

int solve_bank(BeliefBank& bank, const Dataset& ds, const SolverConfig& solver,
               std::uint64_t salt) {
    int flips = 0;
    // Constraints never span entities, so each entity solves independently.
    for (const std::string& entity : ds.entities) {
        std::vector<Belief> beliefs = bank.beliefs_about(entity);
        if (beliefs.empty()) continue;
        BeliefBank sub(bank.registry());
        for (const Belief& b : beliefs) sub.upsert(b);
        MaxSatInstance inst = encode(sub, ds.grounds_for(entity), solver);
        SolverConfig per_entity = solver;
        per_entity.seed = hash_combine(solver.seed, hash_combine(hash64(entity), salt));
        Assignment a = solve_auto(inst, per_entity);
        for (const SentenceKey& key : apply_assignment(sub, a)) {
            bank.upsert(*sub.find(key));
            ++flips;
        }
    }
    return flips;
}

RunResult run(const Dataset& ds, Oracle& oracle, const ExperimentConfig& cfg,
              const BatchHook& hook) {
    cfg.validate();
    if (cfg.kind == ExperimentKind::omniscient) return run_omniscient(ds, oracle, cfg);

    const std::map<SentenceKey, bool> gold = ds.gold();
    const std::vector<GroundConstraint> all_grounds = ds.ground_all();
    EntityGrounds grounds{ds, {}};
    std::vector<Fact> questions = shuffled_questions(ds, cfg.seeds.shuffle);

    RunResult result;
    result.bank = BeliefBank(ds.templates);

    const std::size_t n = questions.size();
    const std::size_t nb = static_cast<std::size_t>(cfg.n_batches);
    std::size_t cursor = 0;
    for (std::size_t b = 0; b < nb; ++b) {
        std::size_t batch_size = n / nb + (b < n % nb ? 1 : 0);
        for (std::size_t i = 0; i < batch_size; ++i, ++cursor) {
            const Fact& q = questions[cursor];
            FeedbackSelection sel =
                select_for(cfg.kind, result.bank, grounds, q.key, cfg.feedback_k, cfg.seeds);
            std::string prompt = render_context(sel, q.key, *ds.templates);
            OracleAnswer answer;
            try {
                answer = oracle.query(q.key, prompt);
            } catch (const RemoteOracleError& e) {
                result.aborted = true;
                result.abort_reason = e.what();
                return result;  // partial reports already flushed into result
            }
            result.bank.upsert(Belief{q.key, answer.label, answer.confidence,
                                      Provenance::model_raw, static_cast<int>(b)});
        }

        int flips = 0;
        double pre_fm = consistency(result.bank, all_grounds).consistency_fm;
        if (experiment_uses_solver(cfg.kind))
            flips = solve_bank(result.bank, ds, cfg.solver, b);

        result.batches.push_back(make_report(static_cast<int>(b) + 1, result.bank, gold,
                                             all_grounds, flips, pre_fm));
        if (hook) hook(static_cast<int>(b) + 1, result.bank);
    }
    return result;
}

RunResult run_omniscient(const Dataset& ds, Oracle& oracle, const ExperimentConfig& cfg) {
    cfg.validate();
    const std::map<SentenceKey, bool> gold = ds.gold();
    const std::vector<GroundConstraint> all_grounds = ds.ground_all();
    EntityGrounds grounds{ds, {}};
    std::vector<Fact> questions = shuffled_questions(ds, cfg.seeds.shuffle);

    // Phase 1: every question answered raw.
    BeliefBank raw_bank(ds.templates);
    RunResult result;
    for (const Fact& q : questions) {
        FeedbackSelection none;
        std::string prompt = render_context(none, q.key, *ds.templates);
        OracleAnswer answer;
        try {
            answer = oracle.query(q.key, prompt);
        } catch (const RemoteOracleError& e) {
            result.bank = std::move(raw_bank);
            result.aborted = true;
            result.abort_reason = e.what();
            return result;
        }
        raw_bank.upsert(
            Belief{q.key, answer.label, answer.confidence, Provenance::model_raw, 0});
    }

    // Phase 2: re-ask everything with relevant feedback drawn from the full
    // phase-1 bank.
    result.bank = BeliefBank(ds.templates);
    for (const Fact& q : questions) {
        FeedbackSelection sel = select_relevant(raw_bank, grounds.for_entity(q.key.entity), q.key,
                                                cfg.feedback_k, question_seed(cfg.seeds, q.key));
        std::string prompt = render_context(sel, q.key, *ds.templates);
        OracleAnswer answer;
        try {
            answer = oracle.query(q.key, prompt);
        } catch (const RemoteOracleError& e) {
            result.aborted = true;
            result.abort_reason = e.what();
            return result;
        }
        result.bank.upsert(
            Belief{q.key, answer.label, answer.confidence, Provenance::model_raw, 1});
    }

    double fm = consistency(result.bank, all_grounds).consistency_fm;
    result.batches.push_back(make_report(1, result.bank, gold, all_grounds, 0, fm));
    return result;
}

std::vector<ConstraintTemplate> override_weights(const std::vector<ConstraintTemplate>& constraints,
                                                 double w_forward, double w_backward) {
    std::vector<ConstraintTemplate> out = constraints;
    for (ConstraintTemplate& c : out)
        c.weight = c.kind == ConstraintKind::backward_disjunction ? w_backward : w_forward;
    return out;
}

CalibrationResult calibrate(const Dataset& ds, Oracle& oracle,
                            const std::vector<std::string>& dev_entities,
                            const CalibrationGrid& grid, const SolverConfig& solver,
                            const std::vector<std::string>& test_entities) {
    if (grid.w_forward.empty() || grid.w_backward.empty() || grid.lambda.empty())
        throw Error("calibration grid must be non-empty");
    if (dev_entities.empty()) throw Error("calibration needs dev entities");
    {
        std::set<std::string> dev(dev_entities.begin(), dev_entities.end());
        for (const std::string& t : test_entities)
            if (dev.count(t))
                throw Error("dev and test entities must be disjoint: '" + t + "' is in both");
    }

    Dataset dev_ds = ds.restricted_to(dev_entities);
    if (dev_ds.facts.empty()) throw Error("dev entities have no facts in the dataset");
    const std::map<SentenceKey, bool> gold = dev_ds.gold();

    // Raw answers do not depend on the grid point; collect them once.
    BeliefBank raw_bank(dev_ds.templates);
    for (const Fact& q : dev_ds.facts) {
        FeedbackSelection none;
        OracleAnswer a = oracle.query(q.key, render_context(none, q.key, *dev_ds.templates));
        raw_bank.upsert(Belief{q.key, a.label, a.confidence, Provenance::model_raw, 0});
    }

    CalibrationResult result;
    bool have_best = false;
    for (double wf : grid.w_forward) {
        for (double wb : grid.w_backward) {
            for (double lambda : grid.lambda) {
                Dataset point_ds = dev_ds;
                point_ds.constraints = override_weights(dev_ds.constraints, wf, wb);
                SolverConfig point_solver = solver;
                point_solver.lambda = lambda;
                BeliefBank bank = raw_bank;
                solve_bank(bank, point_ds, point_solver);
                GridPoint p{wf, wb, lambda, f1_true(bank, gold)};
                result.grid.push_back(p);
                bool better = !have_best || p.dev_f1 > result.best.dev_f1 ||
                              (p.dev_f1 == result.best.dev_f1 &&
                               (p.lambda < result.best.lambda ||
                                (p.lambda == result.best.lambda &&
                                 (p.w_backward < result.best.w_backward ||
                                  (p.w_backward == result.best.w_backward &&
                                   p.w_forward < result.best.w_forward)))));
                if (better) {
                    result.best = p;
                    have_best = true;
                }
            }
        }
    }
    return result;
}

std::vector<std::pair<Belief, double>> rank_by_clash(const BeliefBank& bank,
                                                     const std::vector<GroundConstraint>& grounds,
                                                     const std::string& entity) {
    std::vector<std::pair<Belief, double>> ranked;
    for (const Belief& b : bank.beliefs_about(entity)) {
        double clash = 0.0;
        for (const GroundConstraint& g : grounds)
            if (g.mentions(b.key) && is_violated(bank, g)) clash += g.weight;
        ranked.emplace_back(b, clash);
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first.key < b.first.key;
    });
    return ranked;
}

int run_correction_session(BeliefBank& bank, const Dataset& ds, std::istream& in,
                           std::ostream& out) {
    EntityGrounds grounds{ds, {}};
    int corrections = 0;

    auto show_entity = [&](const std::string& entity) {
        auto ranked = rank_by_clash(bank, grounds.for_entity(entity), entity);
        if (ranked.empty()) {
            out << "no beliefs about '" << entity << "'\n";
            return;
        }
        out << "beliefs about '" << entity << "' (clash-ranked):\n";
        for (const auto& [b, clash] : ranked) {
            out << "  " << (b.label ? 'T' : 'F') << "  clash=" << std::fixed
                << std::setprecision(2) << clash << "  w=" << b.weight << "  "
                << b.key.template_id << "  [" << provenance_name(b.provenance) << "]  "
                << ds.templates->surface(b.key, b.label) << "\n";
        }
    };

    auto correct_key = [&](const std::string& entity, const std::string& template_id,
                           std::optional<bool> forced) {
        SentenceKey key{entity, template_id};
        const Belief* existing = bank.find(key);
        if (existing == nullptr) {
            out << "no belief for " << key.str() << "; nothing changed\n";
            return;
        }
        bool label = forced ? *forced : !existing->label;
        bank.upsert(Belief{key, label, 1.0, Provenance::human, existing->batch_index});
        ++corrections;
        out << "corrected " << key.str() << " -> " << (label ? 'T' : 'F') << " (human, hard)\n";
    };

    out << "correction session; 'help' lists commands\n";
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream is(line);
        std::string cmd;
        if (!(is >> cmd)) continue;
        if (cmd == "done" || cmd == "quit") break;
        if (cmd == "help") {
            out << "commands: entities | show <entity> | set <entity> <template_id> T|F | "
                   "flip <entity> <template_id> | done\n";
        } else if (cmd == "entities") {
            std::set<std::string> seen;
            for (const auto& [key, b] : bank.beliefs()) seen.insert(key.entity);
            for (const std::string& e : seen) {
                auto ranked = rank_by_clash(bank, grounds.for_entity(e), e);
                int clashing = 0;
                for (const auto& [b, clash] : ranked)
                    if (clash > 0.0) ++clashing;
                out << "  " << e << ": " << ranked.size() << " beliefs, " << clashing
                    << " in violated constraints\n";
            }
        } else if (cmd == "show") {
            std::string entity;
            if (is >> entity) show_entity(entity);
            else out << "usage: show <entity>\n";
        } else if (cmd == "set") {
            std::string entity, template_id, label;
            if (is >> entity >> template_id >> label && (label == "T" || label == "F"))
                correct_key(entity, template_id, label == "T");
            else out << "usage: set <entity> <template_id> T|F\n";
        } else if (cmd == "flip") {
            std::string entity, template_id;
            if (is >> entity >> template_id) correct_key(entity, template_id, std::nullopt);
            else out << "usage: flip <entity> <template_id>\n";
        } else {
            out << "unknown command '" << cmd << "'; try 'help'\n";
        }
    }
    out << "session closed; " << corrections << " corrections applied\n";
    return corrections;
}

namespace {

std::string metric(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6) << v;
    return os.str();
}

}  // namespace

void write_csv(const std::vector<ConfigReports>& reports, std::ostream& out) {
    out << "config,batch,f1,consistency,flips,beliefs\n";
    for (const ConfigReports& cr : reports)
        for (const BatchReport& b : cr.batches)
            out << cr.config_name << ',' << b.batch_index << ',' << metric(b.f1_true) << ','
                << metric(b.consistency) << ',' << b.n_flips << ',' << b.n_beliefs << "\n";
}

void write_csv(const std::vector<ConfigReports>& reports, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    write_csv(reports, out);
    if (!out) throw Error("write failed for '" + path.string() + "'");
}

namespace {

void write_block(const std::vector<ConfigReports>& reports, std::ostream& out,
                 const std::string& title, double BatchReport::*field) {
    std::size_t max_batches = 0;
    std::size_t name_width = 0;
    for (const ConfigReports& cr : reports) {
        max_batches = std::max(max_batches, cr.batches.size());
        name_width = std::max(name_width, cr.config_name.size());
    }
    name_width = std::max(name_width, title.size());

    out << std::left << std::setw(static_cast<int>(name_width)) << title << std::right;
    for (std::size_t b = 1; b <= max_batches; ++b) out << std::setw(7) << b;
    out << "\n";
    for (const ConfigReports& cr : reports) {
        out << std::left << std::setw(static_cast<int>(name_width)) << cr.config_name
            << std::right;
        for (const BatchReport& br : cr.batches)
            out << std::setw(7) << std::fixed << std::setprecision(1) << 100.0 * (br.*field);
        out << "\n";
    }
    out << "\n";
}

}  // namespace

void write_table(const std::vector<ConfigReports>& reports, std::ostream& out) {
    write_block(reports, out, "Accuracy (F1) after batch ->", &BatchReport::f1_true);
    write_block(reports, out, "Consistency (1-tau) after batch ->", &BatchReport::consistency);
    write_block(reports, out, "Consistency (all constraints) after batch ->",
                &BatchReport::consistency_all);
}

void write_table(const std::vector<ConfigReports>& reports, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    write_table(reports, out);
    if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace beliefbank

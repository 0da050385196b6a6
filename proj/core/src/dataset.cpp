#include "beliefbank/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "beliefbank/rng.hpp"

namespace beliefbank {

std::map<SentenceKey, bool> Dataset::gold() const {
    std::map<SentenceKey, bool> out;
    for (const Fact& f : facts) out[f.key] = f.label;
    return out;
}

double Dataset::positive_rate() const {
    if (facts.empty()) return 0.0;
    std::size_t pos = 0;
    for (const Fact& f : facts)
        if (f.label) ++pos;
    return static_cast<double>(pos) / static_cast<double>(facts.size());
}

std::vector<GroundConstraint> Dataset::grounds_for(const std::string& entity) const {
    return ground(*templates, constraints, entity);
}

std::vector<GroundConstraint> Dataset::ground_all() const {
    std::vector<GroundConstraint> out;
    for (const std::string& e : entities) {
        auto g = grounds_for(e);
        out.insert(out.end(), g.begin(), g.end());
    }
    return out;
}

Dataset Dataset::restricted_to(const std::vector<std::string>& subset) const {
    std::set<std::string> keep(subset.begin(), subset.end());
    Dataset out;
    out.templates = templates;
    out.constraints = constraints;
    for (const Fact& f : facts)
        if (keep.count(f.key.entity)) out.facts.push_back(f);
    for (const std::string& e : entities)
        if (keep.count(e)) out.entities.push_back(e);
    return out;
}

namespace {

bool parse_label_token(const std::string& file, std::size_t line_no, const std::string& t) {
    if (t == "T") return true;
    if (t == "F") return false;
    throw ParseError(file, line_no, "label must be T or F, got '" + t + "'");
}

// Fallback surfaces when no templates file is supplied: derived from ids of
// the form "rel.object".
SentenceTemplate synthesized_template(const std::string& id) {
    std::string rel = id;
    std::string obj;
    if (auto dot = id.find('.'); dot != std::string::npos) {
        rel = id.substr(0, dot);
        obj = id.substr(dot + 1);
    }
    SentenceTemplate t;
    t.id = id;
    if (rel == "isa" && !obj.empty()) {
        t.positive_surface = "a X is a " + obj;
        t.negative_surface = "a X is not a " + obj;
    } else if (rel == "has" && !obj.empty()) {
        t.positive_surface = "a X has " + obj;
        t.negative_surface = "a X does not have " + obj;
    } else {
        t.positive_surface = "X: " + id;
        t.negative_surface = "X: not " + id;
    }
    return t;
}

std::shared_ptr<TemplateRegistry> load_templates_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    auto registry = std::make_shared<TemplateRegistry>();
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::size_t t1 = line.find('\t');
        std::size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        if (t1 == std::string::npos || t2 == std::string::npos)
            throw ParseError(path.string(), line_no,
                             "template line needs 3 tab-separated fields");
        SentenceTemplate t;
        t.id = line.substr(0, t1);
        t.positive_surface = line.substr(t1 + 1, t2 - t1 - 1);
        t.negative_surface = line.substr(t2 + 1);
        try {
            registry->add(std::move(t));
        } catch (const Error& e) {
            throw ParseError(path.string(), line_no, e.what());
        }
    }
    return registry;
}

}  // namespace

DatasetPaths DatasetPaths::in_dir(const std::filesystem::path& dir) {
    return DatasetPaths{dir / "constraints.txt", dir / "facts.txt", dir / "templates.txt"};
}

Dataset load_dataset(const std::filesystem::path& constraints_path,
                     const std::filesystem::path& facts_path,
                     const std::filesystem::path& templates_path) {
    Dataset ds;
    ds.constraints = load_constraints(constraints_path);

    std::shared_ptr<TemplateRegistry> registry;
    bool explicit_templates = !templates_path.empty();
    if (explicit_templates) registry = load_templates_file(templates_path);
    else registry = std::make_shared<TemplateRegistry>();

    auto require_template = [&](const std::string& id, const std::string& file, std::size_t line) {
        if (registry->contains(id)) return;
        if (explicit_templates)
            throw ParseError(file, line, "unregistered template id '" + id + "'");
        registry->add(synthesized_template(id));
    };

    std::ifstream in(facts_path);
    if (!in) throw Error("cannot open '" + facts_path.string() + "'");
    std::string line;
    std::size_t line_no = 0;
    std::set<SentenceKey> seen;
    std::set<std::string> entities;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream is(line);
        std::string entity, template_id, label;
        if (!(is >> entity >> template_id >> label))
            throw ParseError(facts_path.string(), line_no, "fact line needs 3 fields");
        std::string extra;
        if (is >> extra)
            throw ParseError(facts_path.string(), line_no, "trailing token '" + extra + "'");
        require_template(template_id, facts_path.string(), line_no);
        Fact f;
        f.key = SentenceKey{entity, template_id};
        f.label = parse_label_token(facts_path.string(), line_no, label);
        if (!seen.insert(f.key).second)
            throw ParseError(facts_path.string(), line_no, "duplicate fact for " + f.key.str());
        ds.facts.push_back(std::move(f));
        entities.insert(entity);
    }

    // Constraint templates must resolve too (synthesized on demand when no
    // templates file was given).
    for (std::size_t i = 0; i < ds.constraints.size(); ++i) {
        const ConstraintTemplate& c = ds.constraints[i];
        require_template(c.premise.template_id, constraints_path.string(), i + 1);
        for (const TemplateCondition& tc : c.conclusion)
            require_template(tc.template_id, constraints_path.string(), i + 1);
    }

    ds.templates = registry;
    ds.entities.assign(entities.begin(), entities.end());
    return ds;
}

Dataset load_dataset(const DatasetPaths& paths) {
    std::filesystem::path templates;
    if (std::filesystem::exists(paths.templates)) templates = paths.templates;
    return load_dataset(paths.constraints, paths.facts, templates);
}

void save_dataset(const Dataset& ds, const DatasetPaths& paths) {
    save_constraints(ds.constraints, paths.constraints);

    std::ofstream facts(paths.facts);
    if (!facts) throw Error("cannot open '" + paths.facts.string() + "' for writing");
    for (const Fact& f : ds.facts)
        facts << f.key.entity << ' ' << f.key.template_id << ' ' << (f.label ? 'T' : 'F') << "\n";
    if (!facts) throw Error("write failed for '" + paths.facts.string() + "'");

    std::ofstream templates(paths.templates);
    if (!templates) throw Error("cannot open '" + paths.templates.string() + "' for writing");
    for (const auto& [id, t] : ds.templates->all())
        templates << id << '\t' << t.positive_surface << '\t' << t.negative_surface << "\n";
    if (!templates) throw Error("write failed for '" + paths.templates.string() + "'");
}

std::vector<Fact> propagate_silver(const std::vector<Fact>& leaf_labels,
                                   const std::vector<GroundConstraint>& grounds) {
    std::map<SentenceKey, bool> labels;
    // Parent edge of each derived label, for contradiction reporting.
    std::map<SentenceKey, std::pair<SentenceKey, const GroundConstraint*>> derived_from;

    auto chain = [&](SentenceKey key) {
        std::string out = key.str();
        while (true) {
            auto it = derived_from.find(key);
            if (it == derived_from.end()) break;
            key = it->second.first;
            out = key.str() + " -> " + out;
        }
        return out;
    };

    for (const Fact& f : leaf_labels) {
        auto [it, inserted] = labels.emplace(f.key, f.label);
        if (!inserted && it->second != f.label)
            throw Error("conflicting leaf labels for " + f.key.str());
    }

    bool changed = true;
    while (changed) {
        changed = false;
        for (const GroundConstraint& g : grounds) {
            if (g.disjuncts.size() != 1) continue;  // disjunctions cannot derive
            auto premise = labels.find(g.premise.key);
            if (premise == labels.end() || premise->second != g.premise.label) continue;
            const KeyCondition& conc = g.disjuncts[0];
            auto existing = labels.find(conc.key);
            if (existing == labels.end()) {
                labels.emplace(conc.key, conc.label);
                derived_from.emplace(conc.key, std::make_pair(g.premise.key, &g));
                changed = true;
            } else if (existing->second != conc.label) {
                throw Error("silver propagation derived both labels for " + conc.key.str() +
                            ": [" + chain(existing->first) + " as " +
                            (existing->second ? "T" : "F") + "] vs [" + chain(g.premise.key) +
                            " -> " + conc.key.str() + " as " + (conc.label ? "T" : "F") + "]");
            }
        }
    }

    std::vector<Fact> out;
    out.reserve(labels.size());
    for (const auto& [key, label] : labels) out.push_back(Fact{key, label});
    return out;
}

void GeneratorConfig::validate() const {
    if (n_concepts < 1 || n_entities < 1 || properties_per_concept < 1 ||
        mutex_sibling_groups < 1 || property_pool < 1)
        throw Error("generator counts must all be >= 1");
    if (property_pool < properties_per_concept)
        throw Error("property pool must be at least properties_per_concept");
    if (!(forward_weight_min > 0.0 && forward_weight_min <= forward_weight_max))
        throw Error("bad forward weight range");
    if (!(backward_weight_min > 0.0 && backward_weight_min <= backward_weight_max))
        throw Error("bad backward weight range");
    if (!(mutex_weight > 0.0)) throw Error("mutex weight must be positive");
}

namespace {

// Deterministic pronounceable names for concepts, properties and entities.
class NameMaker {
public:
    explicit NameMaker(Rng& rng) : rng_(rng) {}

    std::string fresh() {
        static const char* consonants = "bdfgklmnprstvz";
        static const char* vowels = "aeiou";
        for (;;) {
            std::string name;
            int syllables = 2 + static_cast<int>(rng_.next_below(2));
            for (int s = 0; s < syllables; ++s) {
                name += consonants[rng_.next_below(14)];
                name += vowels[rng_.next_below(5)];
            }
            if (rng_.chance(0.5)) name += consonants[rng_.next_below(14)];
            if (used_.insert(name).second) return name;
        }
    }

private:
    Rng& rng_;
    std::set<std::string> used_;
};

}  // namespace

Dataset generate(const GeneratorConfig& cfg) {
    cfg.validate();
    Rng rng(hash_combine(cfg.seed, hash64("datagen")));
    NameMaker names(rng);

    // Concept forest: a few roots, every later concept attached to a random
    // earlier one. Entities live at the leaves.
    const int n_roots = std::max(1, std::min({cfg.n_concepts, 2 + cfg.n_concepts / 6, 4}));
    std::vector<std::string> concepts;
    std::vector<int> parent(static_cast<std::size_t>(cfg.n_concepts), -1);
    for (int i = 0; i < cfg.n_concepts; ++i) {
        concepts.push_back(names.fresh());
        if (i >= n_roots) parent[static_cast<std::size_t>(i)] = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i)));
    }
    std::vector<std::vector<int>> children(static_cast<std::size_t>(cfg.n_concepts));
    for (int i = 0; i < cfg.n_concepts; ++i)
        if (parent[static_cast<std::size_t>(i)] >= 0)
            children[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])].push_back(i);
    std::vector<int> leaves;
    for (int i = 0; i < cfg.n_concepts; ++i)
        if (children[static_cast<std::size_t>(i)].empty()) leaves.push_back(i);

    // Property pool; each concept carries a distinct draw from it.
    std::vector<std::string> pool;
    for (int p = 0; p < cfg.property_pool; ++p) pool.push_back(names.fresh());
    std::vector<std::vector<int>> concept_properties(static_cast<std::size_t>(cfg.n_concepts));
    std::map<int, std::vector<int>> property_carriers;  // pool index -> concepts
    for (int c = 0; c < cfg.n_concepts; ++c) {
        auto picks = rng.sample_indices(static_cast<std::size_t>(cfg.property_pool),
                                        static_cast<std::size_t>(cfg.properties_per_concept));
        std::sort(picks.begin(), picks.end());
        for (std::size_t p : picks) {
            concept_properties[static_cast<std::size_t>(c)].push_back(static_cast<int>(p));
            property_carriers[static_cast<int>(p)].push_back(c);
        }
    }

    auto registry = std::make_shared<TemplateRegistry>();
    auto isa_id = [&](int c) { return "isa." + concepts[static_cast<std::size_t>(c)]; };
    auto has_id = [&](int p) { return "has." + pool[static_cast<std::size_t>(p)]; };
    for (int c = 0; c < cfg.n_concepts; ++c) {
        const std::string& name = concepts[static_cast<std::size_t>(c)];
        registry->add(SentenceTemplate{isa_id(c), "a X is a " + name, "a X is not a " + name});
    }
    for (const auto& [p, carriers] : property_carriers) {
        const std::string& name = pool[static_cast<std::size_t>(p)];
        registry->add(SentenceTemplate{has_id(p), "a X has " + name, "a X does not have " + name});
    }

    Dataset ds;
    ds.templates = registry;

    // Forward implications: child isa parent, concept has property.
    for (int c = 0; c < cfg.n_concepts; ++c) {
        if (parent[static_cast<std::size_t>(c)] >= 0) {
            ConstraintTemplate t;
            t.kind = ConstraintKind::forward_implication;
            t.premise = TemplateCondition{isa_id(c), true};
            t.conclusion = {TemplateCondition{isa_id(parent[static_cast<std::size_t>(c)]), true}};
            t.weight = rng.uniform(cfg.forward_weight_min, cfg.forward_weight_max);
            ds.constraints.push_back(std::move(t));
        }
        for (int p : concept_properties[static_cast<std::size_t>(c)]) {
            ConstraintTemplate t;
            t.kind = ConstraintKind::forward_implication;
            t.premise = TemplateCondition{isa_id(c), true};
            t.conclusion = {TemplateCondition{has_id(p), true}};
            t.weight = rng.uniform(cfg.forward_weight_min, cfg.forward_weight_max);
            ds.constraints.push_back(std::move(t));
        }
    }

    // Mutual exclusivity over sibling groups: the root set first, then each
    // concept's children, until the configured group budget runs out.
    std::vector<std::vector<int>> sibling_groups;
    {
        std::vector<int> roots;
        for (int i = 0; i < n_roots; ++i) roots.push_back(i);
        sibling_groups.push_back(roots);
        for (int c = 0; c < cfg.n_concepts; ++c)
            if (children[static_cast<std::size_t>(c)].size() >= 2)
                sibling_groups.push_back(children[static_cast<std::size_t>(c)]);
    }
    int groups_used = 0;
    for (const auto& group : sibling_groups) {
        if (group.size() < 2) continue;
        if (groups_used >= cfg.mutex_sibling_groups) break;
        ++groups_used;
        for (std::size_t i = 0; i < group.size(); ++i) {
            for (std::size_t j = 0; j < group.size(); ++j) {
                if (i == j) continue;
                ConstraintTemplate t;
                t.kind = ConstraintKind::mutex_half;
                t.premise = TemplateCondition{isa_id(group[i]), true};
                t.conclusion = {TemplateCondition{isa_id(group[j]), false}};
                t.weight = cfg.mutex_weight;
                ds.constraints.push_back(std::move(t));
            }
        }
    }

    // Backward disjunctions: property implies the disjunction of exactly the
    // concepts that carry it.
    for (const auto& [p, carriers] : property_carriers) {
        ConstraintTemplate t;
        t.kind = ConstraintKind::backward_disjunction;
        t.premise = TemplateCondition{has_id(p), true};
        for (int c : carriers) t.conclusion.push_back(TemplateCondition{isa_id(c), true});
        t.weight = rng.uniform(cfg.backward_weight_min, cfg.backward_weight_max);
        ds.constraints.push_back(std::move(t));
    }

    // Entities: one leaf concept each; gold labels are the propagation
    // closure of that leaf, every other in-graph sentence explicitly false.
    std::set<std::string> entity_names;
    for (int e = 0; e < cfg.n_entities; ++e) entity_names.insert(names.fresh());
    ds.entities.assign(entity_names.begin(), entity_names.end());

    for (const std::string& entity : ds.entities) {
        int leaf = leaves[static_cast<std::size_t>(rng.next_below(leaves.size()))];
        auto grounds = ground(*registry, ds.constraints, entity);
        std::vector<Fact> closure =
            propagate_silver({Fact{SentenceKey{entity, isa_id(leaf)}, true}}, grounds);
        std::map<SentenceKey, bool> labels;
        for (const Fact& f : closure) labels[f.key] = f.label;
        for (int c = 0; c < cfg.n_concepts; ++c) {
            SentenceKey key{entity, isa_id(c)};
            labels.emplace(key, false);
        }
        for (const auto& [p, carriers] : property_carriers) {
            SentenceKey key{entity, has_id(p)};
            labels.emplace(key, false);
        }
        for (const auto& [key, label] : labels) ds.facts.push_back(Fact{key, label});
    }
    std::sort(ds.facts.begin(), ds.facts.end(),
              [](const Fact& a, const Fact& b) { return a.key < b.key; });
    return ds;
}

}  // namespace beliefbank

#include "beliefbank/constraints.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace beliefbank {

const char* constraint_kind_name(ConstraintKind k) {
    switch (k) {
        case ConstraintKind::forward_implication: return "forward_implication";
        case ConstraintKind::mutex_half: return "mutex_half";
        case ConstraintKind::backward_disjunction: return "backward_disjunction";
    }
    return "forward_implication";
}

std::optional<ConstraintKind> constraint_kind_from_name(const std::string& s) {
    if (s == "forward_implication") return ConstraintKind::forward_implication;
    if (s == "mutex_half") return ConstraintKind::mutex_half;
    if (s == "backward_disjunction") return ConstraintKind::backward_disjunction;
    return std::nullopt;
}

void ConstraintTemplate::validate() const {
    if (!(weight > 0.0))
        throw Error("constraint weight must be positive, got " + std::to_string(weight));
    if (conclusion.empty()) throw Error("constraint needs at least one conclusion disjunct");
    if (kind != ConstraintKind::backward_disjunction && conclusion.size() != 1)
        throw Error(std::string(constraint_kind_name(kind)) + " must have exactly one conclusion");
}

bool GroundConstraint::mentions(const SentenceKey& key) const {
    if (premise.key == key) return true;
    for (const KeyCondition& d : disjuncts)
        if (d.key == key) return true;
    return false;
}

std::vector<GroundConstraint> ground(const TemplateRegistry& registry,
                                     const std::vector<ConstraintTemplate>& templates,
                                     const std::string& entity) {
    std::vector<GroundConstraint> out;
    out.reserve(templates.size());
    for (const ConstraintTemplate& t : templates) {
        t.validate();
        if (!registry.contains(t.premise.template_id))
            throw Error("unknown template id '" + t.premise.template_id + "' in constraint");
        GroundConstraint g;
        g.premise = KeyCondition{SentenceKey{entity, t.premise.template_id}, t.premise.label};
        for (const TemplateCondition& c : t.conclusion) {
            if (!registry.contains(c.template_id))
                throw Error("unknown template id '" + c.template_id + "' in constraint");
            g.disjuncts.push_back(KeyCondition{SentenceKey{entity, c.template_id}, c.label});
        }
        g.weight = t.weight;
        g.kind = t.kind;
        out.push_back(std::move(g));
    }
    return out;
}

namespace {

enum class Status { not_applicable, satisfied, violated };

Status evaluate(const BeliefBank& bank, const GroundConstraint& g) {
    const Belief* premise = bank.find(g.premise.key);
    if (premise == nullptr || premise->label != g.premise.label) return Status::not_applicable;
    bool any_holds = false;
    for (const KeyCondition& d : g.disjuncts) {
        const Belief* b = bank.find(d.key);
        if (b == nullptr) return Status::not_applicable;  // unanswered conclusion
        if (b->label == d.label) any_holds = true;
    }
    return any_holds ? Status::satisfied : Status::violated;
}

}  // namespace

bool is_violated(const BeliefBank& bank, const GroundConstraint& g) {
    return evaluate(bank, g) == Status::violated;
}

std::optional<bool> implied_query_label(const GroundConstraint& g, const SentenceKey& query,
                                        const KeyCondition& belief) {
    if (g.disjuncts.size() != 1) return std::nullopt;
    if (belief.key == query) return std::nullopt;
    const KeyCondition& conclusion = g.disjuncts[0];
    if (g.premise.key == belief.key && conclusion.key == query)
        return belief.label == g.premise.label ? conclusion.label : !conclusion.label;
    if (conclusion.key == belief.key && g.premise.key == query)
        return belief.label == conclusion.label ? g.premise.label : !g.premise.label;
    return std::nullopt;
}

ConsistencyReport consistency(const BeliefBank& bank, const std::vector<GroundConstraint>& grounds) {
    ConsistencyReport r;
    for (const GroundConstraint& g : grounds) {
        Status s = evaluate(bank, g);
        if (s == Status::not_applicable) continue;
        bool single = g.kind != ConstraintKind::backward_disjunction;
        ++r.applicable;
        if (single) ++r.applicable_fm;
        if (s == Status::violated) {
            ++r.violated;
            if (single) ++r.violated_fm;
        }
    }
    r.tau = r.applicable ? static_cast<double>(r.violated) / static_cast<double>(r.applicable) : 0.0;
    r.tau_fm = r.applicable_fm
                   ? static_cast<double>(r.violated_fm) / static_cast<double>(r.applicable_fm)
                   : 0.0;
    r.consistency = 1.0 - r.tau;
    r.consistency_fm = 1.0 - r.tau_fm;
    return r;
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream is(line);
    std::string t;
    while (is >> t) tokens.push_back(t);
    return tokens;
}

bool parse_label_token(const std::string& file, std::size_t line_no, const std::string& t) {
    if (t == "T") return true;
    if (t == "F") return false;
    throw ParseError(file, line_no, "label must be T or F, got '" + t + "'");
}

}  // namespace

std::vector<ConstraintTemplate> parse_constraints(std::istream& in, const std::string& name) {
    std::vector<ConstraintTemplate> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        auto tokens = tokenize(line);
        if (tokens.empty()) continue;
        if (tokens.size() < 6)
            throw ParseError(name, line_no, "constraint line needs at least 6 tokens");

        ConstraintTemplate c;
        auto kind = constraint_kind_from_name(tokens[0]);
        if (!kind) throw ParseError(name, line_no, "unknown constraint kind '" + tokens[0] + "'");
        c.kind = *kind;
        c.premise = TemplateCondition{tokens[1], parse_label_token(name, line_no, tokens[2])};

        // Disjuncts: (template label) pairs separated by '|'; last token is
        // the weight.
        std::size_t i = 3;
        const std::size_t weight_index = tokens.size() - 1;
        while (i < weight_index) {
            if (i + 1 >= weight_index)
                throw ParseError(name, line_no, "dangling conclusion template '" + tokens[i] + "'");
            c.conclusion.push_back(
                TemplateCondition{tokens[i], parse_label_token(name, line_no, tokens[i + 1])});
            i += 2;
            if (i < weight_index) {
                if (tokens[i] != "|")
                    throw ParseError(name, line_no, "expected '|' between disjuncts, got '" + tokens[i] + "'");
                ++i;
            }
        }
        try {
            std::size_t pos = 0;
            c.weight = std::stod(tokens[weight_index], &pos);
            if (pos != tokens[weight_index].size()) throw std::invalid_argument(tokens[weight_index]);
        } catch (const std::exception&) {
            throw ParseError(name, line_no, "bad weight '" + tokens[weight_index] + "'");
        }
        try {
            c.validate();
        } catch (const Error& e) {
            throw ParseError(name, line_no, e.what());
        }
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<ConstraintTemplate> load_constraints(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    return parse_constraints(in, path.string());
}

std::string format_constraint(const ConstraintTemplate& c) {
    std::ostringstream os;
    os << constraint_kind_name(c.kind) << ' ' << c.premise.template_id << ' '
       << (c.premise.label ? 'T' : 'F');
    for (std::size_t i = 0; i < c.conclusion.size(); ++i) {
        if (i > 0) os << " |";
        os << ' ' << c.conclusion[i].template_id << ' ' << (c.conclusion[i].label ? 'T' : 'F');
    }
    os << ' ' << std::setprecision(17) << c.weight;
    return os.str();
}

void save_constraints(const std::vector<ConstraintTemplate>& constraints,
                      const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    for (const ConstraintTemplate& c : constraints) out << format_constraint(c) << "\n";
    if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace beliefbank

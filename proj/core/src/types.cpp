#include "beliefbank/types.hpp"

namespace beliefbank {
namespace {

// Counts standalone X slots (an 'X' not flanked by identifier characters).
int count_slots(const std::string& s) {
    int n = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != 'X') continue;
        bool left_ok = i == 0 || !std::isalnum(static_cast<unsigned char>(s[i - 1]));
        bool right_ok = i + 1 == s.size() || !std::isalnum(static_cast<unsigned char>(s[i + 1]));
        if (left_ok && right_ok) ++n;
    }
    return n;
}

}  // namespace

const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::model_raw: return "model_raw";
        case Provenance::solver_flipped: return "solver_flipped";
        case Provenance::human: return "human";
    }
    return "model_raw";
}

std::optional<Provenance> provenance_from_name(const std::string& s) {
    if (s == "model_raw") return Provenance::model_raw;
    if (s == "solver_flipped") return Provenance::solver_flipped;
    if (s == "human") return Provenance::human;
    return std::nullopt;
}

void TemplateRegistry::add(SentenceTemplate t) {
    if (t.id.empty()) throw Error("template id must be non-empty");
    if (t.id.find_first_of(" \t\n") != std::string::npos)
        throw Error("template id must not contain whitespace: '" + t.id + "'");
    if (count_slots(t.positive_surface) != 1)
        throw Error("template '" + t.id + "': positive surface needs exactly one X slot");
    if (count_slots(t.negative_surface) != 1)
        throw Error("template '" + t.id + "': negative surface needs exactly one X slot");
    auto it = templates_.find(t.id);
    if (it != templates_.end()) {
        if (it->second.positive_surface != t.positive_surface ||
            it->second.negative_surface != t.negative_surface)
            throw Error("conflicting redefinition of template '" + t.id + "'");
        return;
    }
    templates_.emplace(t.id, std::move(t));
}

const SentenceTemplate& TemplateRegistry::get(const std::string& id) const {
    auto it = templates_.find(id);
    if (it == templates_.end()) throw Error("unknown template id '" + id + "'");
    return it->second;
}

std::string TemplateRegistry::substitute_slot(const std::string& surface, const std::string& entity) {
    std::string out;
    out.reserve(surface.size() + entity.size());
    for (std::size_t i = 0; i < surface.size(); ++i) {
        if (surface[i] == 'X') {
            bool left_ok = i == 0 || !std::isalnum(static_cast<unsigned char>(surface[i - 1]));
            bool right_ok = i + 1 == surface.size() || !std::isalnum(static_cast<unsigned char>(surface[i + 1]));
            if (left_ok && right_ok) {
                out += entity;
                continue;
            }
        }
        out += surface[i];
    }
    return out;
}

std::string TemplateRegistry::surface(const SentenceKey& key, bool label) const {
    const SentenceTemplate& t = get(key.template_id);
    return substitute_slot(label ? t.positive_surface : t.negative_surface, key.entity);
}

std::string TemplateRegistry::question(const SentenceKey& key) const {
    const SentenceTemplate& t = get(key.template_id);
    return substitute_slot(t.positive_surface, key.entity) + "?";
}

}  // namespace beliefbank

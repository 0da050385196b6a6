#pragma once

// Sentence identity and surface realization. A sentence is addressed by
// (entity, template_id); its natural-language form is derived on demand by
// substituting the entity into the template's X slot.

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "beliefbank/error.hpp"

namespace beliefbank {

struct SentenceKey {
    std::string entity;       // canonical lowercase, e.g. "poodle"
    std::string template_id;  // e.g. "isa.dog"

    auto operator<=>(const SentenceKey&) const = default;

    std::string str() const { return entity + "/" + template_id; }
};

struct SentenceTemplate {
    std::string id;
    std::string positive_surface;  // contains exactly one X slot
    std::string negative_surface;  // the negation, same slot
};

enum class Provenance { model_raw, solver_flipped, human };

const char* provenance_name(Provenance p);
std::optional<Provenance> provenance_from_name(const std::string& s);

struct Belief {
    SentenceKey key;
    bool label = true;          // T/F; F means the negation is believed
    double weight = 1.0;        // strength in [0, 1]
    Provenance provenance = Provenance::model_raw;
    int batch_index = 0;

    bool operator==(const Belief&) const = default;
};

class TemplateRegistry {
public:
    // Validates that both surfaces carry exactly one X slot. Re-adding an
    // identical template is a no-op; a conflicting redefinition throws.
    void add(SentenceTemplate t);

    bool contains(const std::string& id) const { return templates_.count(id) != 0; }
    const SentenceTemplate& get(const std::string& id) const;
    std::size_t size() const { return templates_.size(); }
    const std::map<std::string, SentenceTemplate>& all() const { return templates_; }

    // Surface form of the sentence with the given truth label.
    std::string surface(const SentenceKey& key, bool label) const;
    // The positive surface as a question, e.g. "a swallow has gills?".
    std::string question(const SentenceKey& key) const;

    static std::string substitute_slot(const std::string& surface, const std::string& entity);

private:
    std::map<std::string, SentenceTemplate> templates_;
};

using TemplateRegistryPtr = std::shared_ptr<const TemplateRegistry>;

}  // namespace beliefbank

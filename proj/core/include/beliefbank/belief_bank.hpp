#pragma once

// The BeliefBank: the system's current beliefs, one per sentence, plus a
// revision log that replays to the current state. Single writer; readers
// take value copies as snapshots.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "beliefbank/types.hpp"

namespace beliefbank {

struct RevisionEntry {
    std::optional<bool> old_label;  // empty on first insert of the key
    Belief after;                   // full belief after the revision

    bool is_flip() const { return old_label && *old_label != after.label; }
    bool operator==(const RevisionEntry&) const = default;
};

class BeliefBank {
public:
    BeliefBank() = default;
    explicit BeliefBank(TemplateRegistryPtr registry) : registry_(std::move(registry)) {}

    // Inserts or overwrites the belief for b.key. Rejects weights outside
    // [0, 1] and, when a registry is attached, unknown template ids. Human
    // beliefs must carry weight 1. Every call appends to the revision log.
    void upsert(const Belief& b);

    const Belief* find(const SentenceKey& key) const;
    bool contains(const SentenceKey& key) const { return beliefs_.count(key) != 0; }
    std::size_t size() const { return beliefs_.size(); }
    bool empty() const { return beliefs_.empty(); }

    // All beliefs about the entity, sorted by template_id.
    std::vector<Belief> beliefs_about(const std::string& entity) const;

    const std::map<SentenceKey, Belief>& beliefs() const { return beliefs_; }
    const std::vector<RevisionEntry>& log() const { return log_; }
    const TemplateRegistryPtr& registry() const { return registry_; }

    void save(const std::filesystem::path& path) const;
    void save(std::ostream& out) const;
    static BeliefBank load(const std::filesystem::path& path, TemplateRegistryPtr registry = nullptr);
    static BeliefBank load(std::istream& in, const std::string& name,
                           TemplateRegistryPtr registry = nullptr);

    // Rebuilds a bank by upserting every log entry in order.
    static BeliefBank replay(const std::vector<RevisionEntry>& log, TemplateRegistryPtr registry = nullptr);

    bool operator==(const BeliefBank& other) const {
        return beliefs_ == other.beliefs_ && log_ == other.log_;
    }

private:
    TemplateRegistryPtr registry_;
    std::map<SentenceKey, Belief> beliefs_;
    std::vector<RevisionEntry> log_;
};

}  // namespace beliefbank

#pragma once

// Selection of prior beliefs as query context. "Relevant" selection walks
// the constraint graph one hop: a held belief qualifies when some ground
// constraint tying it to the query would be violated under a hypothetical
// answer (either T or F) to the query.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "beliefbank/belief_bank.hpp"
#include "beliefbank/constraints.hpp"

namespace beliefbank {

enum class FeedbackPolicy { none, on_topic, relevant, off_topic };

const char* feedback_policy_name(FeedbackPolicy p);

struct SelectedBelief {
    Belief belief;
    bool padding = false;  // true when added as on-topic filler, not by clash
    bool operator==(const SelectedBelief&) const = default;
};

struct FeedbackSelection {
    FeedbackPolicy policy = FeedbackPolicy::none;
    std::vector<SelectedBelief> chosen;  // at most k
    int k = 3;
};

// Uniform sample without replacement from the entity's beliefs, excluding
// the query sentence itself. Deterministic given the seed; returns all
// available beliefs when fewer than k exist.
FeedbackSelection select_on_topic(const BeliefBank& bank, const std::string& entity, int k,
                                  std::uint64_t seed,
                                  const std::optional<SentenceKey>& exclude = std::nullopt);

// Uniform sample from beliefs about any *other* entity.
FeedbackSelection select_off_topic(const BeliefBank& bank, const std::string& entity, int k,
                                   std::uint64_t seed);

// Held beliefs whose constraints would clash with a hypothetical answer to
// the query, scored by constraint weight (ties: higher belief weight, then
// template_id). Pads with on-topic picks when fewer than k clash.
FeedbackSelection select_relevant(const BeliefBank& bank,
                                  const std::vector<GroundConstraint>& grounds,
                                  const SentenceKey& query, int k, std::uint64_t seed);

// "CONTEXT <s1>. <s2>. QUERY <question>?" -- or just "QUERY ...?" when the
// selection is empty.
std::string render_context(const FeedbackSelection& sel, const SentenceKey& query,
                           const TemplateRegistry& registry);

// Splits a rendered prompt back into its context sentences and question.
struct PromptParts {
    std::string context_text;  // "<s1>. <s2>." or empty
    std::string question_text; // "a swallow has gills?"
};
PromptParts split_prompt(const std::string& prompt);

// Context sentences as standalone strings (trailing periods stripped).
std::vector<std::string> split_context_sentences(const std::string& context_text);

}  // namespace beliefbank

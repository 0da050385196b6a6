#include "beliefbank/feedback.hpp"

#include <algorithm>
#include <map>

#include "beliefbank/rng.hpp"

namespace beliefbank {

const char* feedback_policy_name(FeedbackPolicy p) {
    switch (p) {
        case FeedbackPolicy::none: return "none";
        case FeedbackPolicy::on_topic: return "on_topic";
        case FeedbackPolicy::relevant: return "relevant";
        case FeedbackPolicy::off_topic: return "off_topic";
    }
    return "none";
}

namespace {

FeedbackSelection sample_uniform(std::vector<Belief> pool, FeedbackPolicy policy, int k,
                                 std::uint64_t seed) {
    if (k < 1) throw Error("feedback k must be >= 1");
    FeedbackSelection sel;
    sel.policy = policy;
    sel.k = k;
    Rng rng(hash_combine(seed, hash64(feedback_policy_name(policy))));
    auto picks = rng.sample_indices(pool.size(), static_cast<std::size_t>(k));
    for (std::size_t i : picks) sel.chosen.push_back(SelectedBelief{pool[i], false});
    return sel;
}

}  // namespace

FeedbackSelection select_on_topic(const BeliefBank& bank, const std::string& entity, int k,
                                  std::uint64_t seed, const std::optional<SentenceKey>& exclude) {
    std::vector<Belief> pool;
    for (Belief& b : bank.beliefs_about(entity)) {
        if (exclude && b.key == *exclude) continue;
        pool.push_back(std::move(b));
    }
    return sample_uniform(std::move(pool), FeedbackPolicy::on_topic, k, seed);
}

FeedbackSelection select_off_topic(const BeliefBank& bank, const std::string& entity, int k,
                                   std::uint64_t seed) {
    std::vector<Belief> pool;
    for (const auto& [key, b] : bank.beliefs())
        if (key.entity != entity) pool.push_back(b);
    return sample_uniform(std::move(pool), FeedbackPolicy::off_topic, k, seed);
}

namespace {

// Would this constraint be violated if the bank held (query -> label)?
// Presence semantics mirror the consistency metric, with the hypothetical
// query belief overriding whatever the bank holds for it.
bool violated_under_hypothesis(const BeliefBank& bank, const GroundConstraint& g,
                               const SentenceKey& query, bool label) {
    auto lookup = [&](const SentenceKey& key) -> std::optional<bool> {
        if (key == query) return label;
        const Belief* b = bank.find(key);
        if (b == nullptr) return std::nullopt;
        return b->label;
    };
    auto premise = lookup(g.premise.key);
    if (!premise || *premise != g.premise.label) return false;
    for (const KeyCondition& d : g.disjuncts) {
        auto v = lookup(d.key);
        if (!v) return false;          // unanswered conclusion: not applicable
        if (*v == d.label) return false;  // some disjunct holds
    }
    return true;
}

}  // namespace

FeedbackSelection select_relevant(const BeliefBank& bank,
                                  const std::vector<GroundConstraint>& grounds,
                                  const SentenceKey& query, int k, std::uint64_t seed) {
    if (k < 1) throw Error("feedback k must be >= 1");

    struct Score {
        double clash_weight = 0.0;
        Belief belief;
    };
    std::map<SentenceKey, Score> scores;
    auto credit = [&](const SentenceKey& key, double weight) {
        if (key == query) return;
        const Belief* b = bank.find(key);
        if (b == nullptr) return;
        auto& s = scores[key];
        s.belief = *b;
        s.clash_weight = std::max(s.clash_weight, weight);
    };
    for (const GroundConstraint& g : grounds) {
        if (!g.mentions(query)) continue;
        for (bool hypothetical : {true, false}) {
            // Direct violation of the constraint with the hypothetical
            // answer in place (covers disjunctive constraints too).
            if (violated_under_hypothesis(bank, g, query, hypothetical)) {
                credit(g.premise.key, g.weight);
                for (const KeyCondition& d : g.disjuncts) credit(d.key, g.weight);
            }
            // Associative clash: the constraint ties a held belief to a
            // label for the query, and the hypothetical answer contradicts
            // it. This is what makes "X is not a fish" relevant to
            // "does X have gills?".
            auto check_side = [&](const SentenceKey& side) {
                if (side == query) return;
                const Belief* b = bank.find(side);
                if (b == nullptr) return;
                auto implied = implied_query_label(g, query, KeyCondition{side, b->label});
                if (implied && *implied != hypothetical) credit(side, g.weight);
            };
            check_side(g.premise.key);
            for (const KeyCondition& d : g.disjuncts) check_side(d.key);
        }
    }

    std::vector<Score> ranked;
    ranked.reserve(scores.size());
    for (auto& [key, s] : scores) ranked.push_back(s);
    std::sort(ranked.begin(), ranked.end(), [](const Score& a, const Score& b) {
        if (a.clash_weight != b.clash_weight) return a.clash_weight > b.clash_weight;
        if (a.belief.weight != b.belief.weight) return a.belief.weight > b.belief.weight;
        return a.belief.key.template_id < b.belief.key.template_id;
    });

    FeedbackSelection sel;
    sel.policy = FeedbackPolicy::relevant;
    sel.k = k;
    for (const Score& s : ranked) {
        if (static_cast<int>(sel.chosen.size()) >= k) break;
        sel.chosen.push_back(SelectedBelief{s.belief, false});
    }

    if (static_cast<int>(sel.chosen.size()) < k) {
        // Not enough clashing beliefs: fall back to random on-topic picks.
        // Oversample so deduplication cannot leave the selection short.
        FeedbackSelection onto =
            select_on_topic(bank, query.entity, k + static_cast<int>(sel.chosen.size()), seed, query);
        for (const SelectedBelief& sb : onto.chosen) {
            if (static_cast<int>(sel.chosen.size()) >= k) break;
            bool already = std::any_of(sel.chosen.begin(), sel.chosen.end(),
                                       [&](const SelectedBelief& c) {
                                           return c.belief.key == sb.belief.key;
                                       });
            if (!already) sel.chosen.push_back(SelectedBelief{sb.belief, true});
        }
    }
    return sel;
}

std::string render_context(const FeedbackSelection& sel, const SentenceKey& query,
                           const TemplateRegistry& registry) {
    std::string out;
    if (!sel.chosen.empty()) {
        out += "CONTEXT ";
        for (const SelectedBelief& sb : sel.chosen) {
            out += registry.surface(sb.belief.key, sb.belief.label);
            out += ". ";
        }
    }
    out += "QUERY ";
    out += registry.question(query);
    return out;
}

PromptParts split_prompt(const std::string& prompt) {
    PromptParts parts;
    const std::string kContext = "CONTEXT ";
    const std::string kQuery = "QUERY ";
    if (prompt.rfind(kContext, 0) == 0) {
        std::size_t q = prompt.find(kQuery);
        if (q == std::string::npos) {
            parts.context_text = prompt.substr(kContext.size());
        } else {
            std::size_t end = q;
            while (end > kContext.size() && prompt[end - 1] == ' ') --end;
            parts.context_text = prompt.substr(kContext.size(), end - kContext.size());
            parts.question_text = prompt.substr(q + kQuery.size());
        }
    } else if (prompt.rfind(kQuery, 0) == 0) {
        parts.question_text = prompt.substr(kQuery.size());
    } else {
        parts.question_text = prompt;
    }
    return parts;
}

std::vector<std::string> split_context_sentences(const std::string& context_text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start < context_text.size()) {
        std::size_t dot = context_text.find('.', start);
        std::string sentence = context_text.substr(
            start, dot == std::string::npos ? std::string::npos : dot - start);
        // trim spaces
        std::size_t a = sentence.find_first_not_of(' ');
        std::size_t b = sentence.find_last_not_of(' ');
        if (a != std::string::npos) out.push_back(sentence.substr(a, b - a + 1));
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    return out;
}

}  // namespace beliefbank

#pragma once

// The fixed true/false QA model behind a uniform interface. The synthetic
// oracle answers from gold labels corrupted by per-sentence deterministic
// noise (tpr/tnr), and sways toward whatever label the context implies
// through the constraint graph, with probability p_follow -- whether that
// label is right or wrong.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "beliefbank/constraints.hpp"
#include "beliefbank/feedback.hpp"
#include "beliefbank/types.hpp"

namespace beliefbank {

struct OracleAnswer {
    bool label = false;
    double confidence = 0.5;  // in [0, 1]
};

class Oracle {
public:
    virtual ~Oracle() = default;
    // `context` is a rendered prompt ("CONTEXT ... QUERY ...?" or
    // "QUERY ...?"); pass "" for a bare question.
    virtual OracleAnswer query(const SentenceKey& q, const std::string& context) = 0;
};

struct SyntheticOracleConfig {
    double tpr = 0.98;      // P(answer T | gold T), no context
    double tnr = 0.60;      // P(answer F | gold F), no context
    double p_follow = 0.8;  // P(answer follows a context-implied label)
    // Confidence ~ 0.5 + 0.5 * Beta(alpha, beta); separate parameters for
    // answers that match gold and answers that do not, so correct answers
    // come out more confident on average.
    double conf_correct_alpha = 6.0;
    double conf_correct_beta = 2.0;
    double conf_incorrect_alpha = 2.0;
    double conf_incorrect_beta = 2.0;
    std::uint64_t seed = 0;

    void validate() const;

    // Solves precision = pos*tpr / (pos*tpr + (1-pos)*(1-tnr)) for tnr.
    static double tnr_for_precision(double target_precision, double positive_rate, double tpr);
    // tpr anchored at 0.98 and tnr derived from a 0.54 precision target.
    static SyntheticOracleConfig anchored_defaults(double positive_rate, std::uint64_t seed = 0);
};

// One constraint hop from each context belief to the query: a
// single-conclusion constraint linking them votes for the label it
// associates with the query (matching one side implies the other side's
// label; matching its negation implies the negation). Returns the
// weight-majority label; ties and no votes give nothing.
std::optional<bool> context_vote(const SentenceKey& q,
                                 const std::vector<KeyCondition>& context_beliefs,
                                 const std::vector<GroundConstraint>& grounds);

class SyntheticOracle : public Oracle {
public:
    SyntheticOracle(SyntheticOracleConfig cfg, std::map<SentenceKey, bool> gold,
                    TemplateRegistryPtr registry, std::vector<ConstraintTemplate> constraints);

    OracleAnswer query(const SentenceKey& q, const std::string& context) override;

    // The context-free answer: a pure function of (seed, q).
    bool base_label(const SentenceKey& q) const;
    // Context sentences parsed back to structured beliefs; unknown surface
    // forms are ignored.
    std::vector<KeyCondition> parse_context(const std::string& context_text) const;
    // Wire-format entry point: matches the question surface back to a
    // sentence key. Nothing when the question is not recognized.
    std::optional<OracleAnswer> answer_text_query(const std::string& question_text,
                                                  const std::string& context_text);

    const SyntheticOracleConfig& config() const { return cfg_; }

private:
    const std::vector<GroundConstraint>& grounds_for(const std::string& entity);
    bool gold_label(const SentenceKey& q) const;

    SyntheticOracleConfig cfg_;
    std::map<SentenceKey, bool> gold_;
    TemplateRegistryPtr registry_;
    std::vector<ConstraintTemplate> constraints_;
    std::map<std::string, KeyCondition> surface_index_;
    std::map<std::string, SentenceKey> question_index_;
    std::map<std::string, std::vector<GroundConstraint>> grounds_cache_;
};

}  // namespace beliefbank

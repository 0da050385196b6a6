#include "beliefbank/oracle.hpp"

#include <set>

#include "beliefbank/rng.hpp"

namespace beliefbank {

void SyntheticOracleConfig::validate() const {
    auto probability = [](double p, const char* name) {
        if (!(p >= 0.0 && p <= 1.0)) throw Error(std::string(name) + " must lie in [0,1]");
    };
    probability(tpr, "tpr");
    probability(tnr, "tnr");
    probability(p_follow, "p_follow");
    if (!(conf_correct_alpha > 0.0 && conf_correct_beta > 0.0 && conf_incorrect_alpha > 0.0 &&
          conf_incorrect_beta > 0.0))
        throw Error("confidence distribution parameters must be positive");
}

double SyntheticOracleConfig::tnr_for_precision(double target_precision, double positive_rate,
                                                double tpr) {
    if (!(target_precision > 0.0 && target_precision <= 1.0))
        throw Error("target precision must lie in (0,1]");
    if (!(positive_rate > 0.0 && positive_rate < 1.0))
        throw Error("positive rate must lie in (0,1) to derive tnr");
    double fp_rate = positive_rate * tpr * (1.0 - target_precision) /
                     (target_precision * (1.0 - positive_rate));
    double tnr = 1.0 - fp_rate;
    return std::min(1.0, std::max(0.0, tnr));
}

SyntheticOracleConfig SyntheticOracleConfig::anchored_defaults(double positive_rate,
                                                               std::uint64_t seed) {
    SyntheticOracleConfig cfg;
    cfg.tpr = 0.98;
    cfg.tnr = tnr_for_precision(0.54, positive_rate, cfg.tpr);
    cfg.p_follow = 0.8;
    cfg.seed = seed;
    return cfg;
}

std::optional<bool> context_vote(const SentenceKey& q,
                                 const std::vector<KeyCondition>& context_beliefs,
                                 const std::vector<GroundConstraint>& grounds) {
    double weight_true = 0.0;
    double weight_false = 0.0;
    for (const KeyCondition& b : context_beliefs) {
        for (const GroundConstraint& g : grounds) {
            // Disjunctive constraints do not pin a specific label on the
            // query, so only single-conclusion constraints vote.
            std::optional<bool> vote = implied_query_label(g, q, b);
            if (!vote) continue;
            (*vote ? weight_true : weight_false) += g.weight;
        }
    }
    if (weight_true == weight_false) return std::nullopt;
    return weight_true > weight_false;
}

SyntheticOracle::SyntheticOracle(SyntheticOracleConfig cfg, std::map<SentenceKey, bool> gold,
                                 TemplateRegistryPtr registry,
                                 std::vector<ConstraintTemplate> constraints)
    : cfg_(cfg), gold_(std::move(gold)), registry_(std::move(registry)),
      constraints_(std::move(constraints)) {
    cfg_.validate();
    if (!registry_) throw Error("synthetic oracle needs a template registry");
    // Reverse surface index over every (entity, template) pair present in
    // the gold facts, so context sentences parse back to structured beliefs.
    std::set<std::string> entities;
    for (const auto& [key, label] : gold_) entities.insert(key.entity);
    for (const auto& entity : entities) {
        for (const auto& [id, t] : registry_->all()) {
            SentenceKey key{entity, id};
            surface_index_[registry_->surface(key, true)] = KeyCondition{key, true};
            surface_index_[registry_->surface(key, false)] = KeyCondition{key, false};
            question_index_[registry_->question(key)] = key;
        }
    }
}

std::optional<OracleAnswer> SyntheticOracle::answer_text_query(const std::string& question_text,
                                                               const std::string& context_text) {
    auto it = question_index_.find(question_text);
    if (it == question_index_.end()) return std::nullopt;
    std::string prompt = context_text.empty() ? "QUERY " + question_text
                                              : "CONTEXT " + context_text + " QUERY " + question_text;
    return query(it->second, prompt);
}

const std::vector<GroundConstraint>& SyntheticOracle::grounds_for(const std::string& entity) {
    auto it = grounds_cache_.find(entity);
    if (it == grounds_cache_.end())
        it = grounds_cache_.emplace(entity, ground(*registry_, constraints_, entity)).first;
    return it->second;
}

bool SyntheticOracle::gold_label(const SentenceKey& q) const {
    auto it = gold_.find(q);
    if (it == gold_.end()) throw Error("no gold label for " + q.str());
    return it->second;
}

bool SyntheticOracle::base_label(const SentenceKey& q) const {
    bool gold = gold_label(q);
    std::uint64_t h = hash_combine(cfg_.seed, hash_combine(hash64("base"), hash64(q.str())));
    double u = Rng(h).next_double();
    return gold ? u < cfg_.tpr : !(u < cfg_.tnr);
}

std::vector<KeyCondition> SyntheticOracle::parse_context(const std::string& context_text) const {
    std::vector<KeyCondition> out;
    for (const std::string& sentence : split_context_sentences(context_text)) {
        auto it = surface_index_.find(sentence);
        if (it != surface_index_.end()) out.push_back(it->second);
    }
    return out;
}

OracleAnswer SyntheticOracle::query(const SentenceKey& q, const std::string& context) {
    bool gold = gold_label(q);
    bool label = base_label(q);

    PromptParts parts = split_prompt(context);
    if (!parts.context_text.empty()) {
        std::vector<KeyCondition> beliefs = parse_context(parts.context_text);
        if (!beliefs.empty()) {
            std::optional<bool> vote = context_vote(q, beliefs, grounds_for(q.entity));
            if (vote) {
                std::uint64_t h =
                    hash_combine(cfg_.seed, hash_combine(hash64("follow"), hash64(q.str())));
                if (Rng(h).next_double() < cfg_.p_follow) label = *vote;
            }
        }
    }

    bool correct = label == gold;
    std::uint64_t h = hash_combine(
        cfg_.seed, hash_combine(hash64(label ? "conf+" : "conf-"), hash64(q.str())));
    Rng rng(h);
    double b = correct ? rng.beta(cfg_.conf_correct_alpha, cfg_.conf_correct_beta)
                       : rng.beta(cfg_.conf_incorrect_alpha, cfg_.conf_incorrect_beta);
    return OracleAnswer{label, 0.5 + 0.5 * b};
}

}  // namespace beliefbank

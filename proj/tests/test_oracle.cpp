#include <gtest/gtest.h>

#include <set>

#include "beliefbank/dataset.hpp"
#include "beliefbank/oracle.hpp"
#include "support.hpp"

namespace bb = beliefbank;
using namespace bb::testsupport;

namespace {

// Small swallow/poodle world with explicit gold labels.
struct World {
    bb::TemplateRegistryPtr registry = animal_registry();
    std::map<bb::SentenceKey, bool> gold;
    std::vector<bb::ConstraintTemplate> constraints;

    World() {
        gold[{"swallow", "isa.bird"}] = true;
        gold[{"swallow", "isa.fish"}] = false;
        gold[{"swallow", "has.gills"}] = false;
        gold[{"swallow", "has.wings"}] = true;
        gold[{"poodle", "isa.dog"}] = true;
        gold[{"poodle", "isa.mammal"}] = true;
        gold[{"poodle", "isa.bird"}] = false;
        constraints.push_back(forward("isa.fish", "has.gills", 0.9));
        constraints.push_back(forward("isa.dog", "isa.mammal", 0.9));
        auto m = mutex_pair("isa.bird", "isa.fish", 1.0);
        constraints.insert(constraints.end(), m.begin(), m.end());
    }

    bb::SyntheticOracle oracle(bb::SyntheticOracleConfig cfg) const {
        return bb::SyntheticOracle(cfg, gold, registry, constraints);
    }
};

}  // namespace

TEST(SyntheticOracle, NoiselessMatchesGold) {
    World w;
    bb::SyntheticOracleConfig cfg;
    cfg.tpr = 1.0;
    cfg.tnr = 1.0;
    auto oracle = w.oracle(cfg);
    for (const auto& [key, label] : w.gold) {
        bb::OracleAnswer a = oracle.query(key, "");
        EXPECT_EQ(a.label, label) << key.str();
        EXPECT_GE(a.confidence, 0.5);
        EXPECT_LE(a.confidence, 1.0);
    }
}

TEST(SyntheticOracle, FullyContextDrivenFollowsTheVote) {
    World w;
    bb::SyntheticOracleConfig cfg;
    cfg.tpr = 1.0;
    cfg.tnr = 0.0;  // the base answer for gold-F "has gills" is a false positive
    cfg.p_follow = 1.0;
    auto oracle = w.oracle(cfg);
    bb::SentenceKey gills{"swallow", "has.gills"};
    EXPECT_TRUE(oracle.query(gills, "").label);  // base answer is wrong
    bb::OracleAnswer with_context =
        oracle.query(gills, "CONTEXT a swallow is not a fish. QUERY a swallow has gills?");
    EXPECT_FALSE(with_context.label);  // context flips it, whatever the base was
}

TEST(SyntheticOracle, ContextCanMisleadThroughTheContrapositive) {
    World w;
    bb::SyntheticOracleConfig cfg;
    cfg.tpr = 1.0;
    cfg.tnr = 1.0;
    cfg.p_follow = 1.0;
    auto oracle = w.oracle(cfg);
    bb::SentenceKey dog{"poodle", "isa.dog"};
    EXPECT_TRUE(oracle.query(dog, "").label);
    // "a poodle is not a mammal" + (dog -> mammal) pushes the answer to F.
    bb::OracleAnswer misled =
        oracle.query(dog, "CONTEXT a poodle is not a mammal. QUERY a poodle is a dog?");
    EXPECT_FALSE(misled.label);
}

TEST(SyntheticOracle, RepeatedQueriesAreIdentical) {
    World w;
    bb::SyntheticOracleConfig cfg;
    cfg.seed = 7;
    auto oracle = w.oracle(cfg);
    bb::SentenceKey key{"swallow", "has.gills"};
    bb::OracleAnswer first = oracle.query(key, "");
    for (int i = 0; i < 1000; ++i) {
        bb::OracleAnswer again = oracle.query(key, "");
        ASSERT_EQ(again.label, first.label);
        ASSERT_DOUBLE_EQ(again.confidence, first.confidence);
    }
}

TEST(SyntheticOracle, ZeroFollowIgnoresContextExactly) {
    World w;
    bb::SyntheticOracleConfig cfg;
    cfg.tpr = 0.7;
    cfg.tnr = 0.6;
    cfg.p_follow = 0.0;
    cfg.seed = 13;
    auto oracle = w.oracle(cfg);
    for (const auto& [key, label] : w.gold) {
        bb::OracleAnswer bare = oracle.query(key, "");
        bb::OracleAnswer ctx = oracle.query(
            key, "CONTEXT a swallow is not a fish. a poodle is a dog. QUERY anything?");
        EXPECT_EQ(bare.label, ctx.label) << key.str();
    }
}

TEST(SyntheticOracle, UnknownSentenceThrows) {
    World w;
    auto oracle = w.oracle({});
    EXPECT_THROW(oracle.query({"swallow", "isa.dog"}, ""), bb::Error);
}

TEST(SyntheticOracle, TnrDerivationHitsThePrecisionTarget) {
    // precision = pos*tpr / (pos*tpr + (1-pos)*(1-tnr)), solved for tnr.
    double tnr = bb::SyntheticOracleConfig::tnr_for_precision(0.54, 0.3, 0.98);
    double precision = 0.3 * 0.98 / (0.3 * 0.98 + 0.7 * (1.0 - tnr));
    EXPECT_NEAR(precision, 0.54, 1e-12);
    EXPECT_THROW(bb::SyntheticOracleConfig::tnr_for_precision(0.54, 0.0, 0.98), bb::Error);
}

TEST(SyntheticOracle, AnchoredDefaultsReproducePrecisionAndRecall) {
    bb::GeneratorConfig gen;
    gen.seed = 3;
    bb::Dataset ds = bb::generate(gen);
    auto gold = ds.gold();
    bb::SyntheticOracleConfig cfg =
        bb::SyntheticOracleConfig::anchored_defaults(ds.positive_rate(), 17);
    bb::SyntheticOracle oracle(cfg, gold, ds.templates, ds.constraints);

    std::size_t tp = 0, fp = 0, fn = 0;
    for (const bb::Fact& f : ds.facts) {
        bool answer = oracle.query(f.key, "").label;
        if (answer && f.label) ++tp;
        if (answer && !f.label) ++fp;
        if (!answer && f.label) ++fn;
    }
    double recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    EXPECT_NEAR(recall, 0.98, 0.02);
    EXPECT_NEAR(precision, 0.54, 0.04);
}

TEST(SyntheticOracle, CorrectAnswersAreMoreConfident) {
    bb::GeneratorConfig gen;
    gen.seed = 5;
    bb::Dataset ds = bb::generate(gen);
    auto gold = ds.gold();
    bb::SyntheticOracleConfig cfg = bb::SyntheticOracleConfig::anchored_defaults(ds.positive_rate(), 9);
    bb::SyntheticOracle oracle(cfg, gold, ds.templates, ds.constraints);

    double sum_correct = 0, sum_wrong = 0;
    int n_correct = 0, n_wrong = 0;
    for (const bb::Fact& f : ds.facts) {
        bb::OracleAnswer a = oracle.query(f.key, "");
        ASSERT_GE(a.confidence, 0.0);
        ASSERT_LE(a.confidence, 1.0);
        if (a.label == f.label) {
            sum_correct += a.confidence;
            ++n_correct;
        } else {
            sum_wrong += a.confidence;
            ++n_wrong;
        }
    }
    ASSERT_GT(n_correct, 0);
    ASSERT_GT(n_wrong, 0);
    EXPECT_GE(sum_correct / n_correct, sum_wrong / n_wrong);
}

TEST(ContextVote, FigureOneVote) {
    World w;
    auto grounds = bb::ground(*w.registry, w.constraints, "swallow");
    std::vector<bb::KeyCondition> context{{{"swallow", "isa.fish"}, false}};
    auto vote = bb::context_vote({"swallow", "has.gills"}, context, grounds);
    ASSERT_TRUE(vote.has_value());
    EXPECT_FALSE(*vote);
}

TEST(ContextVote, ContrapositiveCanMislead) {
    World w;
    auto grounds = bb::ground(*w.registry, w.constraints, "poodle");
    std::vector<bb::KeyCondition> context{{{"poodle", "isa.mammal"}, false}};
    auto vote = bb::context_vote({"poodle", "isa.dog"}, context, grounds);
    ASSERT_TRUE(vote.has_value());
    EXPECT_FALSE(*vote);
}

TEST(ContextVote, UnrelatedContextDoesNotVote) {
    World w;
    auto grounds = bb::ground(*w.registry, w.constraints, "swallow");
    std::vector<bb::KeyCondition> context{{{"swallow", "has.wings"}, true}};
    EXPECT_FALSE(bb::context_vote({"swallow", "has.gills"}, context, grounds).has_value());
}

TEST(ContextVote, OpposingVotesOfEqualWeightCancel) {
    auto registry = animal_registry();
    std::vector<bb::ConstraintTemplate> templates{forward("isa.bird", "has.wings", 0.5),
                                                  forward("isa.fish", "has.wings", 0.5)};
    auto grounds = bb::ground(*registry, templates, "x");
    // bird:T votes wings:T; fish:F votes wings:F; equal weights tie -> none.
    std::vector<bb::KeyCondition> context{{{"x", "isa.bird"}, true}, {{"x", "isa.fish"}, false}};
    EXPECT_FALSE(bb::context_vote({"x", "has.wings"}, context, grounds).has_value());
}

TEST(ContextVote, DisjunctionsDoNotVote) {
    auto registry = animal_registry();
    auto grounds =
        bb::ground(*registry, {backward("has.gills", {"isa.fish", "isa.bird"}, 0.1)}, "x");
    std::vector<bb::KeyCondition> context{{{"x", "isa.fish"}, true}};
    EXPECT_FALSE(bb::context_vote({"x", "has.gills"}, context, grounds).has_value());
}

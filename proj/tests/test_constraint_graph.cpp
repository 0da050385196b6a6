#include <gtest/gtest.h>

#include <sstream>

#include "beliefbank/constraints.hpp"
#include "beliefbank/dataset.hpp"
#include "beliefbank/rng.hpp"
#include "support.hpp"

namespace bb = beliefbank;
using namespace bb::testsupport;

TEST(ConstraintGraph, GroundSubstitutesEntity) {
    auto registry = animal_registry();
    auto grounds = bb::ground(*registry, {forward("isa.dog", "has.tail", 0.8)}, "poodle");
    ASSERT_EQ(grounds.size(), 1u);
    EXPECT_EQ(grounds[0].premise.key, (bb::SentenceKey{"poodle", "isa.dog"}));
    EXPECT_TRUE(grounds[0].premise.label);
    ASSERT_EQ(grounds[0].disjuncts.size(), 1u);
    EXPECT_EQ(grounds[0].disjuncts[0].key, (bb::SentenceKey{"poodle", "has.tail"}));
    EXPECT_TRUE(grounds[0].disjuncts[0].label);
    EXPECT_DOUBLE_EQ(grounds[0].weight, 0.8);
}

TEST(ConstraintGraph, MutexPairGroundsToTwoHalvesWithFalseConclusions) {
    auto registry = animal_registry();
    auto grounds = bb::ground(*registry, mutex_pair("isa.bird", "isa.fish", 1.0), "swallow");
    ASSERT_EQ(grounds.size(), 2u);
    for (const auto& g : grounds) {
        EXPECT_EQ(g.premise.key.entity, "swallow");
        EXPECT_TRUE(g.premise.label);
        ASSERT_EQ(g.disjuncts.size(), 1u);
        EXPECT_FALSE(g.disjuncts[0].label);
        EXPECT_DOUBLE_EQ(g.weight, 1.0);
    }
}

TEST(ConstraintGraph, GroundEmptyListAndUnknownTemplate) {
    auto registry = animal_registry();
    EXPECT_TRUE(bb::ground(*registry, {}, "poodle").empty());
    EXPECT_THROW(bb::ground(*registry, {forward("isa.unicorn", "has.tail", 0.5)}, "poodle"),
                 bb::Error);
}

TEST(ConstraintGraph, SingleViolatedConstraint) {
    auto registry = animal_registry();
    bb::BeliefBank bank(registry);
    bank.upsert(make_belief("poodle", "isa.dog", true, 0.9));
    bank.upsert(make_belief("poodle", "has.tail", false, 0.2));
    auto grounds = bb::ground(*registry, {forward("isa.dog", "has.tail", 0.8)}, "poodle");
    auto r = bb::consistency(bank, grounds);
    EXPECT_EQ(r.applicable, 1u);
    EXPECT_EQ(r.violated, 1u);
    EXPECT_DOUBLE_EQ(r.consistency, 0.0);
}

TEST(ConstraintGraph, FalsePremiseIsVacuous) {
    auto registry = animal_registry();
    bb::BeliefBank bank(registry);
    bank.upsert(make_belief("poodle", "isa.dog", false, 0.9));
    bank.upsert(make_belief("poodle", "has.tail", false, 0.2));
    auto grounds = bb::ground(*registry, {forward("isa.dog", "has.tail", 0.8)}, "poodle");
    auto r = bb::consistency(bank, grounds);
    EXPECT_EQ(r.applicable, 0u);
    EXPECT_DOUBLE_EQ(r.consistency, 1.0);
}

TEST(ConstraintGraph, UnansweredConclusionIsNotApplicable) {
    auto registry = animal_registry();
    bb::BeliefBank bank(registry);
    bank.upsert(make_belief("poodle", "isa.dog", true, 0.9));
    auto grounds = bb::ground(*registry, {forward("isa.dog", "has.tail", 0.8)}, "poodle");
    auto r = bb::consistency(bank, grounds);
    EXPECT_EQ(r.applicable, 0u);
    EXPECT_DOUBLE_EQ(r.consistency, 1.0);
}

// Hand-enumerated: four constraints, six beliefs, exactly three applicable
// and one violated.
//   c1 dog.T -> tail.T  : dog T held, tail F held      -> applicable, violated
//   c2 fish.T -> dog.F  : fish absent                  -> not applicable
//   c3 mammal.T -> animal.T : both held T              -> applicable, satisfied
//   c4 bird.T -> wings.T : both held T                 -> applicable, satisfied
TEST(ConstraintGraph, HandDerivedTauIsOneThird) {
    auto registry = animal_registry();
    bb::BeliefBank bank(registry);
    bank.upsert(make_belief("poodle", "isa.dog", true, 0.9));
    bank.upsert(make_belief("poodle", "has.tail", false, 0.3));
    bank.upsert(make_belief("poodle", "isa.mammal", true, 0.8));
    bank.upsert(make_belief("poodle", "isa.animal", true, 0.8));
    bank.upsert(make_belief("poodle", "isa.bird", true, 0.4));
    bank.upsert(make_belief("poodle", "has.wings", true, 0.4));

    std::vector<bb::ConstraintTemplate> templates{
        forward("isa.dog", "has.tail", 0.8),
        mutex_pair("isa.fish", "isa.dog", 1.0)[0],
        forward("isa.mammal", "isa.animal", 0.9),
        forward("isa.bird", "has.wings", 0.7),
    };
    auto r = bb::consistency(bank, bb::ground(*registry, templates, "poodle"));
    EXPECT_EQ(r.applicable, 3u);
    EXPECT_EQ(r.violated, 1u);
    EXPECT_DOUBLE_EQ(r.tau, 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(r.consistency, 1.0 - 1.0 / 3.0);
    // All single-conclusion constraints, so the restricted metric agrees.
    EXPECT_EQ(r.applicable_fm, 3u);
    EXPECT_EQ(r.violated_fm, 1u);
}

TEST(ConstraintGraph, MetricIgnoresWeightScaling) {
    auto registry = animal_registry();
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        bb::Rng rng(seed);
        bb::BeliefBank bank(registry);
        std::vector<std::string> ids{"isa.dog", "isa.bird", "isa.fish", "has.tail", "has.gills"};
        for (const auto& id : ids)
            if (rng.chance(0.8)) bank.upsert(make_belief("e", id, rng.chance(0.5), 0.5));
        std::vector<bb::ConstraintTemplate> templates{
            forward("isa.dog", "has.tail", 0.8),
            forward("isa.fish", "has.gills", 0.6),
        };
        auto m1 = mutex_pair("isa.bird", "isa.fish", 1.0);
        templates.insert(templates.end(), m1.begin(), m1.end());

        auto base = bb::consistency(bank, bb::ground(*registry, templates, "e"));
        for (auto& t : templates) t.weight *= 3.7;
        auto scaled = bb::consistency(bank, bb::ground(*registry, templates, "e"));
        EXPECT_EQ(base.applicable, scaled.applicable);
        EXPECT_EQ(base.violated, scaled.violated);
        EXPECT_DOUBLE_EQ(base.tau, scaled.tau);
    }
}

TEST(ConstraintGraph, UnrelatedBeliefDoesNotChangeViolations) {
    auto registry = animal_registry();
    bb::BeliefBank bank(registry);
    bank.upsert(make_belief("poodle", "isa.dog", true, 0.9));
    bank.upsert(make_belief("poodle", "has.tail", false, 0.3));
    auto grounds = bb::ground(*registry, {forward("isa.dog", "has.tail", 0.8)}, "poodle");
    ASSERT_TRUE(bb::is_violated(bank, grounds[0]));
    bank.upsert(make_belief("poodle", "isa.plant", false, 0.5));
    bank.upsert(make_belief("swallow", "isa.bird", true, 0.9));
    EXPECT_TRUE(bb::is_violated(bank, grounds[0]));
    auto r = bb::consistency(bank, grounds);
    EXPECT_EQ(r.violated, 1u);
}

TEST(ConstraintGraph, GoldBankOfGeneratedDatasetIsFullyConsistent) {
    bb::GeneratorConfig cfg;
    cfg.n_concepts = 8;
    cfg.n_entities = 6;
    cfg.properties_per_concept = 3;
    cfg.property_pool = 12;
    cfg.seed = 11;
    bb::Dataset ds = bb::generate(cfg);
    bb::BeliefBank bank(ds.templates);
    for (const bb::Fact& f : ds.facts) bank.upsert(bb::Belief{f.key, f.label, 1.0});
    auto r = bb::consistency(bank, ds.ground_all());
    EXPECT_DOUBLE_EQ(r.consistency, 1.0);
    EXPECT_DOUBLE_EQ(r.consistency_fm, 1.0);
    EXPECT_GT(r.applicable, 0u);
}

TEST(ConstraintGraph, ConstraintFileParsesTheDocumentedExamples) {
    // The same example lines the repo documentation shows.
    std::istringstream in(
        "# implications and mutual exclusivities\n"
        "forward_implication isa.dog T has.tail T 0.8\n"
        "mutex_half isa.bird T isa.fish F 1.0\n"
        "mutex_half isa.fish T isa.bird F 1.0\n"
        "backward_disjunction has.tail T isa.dog T | isa.cat T 0.1\n");
    auto parsed = bb::parse_constraints(in, "inline");
    ASSERT_EQ(parsed.size(), 4u);
    EXPECT_EQ(parsed[0].kind, bb::ConstraintKind::forward_implication);
    EXPECT_DOUBLE_EQ(parsed[0].weight, 0.8);
    EXPECT_EQ(parsed[1].kind, bb::ConstraintKind::mutex_half);
    EXPECT_FALSE(parsed[1].conclusion[0].label);
    EXPECT_EQ(parsed[3].conclusion.size(), 2u);

    // Round-trip through the formatter.
    std::ostringstream out;
    for (const auto& c : parsed) out << bb::format_constraint(c) << "\n";
    std::istringstream in2(out.str());
    EXPECT_EQ(bb::parse_constraints(in2, "inline2"), parsed);
}

TEST(ConstraintGraph, MalformedConstraintLinesReportLocation) {
    std::istringstream bad_kind("sideways_rule isa.dog T has.tail T 0.8\n");
    EXPECT_THROW(bb::parse_constraints(bad_kind, "f"), bb::ParseError);
    std::istringstream bad_weight("forward_implication isa.dog T has.tail T heavy\n");
    EXPECT_THROW(bb::parse_constraints(bad_weight, "f"), bb::ParseError);
    std::istringstream neg_weight("forward_implication isa.dog T has.tail T -1\n");
    EXPECT_THROW(bb::parse_constraints(neg_weight, "f"), bb::ParseError);
    std::istringstream two_conclusions("forward_implication isa.dog T has.tail T | isa.cat T 0.8\n");
    EXPECT_THROW(bb::parse_constraints(two_conclusions, "f"), bb::ParseError);
}

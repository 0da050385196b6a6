#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "beliefbank/belief_bank.hpp"
#include "beliefbank/rng.hpp"
#include "support.hpp"

namespace bb = beliefbank;
using namespace bb::testsupport;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("bb_store_" + name);
}

}  // namespace

TEST(BeliefStore, UpsertIntoEmptyBank) {
    bb::BeliefBank bank(animal_registry());
    bank.upsert(make_belief("poodle", "isa.dog", true, 0.9));
    EXPECT_EQ(bank.size(), 1u);
    const bb::Belief* b = bank.find({"poodle", "isa.dog"});
    ASSERT_NE(b, nullptr);
    EXPECT_TRUE(b->label);
    EXPECT_DOUBLE_EQ(b->weight, 0.9);
}

TEST(BeliefStore, OverwriteSameKeyLogsFlip) {
    bb::BeliefBank bank(animal_registry());
    bank.upsert(make_belief("poodle", "isa.dog", true, 0.9));
    bank.upsert(make_belief("poodle", "isa.dog", false, 0.6));
    EXPECT_EQ(bank.size(), 1u);
    ASSERT_EQ(bank.log().size(), 2u);
    EXPECT_TRUE(bank.log()[1].is_flip());
    EXPECT_FALSE(bank.find({"poodle", "isa.dog"})->label);
}

TEST(BeliefStore, RejectsOutOfRangeWeight) {
    bb::BeliefBank bank(animal_registry());
    EXPECT_THROW(bank.upsert(make_belief("poodle", "isa.dog", true, 1.3)), bb::Error);
    EXPECT_THROW(bank.upsert(make_belief("poodle", "isa.dog", true, -0.1)), bb::Error);
    EXPECT_EQ(bank.size(), 0u);
}

TEST(BeliefStore, RejectsUnknownTemplate) {
    bb::BeliefBank bank(animal_registry());
    EXPECT_THROW(bank.upsert(make_belief("poodle", "isa.spaceship", true, 0.5)), bb::Error);
}

TEST(BeliefStore, HumanBeliefsMustBeFullWeight) {
    bb::BeliefBank bank(animal_registry());
    EXPECT_THROW(bank.upsert(make_belief("poodle", "isa.dog", true, 0.9, bb::Provenance::human)),
                 bb::Error);
    bank.upsert(make_belief("poodle", "isa.dog", true, 1.0, bb::Provenance::human));
    EXPECT_EQ(bank.size(), 1u);
}

TEST(BeliefStore, BeliefsAboutUnknownEntityIsEmpty) {
    bb::BeliefBank bank(animal_registry());
    EXPECT_TRUE(bank.beliefs_about("swallow").empty());
}

TEST(BeliefStore, BeliefsAboutFiltersAndSorts) {
    bb::BeliefBank bank(animal_registry());
    bank.upsert(make_belief("poodle", "isa.dog", true, 0.9));
    bank.upsert(make_belief("poodle", "has.tail", true, 0.8));
    bank.upsert(make_belief("swallow", "isa.bird", true, 0.7));
    auto poodle = bank.beliefs_about("poodle");
    ASSERT_EQ(poodle.size(), 2u);
    EXPECT_EQ(poodle[0].key.template_id, "has.tail");  // template_id order
    EXPECT_EQ(poodle[1].key.template_id, "isa.dog");
    // Repeated calls return identical sequences.
    EXPECT_EQ(bank.beliefs_about("poodle"), poodle);
}

TEST(BeliefStore, SaveLoadEmptyBank) {
    bb::BeliefBank bank(animal_registry());
    auto path = temp_file("empty.txt");
    bank.save(path);
    bb::BeliefBank loaded = bb::BeliefBank::load(path, animal_registry());
    EXPECT_EQ(loaded, bank);
}

TEST(BeliefStore, SaveLoadRoundTripsExactly) {
    auto registry = animal_registry();
    bb::BeliefBank bank(registry);
    bb::Rng rng(7);
    std::vector<std::string> entities{"poodle", "swallow", "pine", "trout"};
    std::vector<std::string> templates{"isa.dog", "isa.bird", "isa.fish", "has.tail", "has.gills"};
    for (int i = 0; i < 100; ++i) {
        bank.upsert(make_belief(entities[rng.next_below(entities.size())],
                                templates[rng.next_below(templates.size())], rng.chance(0.5),
                                rng.next_double(),
                                rng.chance(0.2) ? bb::Provenance::solver_flipped
                                                : bb::Provenance::model_raw,
                                static_cast<int>(rng.next_below(10))));
    }
    auto path = temp_file("hundred.txt");
    bank.save(path);
    bb::BeliefBank loaded = bb::BeliefBank::load(path, registry);
    EXPECT_EQ(loaded, bank);  // beliefs and revision log both
}

TEST(BeliefStore, TruncatedFileFailsWithLineNumber) {
    auto path = temp_file("truncated.txt");
    {
        bb::BeliefBank bank(animal_registry());
        bank.upsert(make_belief("poodle", "isa.dog", true, 0.9));
        bank.save(path);
    }
    // Chop the file mid-line.
    std::string contents;
    {
        std::ifstream in(path);
        std::getline(in, contents);
        contents += "\nb\tpoodle\tisa.dog\tT";
    }
    {
        std::ofstream out(path);
        out << contents;
    }
    try {
        bb::BeliefBank::load(path, animal_registry());
        FAIL() << "expected ParseError";
    } catch (const bb::ParseError& e) {
        EXPECT_EQ(e.line_number, 2u);
    }
}

TEST(BeliefStore, MissingHeaderRejected) {
    auto path = temp_file("noheader.txt");
    std::ofstream(path) << "b\tpoodle\tisa.dog\tT\t0.9\tmodel_raw\t0\n";
    EXPECT_THROW(bb::BeliefBank::load(path, animal_registry()), bb::ParseError);
}

TEST(BeliefStore, LoadsBeliefOnlyFilesAndSynthesizesLog) {
    auto path = temp_file("beliefs_only.txt");
    std::ofstream(path) << "beliefbank-v1\n"
                        << "b\tpoodle\tisa.dog\tT\t0.9\tmodel_raw\t0\n"
                        << "b\tswallow\tisa.bird\tT\t0.8\tmodel_raw\t1\n";
    bb::BeliefBank bank = bb::BeliefBank::load(path, animal_registry());
    EXPECT_EQ(bank.size(), 2u);
    EXPECT_EQ(bank.log().size(), 2u);
    EXPECT_EQ(bb::BeliefBank::replay(bank.log(), animal_registry()), bank);
}

// Property: bank size is bounded by distinct keys; replaying the log from
// empty reproduces the bank exactly.
TEST(BeliefStore, RandomUpsertSequencesKeepInvariants) {
    auto registry = animal_registry();
    std::vector<std::string> templates{"isa.dog", "isa.bird", "isa.fish", "has.tail"};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        bb::Rng rng(seed);
        bb::BeliefBank bank(registry);
        std::set<bb::SentenceKey> distinct;
        int n = 1 + static_cast<int>(rng.next_below(60));
        for (int i = 0; i < n; ++i) {
            bb::Belief b = make_belief("e" + std::to_string(rng.next_below(4)),
                                       templates[rng.next_below(templates.size())],
                                       rng.chance(0.5), rng.next_double());
            distinct.insert(b.key);
            bank.upsert(b);
        }
        EXPECT_LE(bank.size(), distinct.size());
        EXPECT_EQ(bank.size(), distinct.size());
        EXPECT_EQ(bb::BeliefBank::replay(bank.log(), registry), bank);
    }
}

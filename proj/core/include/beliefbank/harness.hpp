#pragma once

// Batched streaming experiments over a dataset and an oracle: questions
// arrive in seeded-shuffled batches, answers accumulate in a bank, the
// solver optionally cleans up after every batch, and each batch yields an
// F1/consistency report against gold.

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "beliefbank/belief_bank.hpp"
#include "beliefbank/dataset.hpp"
#include "beliefbank/maxsat.hpp"
#include "beliefbank/oracle.hpp"

namespace beliefbank {

enum class ExperimentKind {
    raw,
    constraints,
    feedback_on_topic,
    feedback_relevant,
    feedback_off_topic,
    feedback_relevant_plus_constraints,
    omniscient,
};

const char* experiment_kind_name(ExperimentKind k);
std::optional<ExperimentKind> experiment_kind_from_name(const std::string& s);
bool experiment_uses_solver(ExperimentKind k);

struct Seeds {
    std::uint64_t shuffle = 1;
    std::uint64_t oracle = 2;
    std::uint64_t feedback = 3;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::raw;
    int n_batches = 10;
    int feedback_k = 3;
    Seeds seeds;
    SolverConfig solver;

    void validate() const;
};

struct BatchReport {
    int batch_index = 0;     // 1-based
    double f1_true = 0.0;
    double consistency = 1.0;      // forward implications + mutex halves
    double consistency_all = 1.0;  // every constraint, disjunctive rule included
    double consistency_pre_solve = 1.0;  // fm metric before this batch's solve
    int n_flips = 0;
    std::size_t n_beliefs = 0;
};

struct RunResult {
    std::vector<BatchReport> batches;
    BeliefBank bank;
    bool aborted = false;
    std::string abort_reason;
};

// Called after each batch's report; mutations (e.g. human corrections)
// carry into the following batches.
using BatchHook = std::function<void(int batch_index, BeliefBank& bank)>;

RunResult run(const Dataset& ds, Oracle& oracle, const ExperimentConfig& cfg,
              const BatchHook& hook = {});

// Non-incremental control: answer everything raw, then re-ask every
// question with relevant feedback drawn from the full raw bank. One report.
RunResult run_omniscient(const Dataset& ds, Oracle& oracle, const ExperimentConfig& cfg);

// F1 on the True class of the bank's beliefs against gold labels.
double f1_true(const BeliefBank& bank, const std::map<SentenceKey, bool>& gold);

// Grid search for (w_forward, w_backward, lambda) maximizing dev F1 after
// raw answering plus one solver pass. w_forward covers forward implications
// and mutex halves; w_backward covers backward disjunctions.
struct CalibrationGrid {
    std::vector<double> w_forward{0.5, 1.0, 2.0, 4.0};
    std::vector<double> w_backward{0.01, 0.05, 0.1, 0.5};
    std::vector<double> lambda{0.25, 0.5, 1.0, 2.0, 4.0};
};

struct GridPoint {
    double w_forward = 1.0;
    double w_backward = 0.1;
    double lambda = 1.0;
    double dev_f1 = 0.0;
};

struct CalibrationResult {
    GridPoint best;
    std::vector<GridPoint> grid;
};

// Ties break toward smaller lambda, then smaller w_backward, then smaller
// w_forward. dev_entities must be non-empty and disjoint from test_entities.
CalibrationResult calibrate(const Dataset& ds, Oracle& oracle,
                            const std::vector<std::string>& dev_entities,
                            const CalibrationGrid& grid, const SolverConfig& solver,
                            const std::vector<std::string>& test_entities = {});

// Re-weights constraints by kind (forward+mutex -> w_forward, backward ->
// w_backward); used by calibration and by the CLI when applying a
// calibration result.
std::vector<ConstraintTemplate> override_weights(const std::vector<ConstraintTemplate>& constraints,
                                                 double w_forward, double w_backward);

// Beliefs about an entity ranked by total weight of currently violated
// constraints they participate in (most egregious first).
std::vector<std::pair<Belief, double>> rank_by_clash(const BeliefBank& bank,
                                                     const std::vector<GroundConstraint>& grounds,
                                                     const std::string& entity);

// Interactive correction session. Line commands on `in`:
//   entities | show <entity> | set <entity> <template_id> T|F |
//   flip <entity> <template_id> | help | done
// Corrections become human-provenance beliefs with weight 1 (hard in later
// solves). Returns the number of corrections applied; the transcript goes
// to `out`.
int run_correction_session(BeliefBank& bank, const Dataset& ds, std::istream& in,
                           std::ostream& out);

// Runs one solver pass over every entity's beliefs (the per-batch cleanup);
// returns the number of flips.
int solve_bank(BeliefBank& bank, const Dataset& ds, const SolverConfig& solver,
               std::uint64_t salt = 0);

// Report emission.
struct ConfigReports {
    std::string config_name;
    std::vector<BatchReport> batches;
};

void write_csv(const std::vector<ConfigReports>& reports, std::ostream& out);
void write_csv(const std::vector<ConfigReports>& reports, const std::filesystem::path& path);
void write_table(const std::vector<ConfigReports>& reports, std::ostream& out);
void write_table(const std::vector<ConfigReports>& reports, const std::filesystem::path& path);

}  // namespace beliefbank

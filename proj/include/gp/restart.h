#pragma once

#include "gp/search.h"

#include <cstdint>
#include <vector>

namespace gp::restart {

using model::PropId;

// Random-restart policy: at each feasible depth the searcher gets
// 1 + `restarts` epochs, each cut off after `backtrack_limit` inter-level
// backtracks. An epoch that runs to natural completion proves the depth
// unsolvable, so the driver extends immediately instead of restarting.
// Depth is always capped (max_levels >= 1): with bounded epochs the driver
// cannot prove unsolvability, it can only give up, so an uncapped run on an
// unsolvable instance would never terminate.
struct RestartPolicy {
    int restarts = 0;
    std::uint64_t backtrack_limit = search::kUnlimited;
    int max_levels = 1;

    // Throws std::invalid_argument unless restarts >= 0, max_levels >= 1 and
    // backtrack_limit >= 1.
    void validate() const;
};

struct EpochOutcome {
    int depth = 0;
    int epoch = 0; // 0 = first attempt, 1.. = restarts
    bool aborted = false;
    std::uint64_t interlevel_backtracks = 0;
};

// One engine drives all epochs: the random-value stream continues across
// restarts, sticky values reset per epoch, and the memo table keeps
// everything learned. Unsolved runs report FailReason::limit.
search::RunOutcome
run_with_restarts(graph::PlanningGraph &pg, const search::SearchConfig &config,
                  memos::MemoTable &memos, search::SearchStats &stats,
                  const RestartPolicy &policy,
                  search::TraceSink *trace = nullptr,
                  std::vector<EpochOutcome> *epochs = nullptr);

struct TrialResult {
    bool solved = false;
    int steps = 0;
    int actions = 0;
    double mfsl = 0.0; // memo hits per depth searched
    std::uint64_t interlevel_backtracks = 0;
    std::uint64_t memo_hits = 0;
};

struct SolvabilityReport {
    int trials = 0;
    int solved = 0;
    double pct_solved = 0.0;
    double mean_steps = 0.0;   // over solved trials
    double mean_actions = 0.0; // over solved trials
    double mean_mfsl = 0.0;    // over all trials
    std::vector<TrialResult> per_trial;
};

// Runs `trials` independent restart searches on the same graph; trial i uses
// seed base.seed + i and a fresh memo table.
SolvabilityReport solvability_experiment(graph::PlanningGraph &pg,
                                         const search::SearchConfig &base,
                                         const RestartPolicy &policy,
                                         int trials);

} // namespace gp::restart

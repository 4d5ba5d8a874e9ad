#pragma once

#include "gp/generators.h"
#include "gp/graph.h"
#include "gp/restart.h"
#include "gp/search.h"

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace gp::bench {

using model::PropId;

// Checks a layered plan under parallel STRIPS semantics: every step's
// preconditions hold in the state before it, no two actions of a step
// statically interfere, and the final state contains every goal. Returns a
// description of the first violation, or nothing for a valid plan.
std::optional<std::string> validate_plan(const model::Problem &problem,
                                         const search::Plan &plan);

struct OracleBudgetExceeded : std::runtime_error {
    OracleBudgetExceeded()
        : std::runtime_error("oracle node budget exceeded") {}
};

inline constexpr std::uint64_t kOracleBudget = 10'000'000;

// Exhaustive reference search: enumerates every mutex-consistent supporter
// selection, level by level, with no memoization, pruning heuristic, or
// conflict analysis. Used to certify stored memos as genuinely unsolvable
// goal sets. Throws OracleBudgetExceeded after `budget` visited nodes.
bool oracle_solvable(const graph::PlanningGraph &pg, int k,
                     const std::vector<PropId> &goals,
                     std::uint64_t budget = kOracleBudget);

// Smallest depth <= max_levels at which the problem goals are solvable,
// or -1. Extends the graph as needed.
int oracle_min_depth(graph::PlanningGraph &pg, int max_levels,
                     std::uint64_t budget = kOracleBudget);

// One benchmark row. Doubles are written with three decimals; the time
// columns are zeroed unless with_times is set so that repeated runs byte-match.
struct RunRecord {
    std::string problem;
    std::string strategy;
    bool solved = false;
    int steps = 0;
    int actions = 0;
    std::uint64_t backtracks = 0;
    std::uint64_t memos_stored = 0;
    std::uint64_t memo_hits = 0;
    double avln = 0.0;
    double avfm = 0.0;
    double mfsl = 0.0;
    double time_ms = 0.0;
    double memo_time_ms = 0.0;
    std::uint64_t seed = 0;
};

void write_csv(std::ostream &out, const std::vector<RunRecord> &records,
               bool with_times);

// Named strategy presets:
//   plain  chronological backtracking, whole-goal-set memos, exact lookup
//   ddb    conflict-directed backjumping, whole-goal-set memos, exact lookup
//   ebl    conflict-directed backjumping, conflict-set memos, subset lookup
// Throws std::invalid_argument for anything else.
search::SearchConfig strategy_config(const std::string &name);
const std::vector<std::string> &strategy_names();

// Parses and grounds a generated instance.
std::shared_ptr<const model::Problem>
build_problem(const model::Instance &instance);

struct SuiteOptions {
    std::vector<std::string> strategies = strategy_names();
    int max_levels = 0; // 0 = uncapped
    std::uint64_t work_budget = search::kUnlimited;
    bool with_times = false;
    std::uint64_t seed = 0;
};

RunRecord run_one(graph::PlanningGraph &pg, const std::string &problem_name,
                  const std::string &strategy, const search::SearchConfig &config,
                  int max_levels, std::uint64_t work_budget,
                  search::TraceSink *trace = nullptr);

// Runs every strategy on every instance; each pair gets a fresh memo table.
std::vector<RunRecord> run_suite(const std::vector<model::Instance> &instances,
                                 const SuiteOptions &options);

} // namespace gp::bench

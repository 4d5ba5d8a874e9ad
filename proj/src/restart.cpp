#include "gp/restart.h"

#include <chrono>
#include <stdexcept>

namespace gp::restart {

namespace {

search::RunOutcome restart_loop(graph::PlanningGraph &pg,
                                const search::SearchConfig &config,
                                memos::MemoTable &memos,
                                search::SearchStats &stats,
                                const RestartPolicy &policy,
                                search::TraceSink *trace,
                                std::vector<EpochOutcome> *epochs) {
    search::Engine engine(pg, config, memos, stats, trace);
    engine.set_epoch_budget(policy.backtrack_limit);
    const std::vector<PropId> &goals = pg.problem().goals;
    search::RunOutcome outcome;
    outcome.reason = search::FailReason::limit;

    for (int k = 0; k <= policy.max_levels; ++k) {
        while (pg.depth() < k && pg.extendable())
            pg.extend();
        if (pg.depth() < k)
            break;
        outcome.final_depth = k;
        if (!graph::goals_feasible(pg, k, goals))
            continue;
        ++stats.levels_searched;
        for (int epoch = 0; epoch <= policy.restarts; ++epoch) {
            engine.begin_epoch();
            std::uint64_t before = stats.interlevel_backtracks;
            bool aborted = false;
            search::Result res;
            try {
                res = engine.find_plan(goals, k);
            } catch (const search::SearchAborted &e) {
                if (e.reason == search::SearchAborted::Reason::work_budget)
                    return outcome;
                aborted = true;
            }
            if (epochs)
                epochs->push_back({k, epoch, aborted,
                                   stats.interlevel_backtracks - before});
            if (!aborted && res.success) {
                outcome.solved = true;
                outcome.plan = std::move(res.plan);
                outcome.reason = search::FailReason::none;
                return outcome;
            }
            if (!aborted)
                break; // depth exhausted for real; restarting cannot help
        }
    }
    return outcome;
}

} // namespace

void RestartPolicy::validate() const {
    if (restarts < 0)
        throw std::invalid_argument("restarts must be >= 0");
    if (max_levels < 1)
        throw std::invalid_argument("restart search needs a depth cap");
    if (backtrack_limit < 1)
        throw std::invalid_argument("backtrack limit must be >= 1");
}

search::RunOutcome
run_with_restarts(graph::PlanningGraph &pg, const search::SearchConfig &config,
                  memos::MemoTable &memos, search::SearchStats &stats,
                  const RestartPolicy &policy, search::TraceSink *trace,
                  std::vector<EpochOutcome> *epochs) {
    config.validate();
    policy.validate();
    auto start = std::chrono::steady_clock::now();
    search::RunOutcome outcome =
        restart_loop(pg, config, memos, stats, policy, trace, epochs);
    stats.total_time_ms += std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    return outcome;
}

SolvabilityReport solvability_experiment(graph::PlanningGraph &pg,
                                         const search::SearchConfig &base,
                                         const RestartPolicy &policy,
                                         int trials) {
    if (trials < 1)
        throw std::invalid_argument("trials must be >= 1");
    SolvabilityReport report;
    report.trials = trials;
    double steps_sum = 0.0;
    double actions_sum = 0.0;
    double mfsl_sum = 0.0;
    for (int i = 0; i < trials; ++i) {
        search::SearchConfig config = base;
        config.seed = base.seed + static_cast<std::uint64_t>(i);
        memos::MemoTable memos;
        search::SearchStats stats;
        search::RunOutcome outcome =
            run_with_restarts(pg, config, memos, stats, policy);
        TrialResult trial;
        trial.solved = outcome.solved;
        trial.interlevel_backtracks = stats.interlevel_backtracks;
        trial.memo_hits = stats.memo_hits;
        trial.mfsl = stats.levels_searched
                         ? static_cast<double>(stats.memo_hits) /
                               stats.levels_searched
                         : 0.0;
        mfsl_sum += trial.mfsl;
        if (outcome.solved) {
            trial.steps = outcome.plan.num_steps();
            trial.actions = outcome.plan.num_actions();
            ++report.solved;
            steps_sum += trial.steps;
            actions_sum += trial.actions;
        }
        report.per_trial.push_back(trial);
    }
    report.pct_solved = 100.0 * report.solved / report.trials;
    if (report.solved) {
        report.mean_steps = steps_sum / report.solved;
        report.mean_actions = actions_sum / report.solved;
    }
    report.mean_mfsl = mfsl_sum / report.trials;
    return report;
}

} // namespace gp::restart

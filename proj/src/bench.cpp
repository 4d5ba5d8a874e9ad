#include "gp/bench.h"

#include "gp/util.h"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace gp::bench {

std::optional<std::string> validate_plan(const model::Problem &problem,
                                         const search::Plan &plan) {
    std::vector<PropId> state = problem.init;
    for (int i = 0; i < plan.num_steps(); ++i) {
        const auto &step = plan.steps[i];
        for (const model::GroundAction *action : step) {
            for (PropId p : action->pre)
                if (!util::sorted_contains(state, p))
                    return "step " + std::to_string(i + 1) + ": precondition " +
                           problem.prop_name(p) + " of " + action->name +
                           " does not hold";
        }
        for (std::size_t a = 0; a < step.size(); ++a)
            for (std::size_t b = a + 1; b < step.size(); ++b) {
                if (step[a] == step[b])
                    return "step " + std::to_string(i + 1) + ": " +
                           step[a]->name + " appears twice";
                if (graph::statically_interfere(*step[a], *step[b]))
                    return "step " + std::to_string(i + 1) + ": " +
                           step[a]->name + " interferes with " + step[b]->name;
            }
        std::vector<PropId> next = state;
        for (const model::GroundAction *action : step)
            for (PropId p : action->del) {
                auto it = std::lower_bound(next.begin(), next.end(), p);
                if (it != next.end() && *it == p)
                    next.erase(it);
            }
        for (const model::GroundAction *action : step)
            for (PropId p : action->add)
                util::sorted_insert(next, p);
        state = std::move(next);
    }
    for (PropId g : problem.goals)
        if (!util::sorted_contains(state, g))
            return "goal " + problem.prop_name(g) + " does not hold at the end";
    return std::nullopt;
}

namespace {

bool oracle_rec(const graph::PlanningGraph &pg, int k,
                const std::vector<PropId> &goals, std::uint64_t budget,
                std::uint64_t &visited) {
    if (++visited > budget)
        throw OracleBudgetExceeded{};
    if (k == 0) {
        for (PropId g : goals)
            if (!pg.level(0).has_prop(g))
                return false;
        return true;
    }
    const graph::GraphLevel &gl = pg.level(k);
    for (PropId g : goals)
        if (!gl.has_prop(g))
            return false;

    std::vector<int> choice(goals.size(), 0);
    std::vector<int> chosen; // action indices, parallel to goals
    std::size_t i = 0;
    while (true) {
        if (i == goals.size()) {
            std::vector<PropId> subgoals;
            for (int ai : chosen)
                util::sorted_union_into(subgoals, gl.actions[ai]->pre);
            if (oracle_rec(pg, k - 1, subgoals, budget, visited))
                return true;
            --i;
            chosen.pop_back();
            ++choice[i];
            continue;
        }
        const std::vector<int> &domain = gl.supporters_of(goals[i]);
        if (choice[i] >= static_cast<int>(domain.size())) {
            if (i == 0)
                return false;
            choice[i] = 0;
            --i;
            chosen.pop_back();
            ++choice[i];
            continue;
        }
        int ai = domain[choice[i]];
        bool consistent = true;
        for (int prev : chosen)
            if (gl.action_mutex.get(prev, ai)) {
                consistent = false;
                break;
            }
        if (!consistent) {
            ++choice[i];
            continue;
        }
        chosen.push_back(ai);
        ++i;
    }
}

} // namespace

bool oracle_solvable(const graph::PlanningGraph &pg, int k,
                     const std::vector<PropId> &goals, std::uint64_t budget) {
    std::vector<PropId> sorted = util::sorted_dedup(goals);
    std::uint64_t visited = 0;
    return oracle_rec(pg, k, sorted, budget, visited);
}

int oracle_min_depth(graph::PlanningGraph &pg, int max_levels,
                     std::uint64_t budget) {
    const std::vector<PropId> &goals = pg.problem().goals;
    for (int k = 0; k <= max_levels; ++k) {
        while (pg.depth() < k && pg.extendable())
            pg.extend();
        if (pg.depth() < k)
            return -1;
        if (!graph::goals_feasible(pg, k, goals))
            continue;
        if (oracle_solvable(pg, k, goals, budget))
            return k;
    }
    return -1;
}

namespace {

std::string fixed3(double value) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(3) << value;
    return out.str();
}

} // namespace

void write_csv(std::ostream &out, const std::vector<RunRecord> &records,
               bool with_times) {
    out << "problem,strategy,solved,steps,actions,backtracks,memos_stored,"
           "memo_hits,avln,avfm,mfsl,time_ms,memo_time_ms,seed\n";
    for (const RunRecord &r : records) {
        out << r.problem << "," << r.strategy << "," << (r.solved ? 1 : 0)
            << "," << r.steps << "," << r.actions << "," << r.backtracks << ","
            << r.memos_stored << "," << r.memo_hits << "," << fixed3(r.avln)
            << "," << fixed3(r.avfm) << "," << fixed3(r.mfsl) << ","
            << fixed3(with_times ? r.time_ms : 0.0) << ","
            << fixed3(with_times ? r.memo_time_ms : 0.0) << "," << r.seed
            << "\n";
    }
}

search::SearchConfig strategy_config(const std::string &name) {
    search::SearchConfig config;
    if (name == "plain") {
        config.ddb = false;
        config.memo_generation = search::MemoGeneration::plain;
        config.memo_lookup = memos::LookupMode::exact;
    } else if (name == "ddb") {
        config.ddb = true;
        config.memo_generation = search::MemoGeneration::plain;
        config.memo_lookup = memos::LookupMode::exact;
    } else if (name == "ebl") {
        config.ddb = true;
        config.memo_generation = search::MemoGeneration::ebl;
        config.memo_lookup = memos::LookupMode::subset;
    } else {
        throw std::invalid_argument("unknown strategy: " + name);
    }
    return config;
}

const std::vector<std::string> &strategy_names() {
    static const std::vector<std::string> names = {"plain", "ddb", "ebl"};
    return names;
}

std::shared_ptr<const model::Problem>
build_problem(const model::Instance &instance) {
    model::Domain domain = model::parse_domain(instance.domain_pddl);
    model::ProblemAst ast = model::parse_problem(instance.problem_pddl, domain);
    return std::make_shared<const model::Problem>(model::ground(domain, ast));
}

RunRecord run_one(graph::PlanningGraph &pg, const std::string &problem_name,
                  const std::string &strategy,
                  const search::SearchConfig &config, int max_levels,
                  std::uint64_t work_budget, search::TraceSink *trace) {
    memos::MemoTable memos;
    search::SearchStats stats;
    search::RunOutcome outcome = search::run_systematic(
        pg, config, memos, stats, max_levels, trace, work_budget);
    RunRecord record;
    record.problem = problem_name;
    record.strategy = strategy;
    record.solved = outcome.solved;
    if (outcome.solved) {
        record.steps = outcome.plan.num_steps();
        record.actions = outcome.plan.num_actions();
    }
    record.backtracks = stats.backtracks;
    record.memos_stored = memos.stored();
    record.memo_hits = memos.hits();
    record.avln = memos.avln();
    record.avfm = memos.avfm();
    record.mfsl = stats.levels_searched
                      ? static_cast<double>(stats.memo_hits) /
                            stats.levels_searched
                      : 0.0;
    record.time_ms = stats.total_time_ms;
    record.memo_time_ms = stats.memo_time_ms;
    record.seed = config.seed;
    return record;
}

std::vector<RunRecord>
run_suite(const std::vector<model::Instance> &instances,
          const SuiteOptions &options) {
    std::vector<RunRecord> records;
    for (const model::Instance &instance : instances) {
        std::shared_ptr<const model::Problem> problem =
            build_problem(instance);
        for (const std::string &strategy : options.strategies) {
            search::SearchConfig config = strategy_config(strategy);
            config.seed = options.seed;
            graph::PlanningGraph pg(problem);
            records.push_back(run_one(pg, instance.name, strategy, config,
                                      options.max_levels, options.work_budget));
        }
    }
    return records;
}

} // namespace gp::bench

#include "CLI11.hpp"

#include "gp/bench.h"
#include "gp/dcsp.h"
#include "gp/generators.h"
#include "gp/restart.h"

#include "json.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitSolved = 0;
constexpr int kExitUnsolved = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string fixed3(double value) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(3) << value;
    return out.str();
}

void print_plan(const gp::search::Plan &plan) {
    for (int i = 0; i < plan.num_steps(); ++i) {
        std::cout << (i + 1) << ":";
        for (const gp::model::GroundAction *action : plan.steps[i])
            std::cout << " " << action->name;
        std::cout << "\n";
    }
}

void dump_graph_json(const gp::graph::PlanningGraph &pg, std::ostream &out) {
    using nlohmann::ordered_json;
    const gp::model::Problem &problem = pg.problem();
    for (int k = 0; k <= pg.depth(); ++k) {
        const gp::graph::GraphLevel &gl = pg.level(k);
        ordered_json record;
        record["level"] = k;
        ordered_json props = ordered_json::array();
        for (gp::model::PropId p : gl.props)
            props.push_back(problem.prop_name(p));
        record["props"] = std::move(props);
        ordered_json actions = ordered_json::array();
        for (const gp::model::GroundAction *a : gl.actions)
            actions.push_back(a->name);
        record["actions"] = std::move(actions);
        ordered_json amutex = ordered_json::array();
        for (std::size_t i = 0; i < gl.actions.size(); ++i)
            for (std::size_t j = i + 1; j < gl.actions.size(); ++j)
                if (gl.action_mutex.get(static_cast<int>(i),
                                        static_cast<int>(j)))
                    amutex.push_back({gl.actions[i]->name,
                                      gl.actions[j]->name});
        record["action_mutexes"] = std::move(amutex);
        ordered_json pmutex = ordered_json::array();
        for (std::size_t i = 0; i < gl.props.size(); ++i)
            for (std::size_t j = i + 1; j < gl.props.size(); ++j)
                if (gl.prop_mutex.get(static_cast<int>(i),
                                      static_cast<int>(j)))
                    pmutex.push_back({problem.prop_name(gl.props[i]),
                                      problem.prop_name(gl.props[j])});
        record["prop_mutexes"] = std::move(pmutex);
        out << record.dump() << "\n";
    }
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Graphplan-style planner with conflict-directed search"};

    std::string domain_path, problem_path;
    app.add_option("domain", domain_path, "domain PDDL file");
    app.add_option("problem", problem_path, "problem PDDL file");

    std::string strategy = "ebl";
    app.add_option("--strategy", strategy, "search strategy preset")
        ->check(CLI::IsMember({"plain", "ddb", "ebl"}));
    std::string memo_mode;
    auto *memo_opt =
        app.add_option("--memo", memo_mode, "memo lookup discipline")
            ->check(CLI::IsMember({"off", "exact", "subset", "partial"}));
    bool fc = false, dvo = false, noop_first = false, min_action_set = false;
    app.add_flag("--fc", fc, "forward checking");
    app.add_flag("--dvo", dvo, "dynamic variable ordering");
    app.add_flag("--noop-first", noop_first, "try persist actions first");
    app.add_flag("--min-action-set", min_action_set,
                 "reuse an assigned action that already adds the goal");
    std::string sticky;
    app.add_option("--sticky", sticky, "sticky values on backjump")
        ->check(CLI::IsMember({"simple", "fold"}));
    std::string value_order;
    auto *order_opt =
        app.add_option("--value-order", value_order, "value ordering")
            ->check(CLI::IsMember({"canonical", "noop-first", "random"}));

    int restarts = 0;
    auto *restarts_opt = app.add_option(
        "--restarts", restarts, "restarts per depth (enables restart search)");
    std::uint64_t btk_limit = 0;
    auto *btk_opt = app.add_option(
        "--btk-limit", btk_limit,
        "inter-level backtracks per epoch (enables restart search)");
    int max_levels = 0;
    app.add_option("--max-levels", max_levels, "depth cap (0 = uncapped)");
    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "random seed");
    int runs = 1;
    app.add_option("--runs", runs, "independent restart trials");

    std::string stats_path, trace_path, csp_path, memo_dump_path;
    app.add_option("--stats", stats_path, "append-free CSV report file");
    app.add_option("--trace", trace_path, "search event log file");
    app.add_option("--export-csp", csp_path, "CSP compilation (JSON lines)");
    app.add_option("--dump-memos", memo_dump_path, "stored memo listing");
    bool dump_graph = false, no_times = false;
    app.add_flag("--dump-graph", dump_graph,
                 "print per-level graph JSON to stdout");
    app.add_flag("--no-times", no_times, "zero the CSV time columns");

    std::string family;
    int family_size = 2;
    std::string gen_dir;
    app.add_option("--family", family, "generated instance family")
        ->check(CLI::IsMember(gp::model::instance_families()));
    app.add_option("-n,--size", family_size, "generated instance size");
    app.add_option("--gen-dir", gen_dir,
                   "write the generated PDDL files here and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (!gen_dir.empty()) {
            if (family.empty()) {
                std::cerr << "--gen-dir needs --family\n";
                return kExitUsage;
            }
            gp::model::Instance instance =
                gp::model::generate_instance(family, family_size);
            std::string domain_file =
                gen_dir + "/" + instance.name + "-domain.pddl";
            std::string problem_file =
                gen_dir + "/" + instance.name + "-problem.pddl";
            std::ofstream df(domain_file);
            std::ofstream pf(problem_file);
            if (!df || !pf)
                throw std::runtime_error("cannot write into " + gen_dir);
            df << instance.domain_pddl;
            pf << instance.problem_pddl;
            std::cout << domain_file << "\n" << problem_file << "\n";
            return kExitSolved;
        }

        std::shared_ptr<const gp::model::Problem> problem;
        std::string problem_name;
        if (!family.empty()) {
            gp::model::Instance instance =
                gp::model::generate_instance(family, family_size);
            problem = gp::bench::build_problem(instance);
            problem_name = instance.name;
        } else if (!domain_path.empty() && !problem_path.empty()) {
            gp::model::Domain domain =
                gp::model::parse_domain(read_file(domain_path));
            gp::model::ProblemAst ast =
                gp::model::parse_problem(read_file(problem_path), domain);
            problem = std::make_shared<const gp::model::Problem>(
                gp::model::ground(domain, ast));
            problem_name = ast.name;
        } else {
            std::cerr << "need either DOMAIN PROBLEM or --family\n"
                      << app.help();
            return kExitUsage;
        }

        bool restart_mode = restarts_opt->count() > 0 || btk_opt->count() > 0;

        gp::search::SearchConfig config = gp::bench::strategy_config(strategy);
        if (memo_opt->count() > 0) {
            if (memo_mode == "off")
                config.memo_lookup = gp::memos::LookupMode::off;
            else if (memo_mode == "exact")
                config.memo_lookup = gp::memos::LookupMode::exact;
            else if (memo_mode == "subset")
                config.memo_lookup = gp::memos::LookupMode::subset;
            else
                config.memo_lookup = gp::memos::LookupMode::partial;
        }
        config.fc = fc;
        config.dvo = dvo;
        config.minimal_action_set = min_action_set;
        config.seed = seed;
        if (!sticky.empty())
            config.sticky = sticky == "simple"
                                ? gp::search::StickyMode::simple
                                : gp::search::StickyMode::fold;
        if (order_opt->count() > 0 && noop_first) {
            std::cerr << "--value-order and --noop-first conflict\n";
            return kExitUsage;
        }
        if (noop_first)
            config.value_order = gp::search::ValueOrder::noop_first;
        else if (value_order == "noop-first")
            config.value_order = gp::search::ValueOrder::noop_first;
        else if (value_order == "random")
            config.value_order = gp::search::ValueOrder::random;
        else if (value_order == "canonical")
            config.value_order = gp::search::ValueOrder::canonical;
        else if (restart_mode)
            config.value_order = gp::search::ValueOrder::random;
        config.validate();

        gp::graph::PlanningGraph pg(problem);

        std::ofstream trace_file;
        std::unique_ptr<gp::search::TraceSink> trace;
        if (!trace_path.empty()) {
            trace_file.open(trace_path);
            if (!trace_file)
                throw std::runtime_error("cannot write " + trace_path);
            trace = std::make_unique<gp::search::TraceSink>(trace_file);
        }

        gp::restart::RestartPolicy policy;
        policy.restarts = restarts;
        policy.backtrack_limit =
            btk_opt->count() > 0 ? btk_limit : gp::search::kUnlimited;
        policy.max_levels = max_levels;

        if (runs > 1) {
            gp::restart::SolvabilityReport report =
                gp::restart::solvability_experiment(pg, config, policy, runs);
            std::cout << "; trials=" << report.trials
                      << " solved=" << report.solved
                      << " pct=" << fixed3(report.pct_solved)
                      << " mean-steps=" << fixed3(report.mean_steps)
                      << " mean-actions=" << fixed3(report.mean_actions)
                      << " mean-mfsl=" << fixed3(report.mean_mfsl) << "\n";
            return report.solved > 0 ? kExitSolved : kExitUnsolved;
        }

        gp::memos::MemoTable memos;
        gp::search::SearchStats stats;
        gp::search::RunOutcome outcome;
        if (restart_mode)
            outcome = gp::restart::run_with_restarts(pg, config, memos, stats,
                                                     policy, trace.get());
        else
            outcome = gp::search::run_systematic(pg, config, memos, stats,
                                                 max_levels, trace.get());

        if (outcome.solved) {
            print_plan(outcome.plan);
            std::cout << "; solved steps=" << outcome.plan.num_steps()
                      << " actions=" << outcome.plan.num_actions();
        } else {
            std::cout << "; no plan ("
                      << (outcome.reason ==
                                  gp::search::FailReason::proven_unsolvable
                              ? "unsolvable"
                              : "limit")
                      << ")";
        }
        std::cout << " depth=" << outcome.final_depth
                  << " assignments=" << stats.assignments
                  << " backtracks=" << stats.backtracks
                  << " interlevel=" << stats.interlevel_backtracks
                  << " memos=" << memos.stored() << " hits=" << memos.hits()
                  << " avln=" << fixed3(memos.avln())
                  << " avfm=" << fixed3(memos.avfm()) << "\n";

        if (!stats_path.empty()) {
            gp::bench::RunRecord record;
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
            std::ofstream csv(stats_path);
            if (!csv)
                throw std::runtime_error("cannot write " + stats_path);
            gp::bench::write_csv(csv, {record}, !no_times);
        }
        if (!memo_dump_path.empty()) {
            std::ofstream out(memo_dump_path);
            if (!out)
                throw std::runtime_error("cannot write " + memo_dump_path);
            memos.dump(out);
        }
        if (!csp_path.empty()) {
            while (pg.depth() < 1 && pg.extendable())
                pg.extend();
            int k = std::max(1, outcome.final_depth);
            if (k > pg.depth())
                k = pg.depth();
            gp::dcsp::Dcsp dcsp =
                gp::dcsp::formulate(pg, k, pg.problem().goals);
            gp::dcsp::CspExport csp = gp::dcsp::compile_to_csp(dcsp);
            std::ofstream out(csp_path);
            if (!out)
                throw std::runtime_error("cannot write " + csp_path);
            gp::dcsp::write_jsonl(csp, out);
        }
        if (dump_graph)
            dump_graph_json(pg, std::cout);

        return outcome.solved ? kExitSolved : kExitUnsolved;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

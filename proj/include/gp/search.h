#pragma once

#include "gp/graph.h"
#include "gp/memostore.h"
#include "gp/util.h"

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace gp::search {

using model::GroundAction;
using model::PropId;

enum class MemoGeneration { plain, ebl };
enum class StickyMode { off, simple, fold };
enum class ValueOrder { canonical, noop_first, random };

struct SearchConfig {
    MemoGeneration memo_generation = MemoGeneration::ebl;
    memos::LookupMode memo_lookup = memos::LookupMode::subset;
    bool ddb = true;
    bool fc = false;
    bool dvo = false;
    StickyMode sticky = StickyMode::off;
    ValueOrder value_order = ValueOrder::canonical;
    std::uint64_t seed = 0;
    bool minimal_action_set = false;

    // Throws std::invalid_argument on illegal combinations: sticky values
    // need ddb, and ebl generation requires subset lookup.
    void validate() const;
};

struct Plan {
    // steps[i] holds level i+1's selected actions, persists excluded.
    std::vector<std::vector<const GroundAction *>> steps;

    int num_steps() const { return static_cast<int>(steps.size()); }
    int num_actions() const;
};

struct SearchStats {
    std::uint64_t assignments = 0;
    // Value-loop exhaustions; conflict-directed fail-throughs not counted.
    std::uint64_t backtracks = 0;
    std::uint64_t interlevel_backtracks = 0;
    std::uint64_t memo_hits = 0;
    std::uint64_t memos_stored = 0;
    std::uint64_t total_memo_length = 0;
    std::uint64_t lookups = 0;
    int levels_searched = 0;
    double total_time_ms = 0.0;
    double memo_time_ms = 0.0;
};

// Line-per-event log. Events: assign, reject, backjump, memo-store, memo-hit;
// verbose mode adds prune events from forward checking. Sets print sorted by
// proposition id using problem atom names.
class TraceSink {
public:
    explicit TraceSink(std::ostream &out, bool verbose = false)
        : out_(&out), verbose_(verbose) {}

    std::ostream &out() { return *out_; }
    bool verbose() const { return verbose_; }

private:
    std::ostream *out_;
    bool verbose_;
};

struct Result {
    bool success = false;
    Plan plan;
    std::vector<PropId> conflict; // failure explanation at the failed level
};

// Raised when an epoch exceeds its inter-level backtrack budget or the
// engine its global work budget.
struct SearchAborted {
    enum class Reason { epoch_budget, work_budget } reason;
};

inline constexpr std::uint64_t kUnlimited =
    std::numeric_limits<std::uint64_t>::max();

// A goal's chosen supporter at some level, for regression.
struct Selection {
    PropId goal;
    const GroundAction *action;
    int rank; // assignment order within the level
};

// Maps a failed level-(k-1) conflict set to the level-k goals responsible:
// goals that are the sole activator of some member are taken first, covered
// members add nothing, and any member still uncovered contributes its
// earliest-assigned activator.
std::vector<PropId> regress(const std::vector<PropId> &conflict,
                            const std::vector<Selection> &selection);

// Value-order transform shared by both sticky modes; positions index the
// base order. simple moves the remembered value to the front, fold rotates
// the order to start there.
std::vector<int> apply_sticky(const std::vector<int> &base, int sticky_pos,
                              StickyMode mode);

class Engine {
public:
    Engine(const graph::PlanningGraph &pg, const SearchConfig &config,
           memos::MemoTable &memos, SearchStats &stats,
           TraceSink *trace = nullptr);

    // Backward extraction of `goals` at level k. Throws SearchAborted when a
    // budget set below runs out.
    Result find_plan(const std::vector<PropId> &goals, int k);

    // Per-epoch inter-level backtrack budget (restart search).
    void set_epoch_budget(std::uint64_t limit) { epoch_budget_ = limit; }
    // Total backtrack budget across the engine's lifetime.
    void set_work_budget(std::uint64_t limit) { work_budget_ = limit; }
    // Clears sticky values and the epoch counter; memos persist.
    void begin_epoch();

private:
    struct VarState {
        PropId prop = 0;
        std::vector<int> domain; // supporter indices, canonical order
        std::vector<char> alive; // parallel to domain (forward checking)
        int live_count = 0;
        int assigned_value = -1; // index into domain
        int rank = -1;
        std::vector<PropId> fc_pruners; // sorted
        std::vector<PropId> cs;         // valid from visit to unassign
    };

    struct LevelSearch {
        int level;
        const graph::GraphLevel *gl;
        std::vector<VarState> vars; // canonical goal order
        std::vector<int> assign_order;
        std::vector<PropId> goals; // sorted
    };

    struct PruneRecord {
        int var;
        int pos;
        bool pruner_recorded;
    };

    Result assign_goals(LevelSearch &ls);
    int select_variable(const LevelSearch &ls) const;
    std::vector<int> order_values(const LevelSearch &ls, const VarState &v);
    bool forward_check(LevelSearch &ls, int vi, int action_index,
                       std::vector<PruneRecord> &trail, int *emptied);
    void undo_prunes(LevelSearch &ls, const std::vector<PruneRecord> &trail,
                     PropId pruner);
    std::vector<PropId> chronological_set(const LevelSearch &ls) const;

    const GroundAction *action_at(const LevelSearch &ls, int idx) const {
        return ls.gl->actions[idx];
    }

    void trace_set(const char *kind, int level, const VarState *v,
                   const GroundAction *value, const char *set_label,
                   const std::vector<PropId> &set);

    const graph::PlanningGraph &pg_;
    SearchConfig config_;
    memos::MemoTable &memos_;
    SearchStats &stats_;
    TraceSink *trace_;
    util::Rng rng_;
    std::map<std::pair<int, PropId>, const GroundAction *> sticky_;
    std::uint64_t epoch_budget_ = kUnlimited;
    std::uint64_t epoch_interlevel_ = 0;
    std::uint64_t work_budget_ = kUnlimited;
};

enum class FailReason { none, limit, proven_unsolvable };

struct RunOutcome {
    bool solved = false;
    Plan plan;
    FailReason reason = FailReason::none;
    int final_depth = 0;
};

// Systematic driver: grow the graph, search every feasible depth, stop on a
// plan, the depth cap (max_levels, 0 = uncapped), a proof of unsolvability
// (graph leveled off with goals infeasible, or with the memo count at the
// level-off point unchanged by the last failed search), or the backtrack
// budget; the last two of those report FailReason::limit.
RunOutcome run_systematic(graph::PlanningGraph &pg, const SearchConfig &config,
                          memos::MemoTable &memos, SearchStats &stats,
                          int max_levels, TraceSink *trace = nullptr,
                          std::uint64_t work_budget = kUnlimited);

} // namespace gp::search

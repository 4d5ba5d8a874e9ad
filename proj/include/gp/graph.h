#pragma once

#include "gp/model.h"
#include "gp/util.h"

#include <deque>
#include <memory>
#include <vector>

namespace gp::graph {

using model::GroundAction;
using model::PropId;

// One action level of the planning graph together with the proposition level
// it produces. Actions are stored in admission order: regular actions in
// problem order, persist actions after them in proposition order.
struct GraphLevel {
    std::vector<PropId> props; // sorted ascending
    std::vector<const GroundAction *> actions;
    // Per proposition (parallel to props), indices into actions in admission
    // order; persists therefore come last in every list.
    std::vector<std::vector<int>> supporters;
    util::BitMatrix action_mutex;
    util::BitMatrix prop_mutex;

    bool has_prop(PropId p) const {
        return util::sorted_contains(props, p);
    }
    int prop_index(PropId p) const; // -1 when absent
    bool props_mutex(PropId p, PropId q) const;
    const std::vector<int> &supporters_of(PropId p) const;
};

// Two actions interfere when either deletes a precondition or add effect of
// the other.
bool statically_interfere(const GroundAction &a, const GroundAction &b);

// Interference or competing needs relative to the previous proposition level.
bool action_mutex(const GroundAction &a, const GroundAction &b,
                  const GraphLevel &prev);

class PlanningGraph {
public:
    explicit PlanningGraph(std::shared_ptr<const model::Problem> problem);

    // Adds one action level. No-op on a non-extendable graph.
    void extend();

    int depth() const { return static_cast<int>(levels_.size()) - 1; }
    // k = 0 is the initial-state pseudo level (props only).
    const GraphLevel &level(int k) const { return levels_.at(k); }
    bool leveled_off() const { return leveled_off_; }
    // First level whose successor repeats it, or -1.
    int level_off_point() const { return level_off_point_; }
    bool extendable() const { return extendable_; }
    const model::Problem &problem() const { return *problem_; }
    std::shared_ptr<const model::Problem> problem_ptr() const {
        return problem_;
    }

    // Hand-built graphs (the fig1 family and test scenarios): each level is
    // given explicit actions plus declared interference pairs by action name;
    // competing needs and proposition mutexes are still derived by the
    // standard rules. Such graphs are not extendable.
    struct SyntheticLevel {
        std::vector<const GroundAction *> actions;
        std::vector<std::pair<std::string, std::string>> interference;
    };
    static PlanningGraph
    synthetic(std::shared_ptr<const model::Problem> problem,
              const std::vector<SyntheticLevel> &levels);

private:
    PlanningGraph() = default;

    const GroundAction *persist_for(PropId p);
    void finish_level(GraphLevel &level, const GraphLevel &prev);
    void check_level_off();

    std::shared_ptr<const model::Problem> problem_;
    std::vector<GraphLevel> levels_;
    std::deque<GroundAction> persist_arena_; // stable addresses
    std::vector<const GroundAction *> persist_by_prop_;
    bool leveled_off_ = false;
    int level_off_point_ = -1;
    bool extendable_ = true;
};

// True when every goal is present at level k and no two are mutex there.
bool goals_feasible(const PlanningGraph &pg, int k,
                    const std::vector<PropId> &goals);

// The running example as a fixed two-level synthetic graph: goals G1..G4 at
// level 2 supported by A1..A4, subgoals P1..P6 at level 1 with domains
// {A5}, {A6,A11}, {A7}, {A8,A9}, {A10}, {A10} and interference pairs
// {A5,A9}, {A6,A8}, {A7,A11}.
PlanningGraph fig1_graph();

} // namespace gp::graph

#include "gp/graph.h"

#include <algorithm>
#include <cassert>
#include <map>
#include <stdexcept>

namespace gp::graph {

int GraphLevel::prop_index(PropId p) const {
    auto it = std::lower_bound(props.begin(), props.end(), p);
    if (it == props.end() || *it != p)
        return -1;
    return static_cast<int>(it - props.begin());
}

bool GraphLevel::props_mutex(PropId p, PropId q) const {
    int i = prop_index(p);
    int j = prop_index(q);
    assert(i >= 0 && j >= 0);
    if (i == j)
        return false;
    return prop_mutex.get(i, j);
}

const std::vector<int> &GraphLevel::supporters_of(PropId p) const {
    int i = prop_index(p);
    if (i < 0)
        throw std::invalid_argument("proposition not present at this level");
    return supporters[i];
}

bool statically_interfere(const GroundAction &a, const GroundAction &b) {
    return util::sorted_intersects(a.del, b.pre) ||
           util::sorted_intersects(a.del, b.add) ||
           util::sorted_intersects(b.del, a.pre) ||
           util::sorted_intersects(b.del, a.add);
}

bool action_mutex(const GroundAction &a, const GroundAction &b,
                  const GraphLevel &prev) {
    if (statically_interfere(a, b))
        return true;
    for (PropId p : a.pre)
        for (PropId q : b.pre)
            if (p != q && prev.props_mutex(p, q))
                return true;
    return false;
}

PlanningGraph::PlanningGraph(std::shared_ptr<const model::Problem> problem)
    : problem_(std::move(problem)) {
    persist_by_prop_.resize(problem_->num_props(), nullptr);
    GraphLevel init;
    init.props = problem_->init;
    init.supporters.resize(init.props.size());
    init.prop_mutex = util::BitMatrix(static_cast<int>(init.props.size()));
    levels_.push_back(std::move(init));
}

const GroundAction *PlanningGraph::persist_for(PropId p) {
    if (persist_by_prop_[p] == nullptr) {
        GroundAction persist;
        persist.name = "persist-" + problem_->prop_name(p);
        persist.pre = {p};
        persist.add = {p};
        persist.is_persist = true;
        persist_arena_.push_back(std::move(persist));
        persist_by_prop_[p] = &persist_arena_.back();
    }
    return persist_by_prop_[p];
}

// Computes supporters and both mutex relations for a level whose action list
// is already fixed. Static interference is taken from the actions' delete
// lists; the synthetic path overrides it via explicit pairs instead.
void PlanningGraph::finish_level(GraphLevel &level, const GraphLevel &prev) {
    std::map<PropId, std::vector<int>> support;
    for (std::size_t ai = 0; ai < level.actions.size(); ++ai)
        for (PropId p : level.actions[ai]->add)
            support[p].push_back(static_cast<int>(ai));

    level.props.clear();
    level.supporters.clear();
    for (auto &[p, acts] : support)
        level.props.push_back(p);
    for (PropId p : level.props)
        level.supporters.push_back(std::move(support[p]));

    int na = static_cast<int>(level.actions.size());
    if (level.action_mutex.size() != na) {
        level.action_mutex = util::BitMatrix(na);
        for (int i = 0; i < na; ++i)
            for (int j = i + 1; j < na; ++j)
                if (statically_interfere(*level.actions[i], *level.actions[j]))
                    level.action_mutex.set(i, j);
    }
    // Competing needs on top of interference.
    for (int i = 0; i < na; ++i) {
        for (int j = i + 1; j < na; ++j) {
            if (level.action_mutex.get(i, j))
                continue;
            const GroundAction &a = *level.actions[i];
            const GroundAction &b = *level.actions[j];
            bool mutex = false;
            for (PropId p : a.pre) {
                for (PropId q : b.pre) {
                    if (p != q && prev.props_mutex(p, q)) {
                        mutex = true;
                        break;
                    }
                }
                if (mutex)
                    break;
            }
            if (mutex)
                level.action_mutex.set(i, j);
        }
    }

    int np = static_cast<int>(level.props.size());
    level.prop_mutex = util::BitMatrix(np);
    for (int i = 0; i < np; ++i) {
        for (int j = i + 1; j < np; ++j) {
            bool all_pairs_mutex = true;
            for (int a : level.supporters[i]) {
                for (int b : level.supporters[j]) {
                    if (a == b || !level.action_mutex.get(a, b)) {
                        all_pairs_mutex = false;
                        break;
                    }
                }
                if (!all_pairs_mutex)
                    break;
            }
            if (all_pairs_mutex)
                level.prop_mutex.set(i, j);
        }
    }
}

void PlanningGraph::check_level_off() {
    if (leveled_off_ || levels_.size() < 3)
        return;
    const GraphLevel &last = levels_.back();
    const GraphLevel &prev = levels_[levels_.size() - 2];
    if (last.props == prev.props && last.actions == prev.actions &&
        last.action_mutex == prev.action_mutex &&
        last.prop_mutex == prev.prop_mutex) {
        leveled_off_ = true;
        level_off_point_ = static_cast<int>(levels_.size()) - 2;
    }
}

void PlanningGraph::extend() {
    if (!extendable_)
        return;
    const GraphLevel &prev = levels_.back();
    GraphLevel next;
    for (const GroundAction &action : problem_->actions) {
        bool ok = true;
        for (PropId p : action.pre) {
            if (!prev.has_prop(p)) {
                ok = false;
                break;
            }
        }
        if (ok) {
            for (std::size_t i = 0; i < action.pre.size() && ok; ++i)
                for (std::size_t j = i + 1; j < action.pre.size(); ++j)
                    if (prev.props_mutex(action.pre[i], action.pre[j])) {
                        ok = false;
                        break;
                    }
        }
        if (ok)
            next.actions.push_back(&action);
    }
    for (PropId p : prev.props)
        next.actions.push_back(persist_for(p));
    finish_level(next, prev);
    levels_.push_back(std::move(next));
    check_level_off();
}

PlanningGraph
PlanningGraph::synthetic(std::shared_ptr<const model::Problem> problem,
                         const std::vector<SyntheticLevel> &levels) {
    PlanningGraph pg;
    pg.problem_ = std::move(problem);
    pg.extendable_ = false;
    pg.persist_by_prop_.resize(pg.problem_->num_props(), nullptr);

    GraphLevel init;
    init.props = pg.problem_->init;
    init.supporters.resize(init.props.size());
    init.prop_mutex = util::BitMatrix(static_cast<int>(init.props.size()));
    pg.levels_.push_back(std::move(init));

    for (const SyntheticLevel &spec : levels) {
        GraphLevel level;
        level.actions = spec.actions;
        int na = static_cast<int>(level.actions.size());
        level.action_mutex = util::BitMatrix(na);
        for (const auto &[x, y] : spec.interference) {
            int i = -1;
            int j = -1;
            for (int a = 0; a < na; ++a) {
                if (level.actions[a]->name == x)
                    i = a;
                if (level.actions[a]->name == y)
                    j = a;
            }
            if (i < 0 || j < 0)
                throw std::invalid_argument(
                    "interference names an unknown action");
            level.action_mutex.set(i, j);
        }
        pg.finish_level(level, pg.levels_.back());
        pg.levels_.push_back(std::move(level));
    }
    return pg;
}

bool goals_feasible(const PlanningGraph &pg, int k,
                    const std::vector<PropId> &goals) {
    const GraphLevel &level = pg.level(k);
    for (PropId g : goals)
        if (!level.has_prop(g))
            return false;
    for (std::size_t i = 0; i < goals.size(); ++i)
        for (std::size_t j = i + 1; j < goals.size(); ++j)
            if (goals[i] != goals[j] &&
                level.props_mutex(goals[i], goals[j]))
                return false;
    return true;
}

PlanningGraph fig1_graph() {
    auto problem = std::make_shared<model::Problem>();
    PropId props[10];
    const char *names[10] = {"P1", "P2", "P3", "P4", "P5",
                             "P6", "G1", "G2", "G3", "G4"};
    for (int i = 0; i < 10; ++i)
        props[i] = problem->intern(names[i]);
    auto p = [&](int i) { return props[i - 1]; };     // P1..P6
    auto g = [&](int i) { return props[5 + i]; };     // G1..G4

    auto make = [&](const char *name, std::vector<PropId> pre,
                    std::vector<PropId> add) {
        GroundAction a;
        a.name = name;
        std::sort(pre.begin(), pre.end());
        std::sort(add.begin(), add.end());
        a.pre = std::move(pre);
        a.add = std::move(add);
        problem->actions.push_back(std::move(a));
    };
    make("A5", {}, {p(1)});
    make("A6", {}, {p(2)});
    make("A7", {}, {p(3)});
    make("A8", {}, {p(4)});
    make("A9", {}, {p(4)});
    make("A10", {}, {p(5), p(6)});
    make("A11", {}, {p(2)});
    make("A1", {p(1), p(2), p(3)}, {g(1)});
    make("A2", {p(4)}, {g(2)});
    make("A3", {p(5)}, {g(3)});
    make("A4", {p(1), p(6)}, {g(4)});
    for (int i = 1; i <= 4; ++i)
        problem->goals.push_back(g(i));

    std::vector<PlanningGraph::SyntheticLevel> levels(2);
    for (int i = 0; i < 7; ++i)
        levels[0].actions.push_back(&problem->actions[i]);
    levels[0].interference = {{"A5", "A9"}, {"A6", "A8"}, {"A7", "A11"}};
    for (int i = 7; i < 11; ++i)
        levels[1].actions.push_back(&problem->actions[i]);
    return PlanningGraph::synthetic(std::move(problem), levels);
}

} // namespace gp::graph

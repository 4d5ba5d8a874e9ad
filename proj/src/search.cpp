#include "gp/search.h"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <stdexcept>

namespace gp::search {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start)
        .count();
}

} // namespace

void SearchConfig::validate() const {
    if (sticky != StickyMode::off && !ddb)
        throw std::invalid_argument("sticky values require ddb");
    if (memo_generation == MemoGeneration::ebl &&
        memo_lookup != memos::LookupMode::subset)
        throw std::invalid_argument("ebl memo generation requires subset lookup");
}

int Plan::num_actions() const {
    int total = 0;
    for (const auto &step : steps)
        total += static_cast<int>(step.size());
    return total;
}

std::vector<PropId> regress(const std::vector<PropId> &conflict,
                            const std::vector<Selection> &selection) {
    std::vector<PropId> sorted = util::sorted_dedup(conflict);
    std::vector<std::vector<const Selection *>> activators(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        for (const Selection &sel : selection)
            if (util::sorted_contains(sel.action->pre, sorted[i]))
                activators[i].push_back(&sel);
        if (activators[i].empty())
            throw std::logic_error(
                "conflict member is not a precondition of any selected action");
    }

    std::vector<PropId> result;
    for (std::size_t i = 0; i < sorted.size(); ++i)
        if (activators[i].size() == 1)
            util::sorted_insert(result, activators[i][0]->goal);
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        bool covered = false;
        for (const Selection *sel : activators[i])
            if (util::sorted_contains(result, sel->goal)) {
                covered = true;
                break;
            }
        if (covered)
            continue;
        const Selection *best = activators[i][0];
        for (const Selection *sel : activators[i])
            if (sel->rank < best->rank)
                best = sel;
        util::sorted_insert(result, best->goal);
    }
    return result;
}

std::vector<int> apply_sticky(const std::vector<int> &base, int sticky_pos,
                              StickyMode mode) {
    assert(sticky_pos >= 0 && sticky_pos < static_cast<int>(base.size()));
    std::vector<int> out;
    out.reserve(base.size());
    if (mode == StickyMode::simple) {
        out.push_back(base[sticky_pos]);
        for (int i = 0; i < static_cast<int>(base.size()); ++i)
            if (i != sticky_pos)
                out.push_back(base[i]);
    } else if (mode == StickyMode::fold) {
        for (int i = sticky_pos; i < static_cast<int>(base.size()); ++i)
            out.push_back(base[i]);
        for (int i = 0; i < sticky_pos; ++i)
            out.push_back(base[i]);
    } else {
        out = base;
    }
    return out;
}

Engine::Engine(const graph::PlanningGraph &pg, const SearchConfig &config,
               memos::MemoTable &memos, SearchStats &stats, TraceSink *trace)
    : pg_(pg), config_(config), memos_(memos), stats_(stats), trace_(trace),
      rng_(config.seed) {
    config_.validate();
}

void Engine::begin_epoch() {
    sticky_.clear();
    epoch_interlevel_ = 0;
}

void Engine::trace_set(const char *kind, int level, const VarState *v,
                       const GroundAction *value, const char *set_label,
                       const std::vector<PropId> &set) {
    if (!trace_)
        return;
    std::ostream &out = trace_->out();
    out << kind << " level=" << level;
    if (v)
        out << " var=" << pg_.problem().prop_name(v->prop);
    if (value)
        out << " value=" << value->name;
    if (set_label) {
        out << " " << set_label << "={";
        for (std::size_t i = 0; i < set.size(); ++i) {
            if (i)
                out << ",";
            out << pg_.problem().prop_name(set[i]);
        }
        out << "}";
    }
    out << "\n";
}

Result Engine::find_plan(const std::vector<PropId> &goals, int k) {
    if (k == 0)
        return Result{true, {}, {}};

    std::vector<PropId> sorted_goals = util::sorted_dedup(goals);
    if (config_.memo_lookup != memos::LookupMode::off) {
        auto start = Clock::now();
        auto hit = memos_.lookup(config_.memo_lookup, k, sorted_goals);
        stats_.memo_time_ms += ms_since(start);
        ++stats_.lookups;
        if (hit) {
            ++stats_.memo_hits;
            trace_set("memo-hit", k, nullptr, nullptr, "memo", hit->props);
            return Result{false, {}, hit->props};
        }
    }

    LevelSearch ls;
    ls.level = k;
    ls.gl = &pg_.level(k);
    ls.goals = sorted_goals;
    for (PropId g : goals) {
        VarState v;
        v.prop = g;
        v.domain = ls.gl->supporters_of(g);
        v.alive.assign(v.domain.size(), 1);
        v.live_count = static_cast<int>(v.domain.size());
        ls.vars.push_back(std::move(v));
    }

    Result res = assign_goals(ls);
    if (res.success)
        return res;

    std::vector<PropId> memo = config_.memo_generation == MemoGeneration::plain
                                   ? sorted_goals
                                   : res.conflict;
    if (!memo.empty() && memos_.insert(k, memo)) {
        ++stats_.memos_stored;
        stats_.total_memo_length += memo.size();
        trace_set("memo-store", k, nullptr, nullptr, "memo", memo);
    }
    return Result{false, {}, memo};
}

int Engine::select_variable(const LevelSearch &ls) const {
    int chosen = -1;
    for (int i = 0; i < static_cast<int>(ls.vars.size()); ++i) {
        const VarState &v = ls.vars[i];
        if (v.assigned_value >= 0)
            continue;
        if (!config_.dvo)
            return i;
        int size = config_.fc ? v.live_count
                              : static_cast<int>(v.domain.size());
        if (chosen < 0 ||
            size < (config_.fc
                        ? ls.vars[chosen].live_count
                        : static_cast<int>(ls.vars[chosen].domain.size())))
            chosen = i;
    }
    return chosen;
}

std::vector<int> Engine::order_values(const LevelSearch &ls,
                                      const VarState &v) {
    std::vector<int> positions;
    for (int pos = 0; pos < static_cast<int>(v.domain.size()); ++pos)
        if (!config_.fc || v.alive[pos])
            positions.push_back(pos);

    switch (config_.value_order) {
    case ValueOrder::canonical:
        break;
    case ValueOrder::noop_first:
        std::stable_partition(positions.begin(), positions.end(),
                              [&](int pos) {
                                  return action_at(ls, v.domain[pos])
                                      ->is_persist;
                              });
        break;
    case ValueOrder::random:
        rng_.shuffle(positions);
        break;
    }

    if (config_.sticky != StickyMode::off) {
        auto it = sticky_.find({ls.level, v.prop});
        if (it != sticky_.end()) {
            for (int i = 0; i < static_cast<int>(positions.size()); ++i) {
                if (action_at(ls, v.domain[positions[i]]) == it->second)
                    return apply_sticky(positions, i, config_.sticky);
            }
        }
    }
    return positions;
}

bool Engine::forward_check(LevelSearch &ls, int vi, int action_index,
                           std::vector<PruneRecord> &trail, int *emptied) {
    const VarState &v = ls.vars[vi];
    for (int ui = 0; ui < static_cast<int>(ls.vars.size()); ++ui) {
        VarState &u = ls.vars[ui];
        if (ui == vi || u.assigned_value >= 0)
            continue;
        bool recorded = false;
        for (int pos = 0; pos < static_cast<int>(u.domain.size()); ++pos) {
            if (!u.alive[pos])
                continue;
            if (!ls.gl->action_mutex.get(u.domain[pos], action_index))
                continue;
            u.alive[pos] = 0;
            --u.live_count;
            bool newly = false;
            if (!recorded &&
                !util::sorted_contains(u.fc_pruners, v.prop)) {
                util::sorted_insert(u.fc_pruners, v.prop);
                newly = true;
                recorded = true;
            }
            trail.push_back({ui, pos, newly});
            if (trace_ && trace_->verbose()) {
                trace_->out()
                    << "prune level=" << ls.level
                    << " var=" << pg_.problem().prop_name(u.prop)
                    << " value=" << action_at(ls, u.domain[pos])->name
                    << " by=" << pg_.problem().prop_name(v.prop) << "\n";
            }
            if (u.live_count == 0) {
                *emptied = ui;
                return false;
            }
        }
    }
    return true;
}

void Engine::undo_prunes(LevelSearch &ls,
                         const std::vector<PruneRecord> &trail,
                         PropId pruner) {
    for (auto it = trail.rbegin(); it != trail.rend(); ++it) {
        VarState &u = ls.vars[it->var];
        u.alive[it->pos] = 1;
        ++u.live_count;
        if (it->pruner_recorded) {
            auto entry = std::lower_bound(u.fc_pruners.begin(),
                                          u.fc_pruners.end(), pruner);
            u.fc_pruners.erase(entry);
        }
    }
}

std::vector<PropId> Engine::chronological_set(const LevelSearch &ls) const {
    std::vector<PropId> assigned;
    for (const VarState &v : ls.vars)
        if (v.assigned_value >= 0)
            assigned.push_back(v.prop);
    std::sort(assigned.begin(), assigned.end());
    return assigned;
}

Result Engine::assign_goals(LevelSearch &ls) {
    if (static_cast<int>(ls.assign_order.size()) ==
        static_cast<int>(ls.vars.size())) {
        // Everything at this level is supported; recurse one level down.
        std::vector<PropId> subgoals;
        for (int vi : ls.assign_order) {
            const VarState &v = ls.vars[vi];
            util::sorted_union_into(
                subgoals, action_at(ls, v.domain[v.assigned_value])->pre);
        }
        Result child = find_plan(subgoals, ls.level - 1);
        if (child.success) {
            std::vector<const GroundAction *> step;
            for (int vi : ls.assign_order) {
                const VarState &v = ls.vars[vi];
                const GroundAction *action =
                    action_at(ls, v.domain[v.assigned_value]);
                if (!action->is_persist &&
                    std::find(step.begin(), step.end(), action) == step.end())
                    step.push_back(action);
            }
            child.plan.steps.push_back(std::move(step));
            return child;
        }
        ++stats_.interlevel_backtracks;
        if (++epoch_interlevel_ >= epoch_budget_)
            throw SearchAborted{SearchAborted::Reason::epoch_budget};
        std::vector<Selection> selection;
        for (int vi : ls.assign_order) {
            const VarState &v = ls.vars[vi];
            selection.push_back({v.prop,
                                 action_at(ls, v.domain[v.assigned_value]),
                                 v.rank});
        }
        return Result{false, {}, regress(child.conflict, selection)};
    }

    int vi = select_variable(ls);
    VarState &v = ls.vars[vi];
    std::vector<PropId> cs = v.fc_pruners;
    util::sorted_insert(cs, v.prop);
    v.cs = cs;

    std::vector<int> candidates;
    if (config_.minimal_action_set) {
        // A goal already added by a selected action needs no second
        // supporter; reuse keeps the action set minimal without losing
        // completeness.
        int reuse = -1;
        for (int wi : ls.assign_order) {
            const VarState &w = ls.vars[wi];
            const GroundAction *chosen =
                action_at(ls, w.domain[w.assigned_value]);
            if (util::sorted_contains(chosen->add, v.prop)) {
                for (int pos = 0; pos < static_cast<int>(v.domain.size());
                     ++pos)
                    if (action_at(ls, v.domain[pos]) == chosen) {
                        reuse = pos;
                        break;
                    }
            }
            if (reuse >= 0)
                break;
        }
        if (reuse >= 0)
            candidates.push_back(reuse);
    }
    if (candidates.empty())
        candidates = order_values(ls, v);

    for (int pos : candidates) {
        int action_index = v.domain[pos];
        const GroundAction *action = action_at(ls, action_index);

        // Conflict with an already-selected action; under forward checking
        // such values have been pruned, so this loop is a no-op there.
        int owner = -1;
        for (int wi : ls.assign_order) {
            const VarState &w = ls.vars[wi];
            if (ls.gl->action_mutex.get(w.domain[w.assigned_value],
                                        action_index)) {
                owner = wi;
                break;
            }
        }
        if (owner >= 0) {
            if (config_.fc)
                util::sorted_union_into(cs, ls.vars[owner].cs);
            else
                util::sorted_insert(cs, ls.vars[owner].prop);
            v.cs = cs;
            trace_set("reject", ls.level, &v, action, "cs", cs);
            continue;
        }

        v.assigned_value = pos;
        v.rank = static_cast<int>(ls.assign_order.size());
        ls.assign_order.push_back(vi);

        std::vector<PruneRecord> trail;
        if (config_.fc) {
            int emptied = -1;
            if (!forward_check(ls, vi, action_index, trail, &emptied)) {
                std::vector<PropId> contribution =
                    ls.vars[emptied].fc_pruners;
                util::sorted_insert(contribution, ls.vars[emptied].prop);
                undo_prunes(ls, trail, v.prop);
                ls.assign_order.pop_back();
                v.assigned_value = -1;
                v.rank = -1;
                util::sorted_union_into(cs, contribution);
                v.cs = cs;
                trace_set("reject", ls.level, &v, action, "cs", cs);
                continue;
            }
        }

        ++stats_.assignments;
        trace_set("assign", ls.level, &v, action, nullptr, {});

        Result child = assign_goals(ls);
        if (child.success)
            return child;

        undo_prunes(ls, trail, v.prop);
        ls.assign_order.pop_back();
        v.assigned_value = -1;
        v.rank = -1;

        const std::vector<PropId> &child_conflict = child.conflict;
        if (config_.ddb) {
            if (util::sorted_contains(child_conflict, v.prop)) {
                util::sorted_union_into(cs, child_conflict);
                v.cs = cs;
                continue;
            }
            sticky_[{ls.level, v.prop}] = action;
            trace_set("backjump", ls.level, &v, nullptr, "cs", child_conflict);
            return Result{false, {}, child_conflict};
        }
        std::vector<PropId> widened = child_conflict;
        util::sorted_union_into(widened, chronological_set(ls));
        util::sorted_insert(widened, v.prop);
        util::sorted_union_into(cs, widened);
        v.cs = cs;
    }

    ++stats_.backtracks;
    if (stats_.backtracks >= work_budget_)
        throw SearchAborted{SearchAborted::Reason::work_budget};
    trace_set("backjump", ls.level, &v, nullptr, "cs", cs);
    return Result{false, {}, cs};
}

RunOutcome run_systematic(graph::PlanningGraph &pg, const SearchConfig &config,
                          memos::MemoTable &memos, SearchStats &stats,
                          int max_levels, TraceSink *trace,
                          std::uint64_t work_budget) {
    config.validate();
    auto start = Clock::now();
    Engine engine(pg, config, memos, stats, trace);
    engine.set_work_budget(work_budget);
    const std::vector<PropId> &goals = pg.problem().goals;
    RunOutcome outcome;
    std::optional<std::uint64_t> memos_at_fixpoint;

    for (int k = 0;; ++k) {
        while (pg.depth() < k && pg.extendable())
            pg.extend();
        if (pg.depth() < k) {
            outcome.reason = FailReason::limit;
            outcome.final_depth = pg.depth();
            break;
        }
        outcome.final_depth = k;
        if (graph::goals_feasible(pg, k, goals)) {
            ++stats.levels_searched;
            Result res;
            bool aborted = false;
            try {
                res = engine.find_plan(goals, k);
            } catch (const SearchAborted &) {
                aborted = true;
            }
            if (aborted) {
                outcome.reason = FailReason::limit;
                break;
            }
            if (res.success) {
                outcome.solved = true;
                outcome.plan = std::move(res.plan);
                outcome.reason = FailReason::none;
                break;
            }
            if (pg.leveled_off()) {
                std::uint64_t count = memos.stored_at(pg.level_off_point());
                if (memos_at_fixpoint && *memos_at_fixpoint == count) {
                    outcome.reason = FailReason::proven_unsolvable;
                    break;
                }
                memos_at_fixpoint = count;
            }
        } else if (pg.leveled_off() && k >= pg.level_off_point()) {
            outcome.reason = FailReason::proven_unsolvable;
            break;
        }
        if (max_levels > 0 && k >= max_levels) {
            outcome.reason = FailReason::limit;
            break;
        }
    }
    stats.total_time_ms += ms_since(start);
    return outcome;
}

} // namespace gp::search

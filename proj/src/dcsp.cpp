#include "gp/dcsp.h"

#include "gp/util.h"

#include <json.hpp>

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace gp::dcsp {

Dcsp formulate(const graph::PlanningGraph &pg, int k,
               const std::vector<PropId> &goals) {
    if (k < 1 || k > pg.depth())
        throw std::invalid_argument("level out of range");
    Dcsp out;
    out.pg = &pg;
    out.k = k;
    std::vector<PropId> goal_set = util::sorted_dedup(goals);
    for (PropId g : goal_set)
        if (!pg.level(k).has_prop(g))
            throw std::invalid_argument("goal not present at level");

    for (int level = 1; level <= k; ++level) {
        const graph::GraphLevel &gl = pg.level(level);
        for (std::size_t i = 0; i < gl.props.size(); ++i) {
            Variable v;
            v.prop = gl.props[i];
            v.level = level;
            v.domain = gl.supporters[i];
            v.initially_active =
                level == k && util::sorted_contains(goal_set, v.prop);
            out.variables.push_back(std::move(v));
        }

        const auto &actions = gl.actions;
        int na = static_cast<int>(actions.size());
        for (int a = 0; a < na; ++a) {
            for (int b = a + 1; b < na; ++b) {
                if (!gl.action_mutex.get(a, b))
                    continue;
                for (PropId p : actions[a]->add) {
                    for (PropId q : actions[b]->add) {
                        if (p == q)
                            continue;
                        MutexConstraint c;
                        c.level = level;
                        if (p < q)
                            c = {level, p, actions[a], q, actions[b]};
                        else
                            c = {level, q, actions[b], p, actions[a]};
                        out.mutexes.push_back(c);
                    }
                }
            }
        }

        for (std::size_t i = 0; i < gl.props.size(); ++i) {
            for (int ai : gl.supporters[i]) {
                const GroundAction *action = actions[ai];
                if (action->pre.empty())
                    continue;
                out.activities.push_back(
                    {level, gl.props[i], action, action->pre});
            }
        }
    }

    std::sort(out.mutexes.begin(), out.mutexes.end(),
              [](const MutexConstraint &x, const MutexConstraint &y) {
                  return std::tie(x.level, x.p, x.a->name, x.q, x.b->name) <
                         std::tie(y.level, y.p, y.a->name, y.q, y.b->name);
              });
    out.init_active = goal_set;
    return out;
}

namespace {

std::string var_name(const graph::PlanningGraph &pg, PropId prop, int level) {
    return pg.problem().prop_name(prop) + "@" + std::to_string(level);
}

} // namespace

CspExport compile_to_csp(const Dcsp &dcsp) {
    const graph::PlanningGraph &pg = *dcsp.pg;
    CspExport out;
    for (const Variable &v : dcsp.variables) {
        CspExport::Var var;
        var.name = var_name(pg, v.prop, v.level);
        var.level = v.level;
        for (int ai : v.domain)
            var.domain.push_back(pg.level(v.level).actions[ai]->name);
        var.domain.push_back(kBottom);
        out.vars.push_back(std::move(var));
    }
    for (const MutexConstraint &c : dcsp.mutexes)
        out.mutexes.push_back({var_name(pg, c.p, c.level), c.a->name,
                               var_name(pg, c.q, c.level), c.b->name});
    for (const ActivityConstraint &c : dcsp.activities) {
        CspExport::Activity a;
        a.var = var_name(pg, c.var, c.level);
        a.value = c.value->name;
        for (PropId p : c.activates)
            a.activates.push_back(var_name(pg, p, c.level - 1));
        out.activities.push_back(std::move(a));
    }
    for (PropId g : dcsp.init_active)
        out.init_active.push_back(var_name(pg, g, dcsp.k));
    return out;
}

void write_jsonl(const CspExport &csp, std::ostream &out) {
    using nlohmann::ordered_json;
    for (const CspExport::Var &v : csp.vars) {
        ordered_json j{{"kind", "var"},
                       {"name", v.name},
                       {"level", v.level},
                       {"domain", v.domain}};
        out << j.dump() << "\n";
    }
    for (const CspExport::Mutex &m : csp.mutexes) {
        ordered_json j{{"kind", "mutex"},
                       {"p", m.p},
                       {"a", m.a},
                       {"q", m.q},
                       {"b", m.b}};
        out << j.dump() << "\n";
    }
    for (const CspExport::Activity &a : csp.activities) {
        ordered_json j{{"kind", "activity"},
                       {"var", a.var},
                       {"value", a.value},
                       {"activates", a.activates}};
        out << j.dump() << "\n";
    }
    ordered_json j{{"kind", "init"}, {"active", csp.init_active}};
    out << j.dump() << "\n";
}

CapacityReport memo_capacity_bounds(int n, int l, int m, int d) {
    if (n < 1 || l < 1 || m < 1 || d < 0)
        throw std::invalid_argument("capacity parameters out of range");
    using boost::multiprecision::cpp_int;
    auto power = [](cpp_int base, int exp) {
        cpp_int r = 1;
        for (int i = 0; i < exp; ++i)
            r *= base;
        return r;
    };
    CapacityReport report;
    report.n = n;
    report.l = l;
    report.m = m;
    report.d = d;
    int per_level = (n + l - 1) / l;
    report.graphplan_memo_bound = cpp_int(l) * power(2, per_level);
    report.ebl_nogood_bound = power(d + 2, n);
    report.pairwise_mutex_bound = cpp_int(l) * cpp_int(m) * cpp_int(m);
    cpp_int md = cpp_int(m) * (d + 1);
    report.value_nogood_bound = cpp_int(l) * md * md;
    return report;
}

} // namespace gp::dcsp

#include "doctest.h"

#include "gp/dcsp.h"
#include "gp/graph.h"

#include <algorithm>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace gp;
using namespace gp::dcsp;
using model::PropId;

namespace {

std::vector<PropId> fig1_goals(const graph::PlanningGraph &pg) {
    std::vector<PropId> goals;
    for (const char *g : {"G1", "G2", "G3", "G4"})
        goals.push_back(pg.problem().find(g));
    return goals;
}

// Brute-force solution count for an exported standard CSP: every variable
// takes a domain value, initially active variables are non-bottom, mutex
// pairs never co-occur, and a chosen action activates its preconditions.
int count_solutions(const CspExport &csp) {
    std::vector<std::size_t> choice(csp.vars.size(), 0);
    auto value = [&](std::size_t vi) -> const std::string & {
        return csp.vars[vi].domain[choice[vi]];
    };
    auto find_var = [&](const std::string &name) {
        for (std::size_t i = 0; i < csp.vars.size(); ++i)
            if (csp.vars[i].name == name)
                return i;
        return csp.vars.size();
    };

    int solutions = 0;
    std::function<void(std::size_t)> walk = [&](std::size_t vi) {
        if (vi == csp.vars.size()) {
            for (const std::string &name : csp.init_active)
                if (value(find_var(name)) == kBottom)
                    return;
            for (const CspExport::Mutex &m : csp.mutexes)
                if (value(find_var(m.p)) == m.a && value(find_var(m.q)) == m.b)
                    return;
            for (const CspExport::Activity &a : csp.activities)
                if (value(find_var(a.var)) == a.value)
                    for (const std::string &dep : a.activates)
                        if (value(find_var(dep)) == kBottom)
                            return;
            ++solutions;
            return;
        }
        for (choice[vi] = 0; choice[vi] < csp.vars[vi].domain.size();
             ++choice[vi])
            walk(vi + 1);
    };
    walk(0);
    return solutions;
}

} // namespace

TEST_CASE("formulate exposes the running example as a dynamic csp") {
    graph::PlanningGraph pg = graph::fig1_graph();
    Dcsp d = formulate(pg, 2, fig1_goals(pg));

    REQUIRE(d.variables.size() == 10);
    // Level ascending, proposition ascending within a level.
    for (std::size_t i = 1; i < d.variables.size(); ++i) {
        const Variable &a = d.variables[i - 1];
        const Variable &b = d.variables[i];
        CHECK((a.level < b.level ||
               (a.level == b.level && a.prop < b.prop)));
    }
    CHECK(d.variables[0].level == 1);
    CHECK(pg.problem().prop_name(d.variables[0].prop) == "P1");
    CHECK(d.variables[0].domain.size() == 1);
    CHECK(d.variables[6].level == 2);

    int active = 0;
    for (const Variable &v : d.variables) {
        if (v.initially_active) {
            ++active;
            CHECK(v.level == 2);
        }
    }
    CHECK(active == 4);

    REQUIRE(d.mutexes.size() == 3);
    auto mutex_sig = [&](const MutexConstraint &c) {
        return pg.problem().prop_name(c.p) + ":" + c.a->name + "/" +
               pg.problem().prop_name(c.q) + ":" + c.b->name;
    };
    CHECK(mutex_sig(d.mutexes[0]) == "P1:A5/P4:A9");
    CHECK(mutex_sig(d.mutexes[1]) == "P2:A11/P3:A7"); // "A11" < "A6"
    CHECK(mutex_sig(d.mutexes[2]) == "P2:A6/P4:A8");
    for (const MutexConstraint &c : d.mutexes)
        CHECK(c.level == 1);

    // Only the four goal supporters have preconditions.
    REQUIRE(d.activities.size() == 4);
    for (const ActivityConstraint &a : d.activities) {
        CHECK(a.level == 2);
        CHECK(!a.activates.empty());
    }
    CHECK(d.activities[0].value->name == "A1");
    CHECK(d.activities[0].activates.size() == 3);

    CHECK(d.init_active == fig1_goals(pg));

    CHECK_THROWS_AS(formulate(pg, 0, fig1_goals(pg)), std::invalid_argument);
    CHECK_THROWS_AS(formulate(pg, 3, fig1_goals(pg)), std::invalid_argument);
    CHECK_THROWS_AS(formulate(pg, 1, fig1_goals(pg)), std::invalid_argument);
}

TEST_CASE("compiled csp matches the dynamic solution space") {
    graph::PlanningGraph pg = graph::fig1_graph();
    auto goals = fig1_goals(pg);

    // All four goals: provably no consistent selection.
    CspExport full = compile_to_csp(formulate(pg, 2, goals));
    CHECK(count_solutions(full) == 0);

    // Without G2 the example is satisfiable in exactly one way: every other
    // variable's value is forced and P4/G2 must stay bottom.
    std::vector<PropId> trimmed{goals[0], goals[2], goals[3]};
    CspExport partial = compile_to_csp(formulate(pg, 2, trimmed));
    CHECK(count_solutions(partial) == 1);
}

TEST_CASE("csp export renders fixed, byte-stable jsonl") {
    graph::PlanningGraph pg = graph::fig1_graph();
    CspExport csp = compile_to_csp(formulate(pg, 2, fig1_goals(pg)));

    std::ostringstream a, b;
    write_jsonl(csp, a);
    write_jsonl(csp, b);
    CHECK(a.str() == b.str());

    std::istringstream lines(a.str());
    std::string line;
    std::vector<std::string> all;
    while (std::getline(lines, line))
        all.push_back(line);
    REQUIRE(all.size() == 10 + 3 + 4 + 1);
    CHECK(all[0] ==
          R"({"kind":"var","name":"P1@1","level":1,"domain":["A5","_|_"]})");
    CHECK(all[1] ==
          R"({"kind":"var","name":"P2@1","level":1,"domain":["A6","A11","_|_"]})");
    CHECK(all[10] ==
          R"({"kind":"mutex","p":"P1@1","a":"A5","q":"P4@1","b":"A9"})");
    CHECK(all[13] ==
          R"({"kind":"activity","var":"G1@2","value":"A1","activates":["P1@1","P2@1","P3@1"]})");
    CHECK(all[17] ==
          R"({"kind":"init","active":["G1@2","G2@2","G3@2","G4@2"]})");

    for (const CspExport::Var &v : csp.vars)
        CHECK(v.domain.back() == kBottom);
}

TEST_CASE("capacity bounds follow the four closed forms") {
    CapacityReport r = memo_capacity_bounds(12, 3, 4, 2);
    CHECK(r.graphplan_memo_bound == 48);
    CHECK(r.ebl_nogood_bound == 16777216);
    CHECK(r.pairwise_mutex_bound == 48);
    CHECK(r.value_nogood_bound == 432);

    // ceil(n/l) when l does not divide n, and the documented d = 0 case.
    CapacityReport odd = memo_capacity_bounds(13, 3, 4, 0);
    CHECK(odd.graphplan_memo_bound == 3 * 32); // 2^ceil(13/3) = 2^5
    CHECK(odd.ebl_nogood_bound == 8192);       // 2^13
    CHECK(odd.value_nogood_bound == 48);       // 3 * (4*1)^2

    // Far past 64-bit range without overflow.
    CapacityReport big = memo_capacity_bounds(300, 1, 10, 8);
    boost::multiprecision::cpp_int expect = 1;
    for (int i = 0; i < 300; ++i)
        expect *= 10;
    CHECK(big.ebl_nogood_bound == expect);

    CHECK_THROWS_AS(memo_capacity_bounds(0, 1, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(memo_capacity_bounds(1, 0, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(memo_capacity_bounds(1, 1, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(memo_capacity_bounds(1, 1, 1, -1), std::invalid_argument);
}

#pragma once

#include "gp/graph.h"

#include <boost/multiprecision/cpp_int.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace gp::dcsp {

using model::GroundAction;
using model::PropId;

// Dynamic-CSP view of a k-level plan-extraction problem: one variable per
// proposition per level 1..k, supporter actions as domains, activity flowing
// from chosen actions to their preconditions one level down.
struct Variable {
    PropId prop;
    int level;
    std::vector<int> domain; // indices into the level's action list
    bool initially_active;
};

struct MutexConstraint {
    int level;
    PropId p;
    const GroundAction *a;
    PropId q;
    const GroundAction *b;
};

struct ActivityConstraint {
    int level; // level of the activating variable
    PropId var;
    const GroundAction *value;
    std::vector<PropId> activates; // preconditions, at level-1
};

struct Dcsp {
    const graph::PlanningGraph *pg = nullptr;
    int k = 0;
    std::vector<Variable> variables; // (level asc, prop asc)
    std::vector<MutexConstraint> mutexes;
    std::vector<ActivityConstraint> activities;
    std::vector<PropId> init_active; // goals, at level k
};

Dcsp formulate(const graph::PlanningGraph &pg, int k,
               const std::vector<PropId> &goals);

// Standard-CSP compilation: every domain gains a bottom element, activity
// becomes "value v at x forces y != bottom", and the initially active
// variables are constrained non-bottom.
struct CspExport {
    struct Var {
        std::string name; // "prop@level"
        int level;
        std::vector<std::string> domain; // action names plus the bottom mark
    };
    struct Mutex {
        std::string p, a, q, b;
    };
    struct Activity {
        std::string var, value;
        std::vector<std::string> activates;
    };
    std::vector<Var> vars;
    std::vector<Mutex> mutexes;
    std::vector<Activity> activities;
    std::vector<std::string> init_active;
};

inline constexpr const char *kBottom = "_|_";

CspExport compile_to_csp(const Dcsp &dcsp);

// One JSON object per line: var records, then mutex, then activity, then a
// single init record. Key order and record order are fixed, so equal inputs
// render byte-identical output.
void write_jsonl(const CspExport &csp, std::ostream &out);

// Worst-case store sizes for an n-proposition, l-level graph with m
// propositions per level (n split evenly over l levels, rounding the
// exponent up) and d actions per proposition domain:
//   plain memos         l * 2^ceil(n/l)
//   assignment nogoods  (d+2)^n
//   pairwise mutexes    l * m^2
//   value nogoods       l * (m*(d+1))^2
struct CapacityReport {
    int n, l, m, d;
    boost::multiprecision::cpp_int graphplan_memo_bound;
    boost::multiprecision::cpp_int ebl_nogood_bound;
    boost::multiprecision::cpp_int pairwise_mutex_bound;
    boost::multiprecision::cpp_int value_nogood_bound;
};

CapacityReport memo_capacity_bounds(int n, int l, int m, int d);

} // namespace gp::dcsp

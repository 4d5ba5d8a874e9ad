#pragma once

#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace gp::model {

using PropId = int;

// Ground STRIPS action. pre/add/del are sorted PropId sets with add/del
// disjoint; persist actions are the frame axioms synthesized per level by the
// planning graph.
struct GroundAction {
    std::string name;
    std::vector<PropId> pre;
    std::vector<PropId> add;
    std::vector<PropId> del;
    bool is_persist = false;
};

// Atom template: predicate plus arguments, each argument either a schema
// parameter (leading '?') or a constant.
struct Atom {
    std::string pred;
    std::vector<std::string> args;

    bool operator==(const Atom &) const = default;
};

struct ActionSchema {
    std::string name;
    std::vector<std::string> params; // with the '?' prefix stripped
    std::vector<Atom> pre;
    std::vector<Atom> add;
    std::vector<Atom> del;
};

struct PredicateDecl {
    std::string name;
    int arity = 0;
};

struct Domain {
    std::string name;
    std::vector<PredicateDecl> predicates;
    std::vector<ActionSchema> schemas;
};

// Parsed but ungrounded problem: atoms in file order.
struct ProblemAst {
    std::string name;
    std::string domain_name;
    std::vector<std::string> objects;
    std::vector<Atom> init;
    std::vector<Atom> goals;
};

struct ParseError : std::runtime_error {
    ParseError(int line, int column, const std::string &message)
        : std::runtime_error("line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ": " + message),
          line(line), column(column) {}

    int line;
    int column;
};

// Grounded problem. Proposition ids are dense and interned in first-seen
// order: init atoms, then goal atoms, then action atoms in grounding order.
// Goal order (file order) is preserved; it defines the canonical goal order
// at the top search level.
class Problem {
public:
    std::vector<PropId> init;  // sorted
    std::vector<PropId> goals; // file order, deduplicated
    std::vector<GroundAction> actions;

    PropId intern(const std::string &name);
    // Returns -1 if the atom never occurs in the problem.
    PropId find(const std::string &name) const;
    const std::string &prop_name(PropId id) const { return prop_names_.at(id); }
    int num_props() const { return static_cast<int>(prop_names_.size()); }

private:
    std::vector<std::string> prop_names_;
    std::unordered_map<std::string, PropId> prop_ids_;
};

Domain parse_domain(const std::string &text);
ProblemAst parse_problem(const std::string &text, const Domain &domain);

// Renders back to the PDDL subset; parsing the result reproduces the input
// structure (printer and parser form a fixpoint).
std::string to_pddl(const Domain &domain);
std::string to_pddl(const ProblemAst &problem);

// Instantiates every schema over all argument tuples (schema file order,
// then lexicographic tuples in object declaration order). Instances whose
// add and delete lists overlap are dropped. Throws std::invalid_argument on
// undeclared objects or mismatched problem/domain names.
Problem ground(const Domain &domain, const ProblemAst &problem);

// Display name for a ground atom or action: "name" or "name(a,b)".
std::string ground_name(const std::string &head,
                        const std::vector<std::string> &args);

} // namespace gp::model

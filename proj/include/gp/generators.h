#pragma once

#include <string>
#include <vector>

namespace gp::model {

struct Instance {
    std::string family;
    std::string name;
    std::string domain_pddl;
    std::string problem_pddl;
};

// Families: gripper (n balls, two grippers, two rooms), ferry (n cars, two
// shores, capacity one), hanoi (n discs, three pegs), tsp (n cities, complete
// graph, return to start), logistics (n packages, three cities in a line, one
// truck), fig1 (the fixed ten-variable two-level example; see
// graph::fig1_graph for the canonical synthetic form). Throws
// std::invalid_argument on unknown family names or out-of-range sizes.
Instance generate_instance(const std::string &family, int n);

std::vector<std::string> instance_families();

} // namespace gp::model

#include "gp/generators.h"

#include <sstream>
#include <stdexcept>

namespace gp::model {

namespace {

Instance gripper(int n) {
    std::ostringstream d;
    d << "(define (domain gripper)\n"
         "  (:requirements :strips)\n"
         "  (:predicates (room ?r) (ball ?b) (gripper ?g)\n"
         "               (at-robby ?r) (at ?b ?r) (free ?g) (carry ?b ?g))\n"
         "  (:action move\n"
         "    :parameters (?from ?to)\n"
         "    :precondition (and (room ?from) (room ?to) (at-robby ?from))\n"
         "    :effect (and (at-robby ?to) (not (at-robby ?from))))\n"
         "  (:action pick\n"
         "    :parameters (?b ?r ?g)\n"
         "    :precondition (and (ball ?b) (room ?r) (gripper ?g)\n"
         "                       (at ?b ?r) (at-robby ?r) (free ?g))\n"
         "    :effect (and (carry ?b ?g) (not (at ?b ?r)) (not (free ?g))))\n"
         "  (:action drop\n"
         "    :parameters (?b ?r ?g)\n"
         "    :precondition (and (ball ?b) (room ?r) (gripper ?g)\n"
         "                       (carry ?b ?g) (at-robby ?r))\n"
         "    :effect (and (at ?b ?r) (free ?g) (not (carry ?b ?g)))))\n";
    std::ostringstream p;
    p << "(define (problem gripper-" << n << ")\n  (:domain gripper)\n"
      << "  (:objects roomA roomB left right";
    for (int i = 1; i <= n; ++i)
        p << " b" << i;
    p << ")\n  (:init (room roomA) (room roomB) (gripper left) (gripper right)\n"
         "         (free left) (free right) (at-robby roomA)";
    for (int i = 1; i <= n; ++i)
        p << " (ball b" << i << ")";
    for (int i = 1; i <= n; ++i)
        p << " (at b" << i << " roomA)";
    p << ")\n  (:goal (and";
    for (int i = 1; i <= n; ++i)
        p << " (at b" << i << " roomB)";
    p << ")))\n";
    return {"gripper", "gripper-" + std::to_string(n), d.str(), p.str()};
}

Instance ferry(int n) {
    std::ostringstream d;
    d << "(define (domain ferry)\n"
         "  (:requirements :strips)\n"
         "  (:predicates (car ?c) (place ?p) (at-ferry ?p) (at ?c ?p)\n"
         "               (on ?c) (empty-ferry))\n"
         "  (:action board\n"
         "    :parameters (?c ?p)\n"
         "    :precondition (and (car ?c) (place ?p) (at ?c ?p)\n"
         "                       (at-ferry ?p) (empty-ferry))\n"
         "    :effect (and (on ?c) (not (at ?c ?p)) (not (empty-ferry))))\n"
         "  (:action sail\n"
         "    :parameters (?from ?to)\n"
         "    :precondition (and (place ?from) (place ?to) (at-ferry ?from))\n"
         "    :effect (and (at-ferry ?to) (not (at-ferry ?from))))\n"
         "  (:action debark\n"
         "    :parameters (?c ?p)\n"
         "    :precondition (and (car ?c) (place ?p) (on ?c) (at-ferry ?p))\n"
         "    :effect (and (at ?c ?p) (empty-ferry) (not (on ?c)))))\n";
    std::ostringstream p;
    p << "(define (problem ferry-" << n << ")\n  (:domain ferry)\n"
      << "  (:objects shoreA shoreB";
    for (int i = 1; i <= n; ++i)
        p << " c" << i;
    p << ")\n  (:init (place shoreA) (place shoreB) (at-ferry shoreA) "
         "(empty-ferry)";
    for (int i = 1; i <= n; ++i)
        p << " (car c" << i << ")";
    for (int i = 1; i <= n; ++i)
        p << " (at c" << i << " shoreA)";
    p << ")\n  (:goal (and";
    for (int i = 1; i <= n; ++i)
        p << " (at c" << i << " shoreB)";
    p << ")))\n";
    return {"ferry", "ferry-" + std::to_string(n), d.str(), p.str()};
}

Instance hanoi(int n) {
    std::ostringstream d;
    d << "(define (domain hanoi)\n"
         "  (:requirements :strips)\n"
         "  (:predicates (smaller ?x ?y) (on ?d ?x) (clear ?x))\n"
         "  (:action move\n"
         "    :parameters (?d ?from ?to)\n"
         "    :precondition (and (smaller ?d ?to) (on ?d ?from)\n"
         "                       (clear ?d) (clear ?to))\n"
         "    :effect (and (on ?d ?to) (clear ?from)\n"
         "                 (not (on ?d ?from)) (not (clear ?to)))))\n";
    // Discs d1 (smallest) .. dn; every disc is smaller than every peg.
    std::ostringstream p;
    p << "(define (problem hanoi-" << n << ")\n  (:domain hanoi)\n"
      << "  (:objects p1 p2 p3";
    for (int i = 1; i <= n; ++i)
        p << " d" << i;
    p << ")\n  (:init";
    for (int i = 1; i <= n; ++i)
        for (int peg = 1; peg <= 3; ++peg)
            p << " (smaller d" << i << " p" << peg << ")";
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            p << " (smaller d" << i << " d" << j << ")";
    // Tower on p1: dn at the bottom, d1 on top.
    p << " (clear p2) (clear p3) (clear d1)";
    for (int i = 1; i < n; ++i)
        p << " (on d" << i << " d" << i + 1 << ")";
    p << " (on d" << n << " p1)";
    p << ")\n  (:goal (and";
    for (int i = 1; i < n; ++i)
        p << " (on d" << i << " d" << i + 1 << ")";
    p << " (on d" << n << " p3)";
    p << ")))\n";
    return {"hanoi", "hanoi-" + std::to_string(n), d.str(), p.str()};
}

Instance tsp(int n) {
    std::ostringstream d;
    d << "(define (domain tsp)\n"
         "  (:requirements :strips)\n"
         "  (:predicates (at ?c) (visited ?c))\n"
         "  (:action travel\n"
         "    :parameters (?from ?to)\n"
         "    :precondition (and (at ?from))\n"
         "    :effect (and (at ?to) (visited ?to) (not (at ?from)))))\n";
    std::ostringstream p;
    p << "(define (problem tsp-" << n << ")\n  (:domain tsp)\n  (:objects";
    for (int i = 1; i <= n; ++i)
        p << " c" << i;
    p << ")\n  (:init (at c1) (visited c1))\n  (:goal (and (at c1)";
    for (int i = 1; i <= n; ++i)
        p << " (visited c" << i << ")";
    p << ")))\n";
    return {"tsp", "tsp-" + std::to_string(n), d.str(), p.str()};
}

Instance logistics(int n) {
    std::ostringstream d;
    d << "(define (domain logistics)\n"
         "  (:requirements :strips)\n"
         "  (:predicates (truck ?t) (city ?c) (package ?p) (road ?a ?b)\n"
         "               (tat ?t ?c) (at ?p ?c) (in ?p ?t))\n"
         "  (:action drive\n"
         "    :parameters (?t ?from ?to)\n"
         "    :precondition (and (truck ?t) (city ?from) (city ?to)\n"
         "                       (road ?from ?to) (tat ?t ?from))\n"
         "    :effect (and (tat ?t ?to) (not (tat ?t ?from))))\n"
         "  (:action load\n"
         "    :parameters (?p ?t ?c)\n"
         "    :precondition (and (package ?p) (truck ?t) (city ?c)\n"
         "                       (at ?p ?c) (tat ?t ?c))\n"
         "    :effect (and (in ?p ?t) (not (at ?p ?c))))\n"
         "  (:action unload\n"
         "    :parameters (?p ?t ?c)\n"
         "    :precondition (and (package ?p) (truck ?t) (city ?c)\n"
         "                       (in ?p ?t) (tat ?t ?c))\n"
         "    :effect (and (at ?p ?c) (not (in ?p ?t)))))\n";
    std::ostringstream p;
    p << "(define (problem logistics-" << n << ")\n  (:domain logistics)\n"
      << "  (:objects t1 city1 city2 city3";
    for (int i = 1; i <= n; ++i)
        p << " p" << i;
    p << ")\n  (:init (truck t1) (city city1) (city city2) "
         "(city city3)\n         (road city1 city2) (road city2 city1) "
         "(road city2 city3) (road city3 city2)\n         (tat t1 city3)";
    for (int i = 1; i <= n; ++i)
        p << " (package p" << i << ")";
    for (int i = 1; i <= n; ++i)
        p << " (at p" << i << " city" << (i - 1) % 3 + 1 << ")";
    p << ")\n  (:goal (and";
    for (int i = 1; i <= n; ++i)
        p << " (at p" << i << " city" << i % 3 + 1 << ")";
    p << ")))\n";
    return {"logistics", "logistics-" + std::to_string(n), d.str(), p.str()};
}

// The ten-variable running example. Mutexes between the level k-1 actions
// are induced by token preconditions: one action of each pair deletes the
// other's token, giving exactly {A5,A9}, {A6,A8}, {A7,A11} and nothing else.
Instance fig1() {
    std::string d =
        "(define (domain fig1)\n"
        "  (:requirements :strips)\n"
        "  (:predicates (G1) (G2) (G3) (G4)\n"
        "               (P1) (P2) (P3) (P4) (P5) (P6)\n"
        "               (q5) (q6) (q7) (q8) (q9) (q10) (q11))\n"
        "  (:action A5\n"
        "    :parameters ()\n"
        "    :precondition (and (q5))\n"
        "    :effect (and (P1) (not (q9))))\n"
        "  (:action A6\n"
        "    :parameters ()\n"
        "    :precondition (and (q6))\n"
        "    :effect (and (P2) (not (q8))))\n"
        "  (:action A7\n"
        "    :parameters ()\n"
        "    :precondition (and (q7))\n"
        "    :effect (and (P3) (not (q11))))\n"
        "  (:action A8\n"
        "    :parameters ()\n"
        "    :precondition (and (q8))\n"
        "    :effect (and (P4)))\n"
        "  (:action A9\n"
        "    :parameters ()\n"
        "    :precondition (and (q9))\n"
        "    :effect (and (P4)))\n"
        "  (:action A10\n"
        "    :parameters ()\n"
        "    :precondition (and (q10))\n"
        "    :effect (and (P5) (P6)))\n"
        "  (:action A11\n"
        "    :parameters ()\n"
        "    :precondition (and (q11))\n"
        "    :effect (and (P2)))\n"
        "  (:action A1\n"
        "    :parameters ()\n"
        "    :precondition (and (P1) (P2) (P3))\n"
        "    :effect (and (G1)))\n"
        "  (:action A2\n"
        "    :parameters ()\n"
        "    :precondition (and (P4))\n"
        "    :effect (and (G2)))\n"
        "  (:action A3\n"
        "    :parameters ()\n"
        "    :precondition (and (P5))\n"
        "    :effect (and (G3)))\n"
        "  (:action A4\n"
        "    :parameters ()\n"
        "    :precondition (and (P1) (P6))\n"
        "    :effect (and (G4))))\n";
    std::string p =
        "(define (problem fig1)\n"
        "  (:domain fig1)\n"
        "  (:objects)\n"
        "  (:init (q5) (q6) (q7) (q8) (q9) (q10) (q11))\n"
        "  (:goal (and (G1) (G2) (G3) (G4))))\n";
    return {"fig1", "fig1", d, p};
}

} // namespace

Instance generate_instance(const std::string &family, int n) {
    if (family == "fig1")
        return fig1();
    if (n < 1)
        throw std::invalid_argument("instance size must be at least 1");
    if (family == "gripper")
        return gripper(n);
    if (family == "ferry")
        return ferry(n);
    if (family == "hanoi")
        return hanoi(n);
    if (family == "tsp")
        return tsp(n);
    if (family == "logistics")
        return logistics(n);
    throw std::invalid_argument("unknown instance family '" + family + "'");
}

std::vector<std::string> instance_families() {
    return {"gripper", "ferry", "hanoi", "tsp", "logistics", "fig1"};
}

} // namespace gp::model

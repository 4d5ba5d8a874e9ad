#include "gp/model.h"

#include "gp/util.h"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>

namespace gp::model {

namespace {

std::string lowered(std::string s) {
    for (char &c : s)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

/*
  S-expression layer. Tokens carry positions so every error can point at the
  offending line/column. Only ';' line comments are recognized.
*/

struct Token {
    enum Kind { lparen, rparen, symbol, end } kind;
    std::string text;
    int line;
    int column;
};

class Lexer {
public:
    explicit Lexer(const std::string &text) : text_(text) {}

    Token next() {
        skip_space();
        if (pos_ >= text_.size())
            return {Token::end, "", line_, column_};
        int line = line_;
        int column = column_;
        char c = text_[pos_];
        if (c == '(') {
            advance();
            return {Token::lparen, "(", line, column};
        }
        if (c == ')') {
            advance();
            return {Token::rparen, ")", line, column};
        }
        std::string sym;
        while (pos_ < text_.size()) {
            char d = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(d)) || d == '(' ||
                d == ')' || d == ';')
                break;
            sym.push_back(d);
            advance();
        }
        return {Token::symbol, sym, line, column};
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n')
                    advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    const std::string &text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

struct Sexp {
    // Leaf when children is empty and atom set; list otherwise.
    std::string atom;
    std::vector<Sexp> children;
    bool is_atom = false;
    int line = 0;
    int column = 0;

    [[noreturn]] void fail(const std::string &message) const {
        throw ParseError(line, column, message);
    }
};

class Reader {
public:
    explicit Reader(const std::string &text) : lexer_(text) { bump(); }

    Sexp read() {
        Sexp e = read_expr();
        if (tok_.kind != Token::end)
            throw ParseError(tok_.line, tok_.column, "trailing content");
        return e;
    }

private:
    Sexp read_expr() {
        if (tok_.kind == Token::end)
            throw ParseError(tok_.line, tok_.column, "unexpected end of input");
        if (tok_.kind == Token::rparen)
            throw ParseError(tok_.line, tok_.column, "unexpected ')'");
        if (tok_.kind == Token::symbol) {
            Sexp e{tok_.text, {}, true, tok_.line, tok_.column};
            bump();
            return e;
        }
        Sexp list{"", {}, false, tok_.line, tok_.column};
        bump(); // past '('
        while (tok_.kind != Token::rparen) {
            if (tok_.kind == Token::end)
                throw ParseError(list.line, list.column, "unbalanced '('");
            list.children.push_back(read_expr());
        }
        bump(); // past ')'
        return list;
    }

    void bump() { tok_ = lexer_.next(); }

    Lexer lexer_;
    Token tok_;
};

bool head_is(const Sexp &e, const std::string &kw) {
    return !e.is_atom && !e.children.empty() && e.children[0].is_atom &&
           lowered(e.children[0].atom) == kw;
}

Atom parse_atom(const Sexp &e) {
    if (e.is_atom || e.children.empty() || !e.children[0].is_atom)
        e.fail("expected an atom '(pred args...)'");
    Atom a;
    a.pred = e.children[0].atom;
    for (std::size_t i = 1; i < e.children.size(); ++i) {
        if (!e.children[i].is_atom)
            e.children[i].fail("atom arguments must be symbols");
        a.args.push_back(e.children[i].atom);
    }
    return a;
}

// Accepts ATOM, (not ATOM) where negation is allowed, and (and ...) of those.
void parse_condition(const Sexp &e, bool allow_not, std::vector<Atom> *pos,
                     std::vector<Atom> *neg) {
    if (head_is(e, "and")) {
        for (std::size_t i = 1; i < e.children.size(); ++i)
            parse_condition(e.children[i], allow_not, pos, neg);
        return;
    }
    if (head_is(e, "not")) {
        if (!allow_not)
            e.fail("negation is only supported in effects");
        if (e.children.size() != 2)
            e.fail("'not' takes exactly one atom");
        neg->push_back(parse_atom(e.children[1]));
        return;
    }
    pos->push_back(parse_atom(e));
}

class SchemaChecker {
public:
    explicit SchemaChecker(const Domain &domain) {
        for (const PredicateDecl &p : domain.predicates)
            arity_[p.name] = p.arity;
    }

    void check(const Atom &atom, const Sexp &site) const {
        auto it = arity_.find(atom.pred);
        if (it == arity_.end())
            site.fail("undeclared predicate '" + atom.pred + "'");
        if (it->second != static_cast<int>(atom.args.size()))
            site.fail("predicate '" + atom.pred + "' expects " +
                      std::to_string(it->second) + " arguments, got " +
                      std::to_string(atom.args.size()));
    }

private:
    std::unordered_map<std::string, int> arity_;
};

bool is_variable(const std::string &arg) {
    return !arg.empty() && arg[0] == '?';
}

} // namespace

PropId Problem::intern(const std::string &name) {
    auto [it, inserted] =
        prop_ids_.emplace(name, static_cast<PropId>(prop_names_.size()));
    if (inserted)
        prop_names_.push_back(name);
    return it->second;
}

PropId Problem::find(const std::string &name) const {
    auto it = prop_ids_.find(name);
    return it == prop_ids_.end() ? -1 : it->second;
}

Domain parse_domain(const std::string &text) {
    Sexp root = Reader(text).read();
    if (!head_is(root, "define"))
        root.fail("expected '(define (domain ...) ...)'");
    Domain domain;
    bool saw_name = false;
    for (std::size_t i = 1; i < root.children.size(); ++i) {
        const Sexp &sec = root.children[i];
        if (head_is(sec, "domain")) {
            if (sec.children.size() != 2 || !sec.children[1].is_atom)
                sec.fail("expected '(domain NAME)'");
            domain.name = sec.children[1].atom;
            saw_name = true;
        } else if (head_is(sec, ":requirements")) {
            for (std::size_t j = 1; j < sec.children.size(); ++j) {
                const Sexp &req = sec.children[j];
                if (!req.is_atom || lowered(req.atom) != ":strips")
                    req.fail("unsupported requirement '" +
                             (req.is_atom ? req.atom : std::string("(...)")) +
                             "' (only :strips)");
            }
        } else if (head_is(sec, ":predicates")) {
            for (std::size_t j = 1; j < sec.children.size(); ++j) {
                Atom a = parse_atom(sec.children[j]);
                for (const std::string &arg : a.args)
                    if (!is_variable(arg))
                        sec.children[j].fail(
                            "predicate declarations take variables only");
                domain.predicates.push_back(
                    {a.pred, static_cast<int>(a.args.size())});
            }
        } else if (head_is(sec, ":action")) {
            if (sec.children.size() < 2 || !sec.children[1].is_atom)
                sec.fail("expected '(:action NAME ...)'");
            ActionSchema schema;
            schema.name = sec.children[1].atom;
            std::optional<Sexp> precondition;
            std::optional<Sexp> effect;
            std::size_t j = 2;
            while (j < sec.children.size()) {
                const Sexp &key = sec.children[j];
                if (!key.is_atom)
                    key.fail("expected :parameters/:precondition/:effect");
                std::string kw = lowered(key.atom);
                if (j + 1 >= sec.children.size())
                    key.fail("missing value after " + key.atom);
                const Sexp &value = sec.children[j + 1];
                if (kw == ":parameters") {
                    if (value.is_atom)
                        value.fail("expected a parameter list");
                    for (const Sexp &p : value.children) {
                        if (!p.is_atom || !is_variable(p.atom))
                            p.fail("parameters must be '?name' variables");
                        schema.params.push_back(p.atom.substr(1));
                    }
                } else if (kw == ":precondition") {
                    precondition = value;
                } else if (kw == ":effect") {
                    effect = value;
                } else {
                    key.fail("unknown action keyword '" + key.atom + "'");
                }
                j += 2;
            }
            if (precondition) {
                std::vector<Atom> neg;
                parse_condition(*precondition, false, &schema.pre, &neg);
            }
            if (effect) {
                parse_condition(*effect, true, &schema.add, &schema.del);
            }
            for (const ActionSchema &other : domain.schemas)
                if (other.name == schema.name)
                    sec.fail("duplicate action name '" + schema.name + "'");
            domain.schemas.push_back(std::move(schema));
        } else {
            sec.fail("unknown domain section");
        }
    }
    if (!saw_name)
        root.fail("missing '(domain NAME)'");

    SchemaChecker checker(domain);
    auto check_all = [&](const std::vector<Atom> &atoms,
                         const ActionSchema &schema, const char *what) {
        for (const Atom &a : atoms) {
            checker.check(a, root);
            for (const std::string &arg : a.args) {
                if (is_variable(arg) &&
                    std::find(schema.params.begin(), schema.params.end(),
                              arg.substr(1)) == schema.params.end())
                    throw ParseError(root.line, root.column,
                                     "unbound variable '" + arg + "' in " +
                                         what + " of action '" + schema.name +
                                         "'");
            }
        }
    };
    for (const ActionSchema &schema : domain.schemas) {
        check_all(schema.pre, schema, "precondition");
        check_all(schema.add, schema, "effect");
        check_all(schema.del, schema, "effect");
    }
    return domain;
}

ProblemAst parse_problem(const std::string &text, const Domain &domain) {
    Sexp root = Reader(text).read();
    if (!head_is(root, "define"))
        root.fail("expected '(define (problem ...) ...)'");
    ProblemAst problem;
    SchemaChecker checker(domain);

    auto check_ground = [&](const Atom &a, const Sexp &site) {
        checker.check(a, site);
        for (const std::string &arg : a.args)
            if (is_variable(arg))
                site.fail("problem atoms must be ground");
    };

    for (std::size_t i = 1; i < root.children.size(); ++i) {
        const Sexp &sec = root.children[i];
        if (head_is(sec, "problem")) {
            if (sec.children.size() != 2 || !sec.children[1].is_atom)
                sec.fail("expected '(problem NAME)'");
            problem.name = sec.children[1].atom;
        } else if (head_is(sec, ":domain")) {
            if (sec.children.size() != 2 || !sec.children[1].is_atom)
                sec.fail("expected '(:domain NAME)'");
            problem.domain_name = sec.children[1].atom;
        } else if (head_is(sec, ":objects")) {
            for (std::size_t j = 1; j < sec.children.size(); ++j) {
                if (!sec.children[j].is_atom)
                    sec.children[j].fail("objects must be symbols");
                problem.objects.push_back(sec.children[j].atom);
            }
        } else if (head_is(sec, ":init")) {
            for (std::size_t j = 1; j < sec.children.size(); ++j) {
                Atom a = parse_atom(sec.children[j]);
                check_ground(a, sec.children[j]);
                problem.init.push_back(std::move(a));
            }
        } else if (head_is(sec, ":goal")) {
            if (sec.children.size() != 2)
                sec.fail("expected '(:goal CONDITION)'");
            std::vector<Atom> neg;
            parse_condition(sec.children[1], false, &problem.goals, &neg);
            for (const Atom &a : problem.goals)
                check_ground(a, sec.children[1]);
        } else {
            sec.fail("unknown problem section");
        }
    }
    if (problem.domain_name != domain.name)
        throw ParseError(root.line, root.column,
                         "problem requires domain '" + problem.domain_name +
                             "', got '" + domain.name + "'");
    return problem;
}

std::string ground_name(const std::string &head,
                        const std::vector<std::string> &args) {
    if (args.empty())
        return head;
    std::string out = head + "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i)
            out += ",";
        out += args[i];
    }
    out += ")";
    return out;
}

namespace {

void print_atom(std::ostringstream &out, const Atom &a) {
    out << "(" << a.pred;
    for (const std::string &arg : a.args)
        out << " " << arg;
    out << ")";
}

void print_atom_list(std::ostringstream &out, const std::vector<Atom> &pos,
                     const std::vector<Atom> &neg) {
    out << "(and";
    for (const Atom &a : pos) {
        out << " ";
        print_atom(out, a);
    }
    for (const Atom &a : neg) {
        out << " (not ";
        print_atom(out, a);
        out << ")";
    }
    out << ")";
}

} // namespace

std::string to_pddl(const Domain &domain) {
    std::ostringstream out;
    out << "(define (domain " << domain.name << ")\n";
    out << "  (:requirements :strips)\n";
    out << "  (:predicates";
    for (const PredicateDecl &p : domain.predicates) {
        out << " (" << p.name;
        for (int i = 0; i < p.arity; ++i)
            out << " ?x" << i;
        out << ")";
    }
    out << ")\n";
    for (const ActionSchema &schema : domain.schemas) {
        out << "  (:action " << schema.name << "\n    :parameters (";
        for (std::size_t i = 0; i < schema.params.size(); ++i) {
            if (i)
                out << " ";
            out << "?" << schema.params[i];
        }
        out << ")\n    :precondition ";
        print_atom_list(out, schema.pre, {});
        out << "\n    :effect ";
        print_atom_list(out, schema.add, schema.del);
        out << ")\n";
    }
    out << ")\n";
    return out.str();
}

std::string to_pddl(const ProblemAst &problem) {
    std::ostringstream out;
    out << "(define (problem " << problem.name << ")\n";
    out << "  (:domain " << problem.domain_name << ")\n";
    out << "  (:objects";
    for (const std::string &o : problem.objects)
        out << " " << o;
    out << ")\n  (:init";
    for (const Atom &a : problem.init) {
        out << " ";
        print_atom(out, a);
    }
    out << ")\n  (:goal ";
    print_atom_list(out, problem.goals, {});
    out << "))\n";
    return out.str();
}

Problem ground(const Domain &domain, const ProblemAst &ast) {
    if (ast.domain_name != domain.name)
        throw std::invalid_argument("problem '" + ast.name +
                                    "' does not match domain '" + domain.name +
                                    "'");
    Problem problem;

    auto ground_atom = [&](const Atom &atom,
                           const std::unordered_map<std::string, std::string>
                               &binding) -> std::string {
        std::vector<std::string> args;
        args.reserve(atom.args.size());
        for (const std::string &arg : atom.args) {
            if (is_variable(arg)) {
                args.push_back(binding.at(arg.substr(1)));
            } else {
                if (std::find(ast.objects.begin(), ast.objects.end(), arg) ==
                    ast.objects.end())
                    throw std::invalid_argument("undeclared object '" + arg +
                                                "' in action atoms");
                args.push_back(arg);
            }
        }
        return ground_name(atom.pred, args);
    };

    for (const Atom &a : ast.init) {
        for (const std::string &arg : a.args)
            if (std::find(ast.objects.begin(), ast.objects.end(), arg) ==
                ast.objects.end())
                throw std::invalid_argument("undeclared object '" + arg +
                                            "' in init");
        util::sorted_insert(problem.init,
                            problem.intern(ground_name(a.pred, a.args)));
    }
    for (const Atom &a : ast.goals) {
        for (const std::string &arg : a.args)
            if (std::find(ast.objects.begin(), ast.objects.end(), arg) ==
                ast.objects.end())
                throw std::invalid_argument("undeclared object '" + arg +
                                            "' in goal");
        PropId id = problem.intern(ground_name(a.pred, a.args));
        if (std::find(problem.goals.begin(), problem.goals.end(), id) ==
            problem.goals.end())
            problem.goals.push_back(id);
    }

    for (const ActionSchema &schema : domain.schemas) {
        std::size_t arity = schema.params.size();
        if (arity > 0 && ast.objects.empty())
            continue;
        std::vector<std::size_t> tuple(arity, 0);
        bool done = false;
        while (!done) {
            std::unordered_map<std::string, std::string> binding;
            std::vector<std::string> args;
            for (std::size_t i = 0; i < arity; ++i) {
                binding[schema.params[i]] = ast.objects[tuple[i]];
                args.push_back(ast.objects[tuple[i]]);
            }
            GroundAction action;
            action.name = ground_name(schema.name, args);
            for (const Atom &a : schema.pre)
                util::sorted_insert(action.pre,
                                    problem.intern(ground_atom(a, binding)));
            for (const Atom &a : schema.add)
                util::sorted_insert(action.add,
                                    problem.intern(ground_atom(a, binding)));
            for (const Atom &a : schema.del)
                util::sorted_insert(action.del,
                                    problem.intern(ground_atom(a, binding)));
            if (!util::sorted_intersects(action.add, action.del))
                problem.actions.push_back(std::move(action));

            // Advance to the next lexicographic tuple (odometer); a
            // zero-arity schema yields exactly one instance.
            done = true;
            for (std::size_t pos = arity; pos > 0;) {
                --pos;
                if (++tuple[pos] < ast.objects.size()) {
                    done = false;
                    break;
                }
                tuple[pos] = 0;
            }
        }
    }
    return problem;
}

} // namespace gp::model

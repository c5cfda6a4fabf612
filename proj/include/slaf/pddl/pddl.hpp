#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slaf/model/strips.hpp"

namespace slaf::pddl {

// S-expression node. Symbols are upper-cased when read.
struct Sexp {
    bool is_atom = false;
    std::string text;
    std::vector<Sexp> items;
    int line = 0;
    int col = 0;
};

std::vector<Sexp> read_sexps(const std::string& text);

struct TypedName {
    std::string name;
    std::string type;
    bool operator==(const TypedName&) const = default;
};

struct Literal {
    bool positive = true;
    std::string pred;
    std::vector<std::string> args;  // ?VARS in schemas, objects in problems
    bool operator==(const Literal&) const = default;
};

struct Predicate {
    std::string name;
    std::vector<TypedName> params;
    bool operator==(const Predicate&) const = default;
};

struct ActionSchema {
    std::string name;
    std::vector<TypedName> params;
    std::vector<Literal> pre;
    std::vector<Literal> eff;
    bool operator==(const ActionSchema&) const = default;
};

struct DomainSchema {
    std::string name;
    std::vector<std::string> requirements;
    std::vector<TypedName> types;  // (type, parent); OBJECT is implicit
    std::vector<Predicate> predicates;
    std::vector<ActionSchema> actions;

    bool is_subtype(const std::string& t, const std::string& ancestor) const;
    bool has_type(const std::string& t) const;
    std::size_t predicate_index(const std::string& name) const;  // SIZE_MAX if absent
    std::size_t action_index(const std::string& name) const;
    bool operator==(const DomainSchema&) const = default;
};

struct ProblemInstance {
    std::string name;
    std::string domain;
    std::vector<TypedName> objects;
    std::vector<Literal> init;  // positive ground atoms
    bool operator==(const ProblemInstance&) const = default;
};

DomainSchema parse_domain(const std::string& text);
ProblemInstance parse_problem(const std::string& text, const DomainSchema& d);

std::string print_domain(const DomainSchema& d);
std::string print_problem(const ProblemInstance& p);

// A schema fluent pattern: predicate instantiated with action parameters.
struct Pattern {
    std::uint32_t pred = 0;
    std::vector<std::uint32_t> params;  // indices into the action's parameters
    auto operator<=>(const Pattern&) const = default;
};

// Ground-to-schema correspondence. Patterns per action schema are exactly
// those some ground (action, fluent) pair instantiates.
class SchemaMap {
public:
    SchemaMap() = default;
    SchemaMap(const DomainSchema& d, const GroundDomain& g);

    std::size_t num_schemas() const { return patterns_.size(); }
    const std::vector<Pattern>& patterns(std::size_t schema) const { return patterns_[schema]; }
    std::size_t pattern_index(std::size_t schema, const Pattern& p) const;  // SIZE_MAX if absent
    std::size_t schema_of(std::size_t action) const { return g_->action_refs[action].schema; }

    // "(STACK ?OB ?UNDEROB)" and "(ON ?OB ?UNDEROB)".
    std::string action_head(std::size_t schema) const;
    std::string pattern_name(std::size_t schema, std::size_t pattern) const;
    const std::string& schema_name(std::size_t schema) const { return d_->actions[schema].name; }

    // Patterns of a's schema whose instantiation with a's arguments is f.
    // Several when a repeats an object. Throws OffParameterFluent when some
    // argument of f is not an argument of a.
    std::vector<std::size_t> matches(std::size_t action, std::size_t fluent) const;
    bool in_scope(std::size_t action, std::size_t fluent) const;

    // Ground (action, fluent) pairs that instantiate a pattern.
    std::vector<std::pair<std::size_t, std::size_t>> instances(std::size_t schema, std::size_t pattern) const;

    const DomainSchema& domain() const { return *d_; }
    const GroundDomain& ground() const { return *g_; }

private:
    const DomainSchema* d_ = nullptr;
    const GroundDomain* g_ = nullptr;
    std::vector<std::vector<Pattern>> patterns_;
    std::vector<std::vector<std::size_t>> fluents_by_pred_;
};

struct Grounding {
    GroundDomain domain;
    State init;
    std::vector<std::string> objects;
};

// Every well-typed predicate and action instantiation, in declaration order
// with object tuples in lexicographic order of the problem's object list.
Grounding ground(const DomainSchema& d, const ProblemInstance& p);

// Hidden STRIPS model of the ground actions; an atom both added and deleted
// is added.
StripsActionModel ground_model(const DomainSchema& d, const Grounding& g);

// Number of ground actions each schema would produce (product of typed
// object counts), for checking the grounding.
std::size_t expected_actions(const DomainSchema& d, const ProblemInstance& p, std::size_t schema);

// Effect rows the generating domain implies for every pattern of a schema:
// "(STACK CAUSES (ON ?OB ?UNDEROB))", "(STACK KEEPS (ON ?OB ?OB))", ...
std::vector<std::string> golden_effect_rows(const SchemaMap& m);

}  // namespace slaf::pddl

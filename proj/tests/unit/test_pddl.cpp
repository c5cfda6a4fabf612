#include <random>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "slaf/errors.hpp"
#include "slaf/pddl/pddl.hpp"

using namespace slaf;
using namespace slaf::pddl;

namespace {

struct Loaded {
    DomainSchema d;
    ProblemInstance p;
    Grounding g;
};

Loaded load(const std::string& name) {
    Loaded l;
    l.d = parse_domain(read_fixture(name + "/domain.pddl"));
    l.p = parse_problem(read_fixture(name + "/problem.pddl"), l.d);
    l.g = ground(l.d, l.p);
    return l;
}

}  // namespace

TEST_CASE("sexp reader upper-cases and tracks positions") {
    const auto xs = read_sexps("; comment\n(a (b c)\n  d)");
    REQUIRE(xs.size() == 1);
    CHECK(xs[0].items[0].text == "A");
    CHECK(xs[0].items[1].items[1].text == "C");
    CHECK(xs[0].items[2].line == 3);
    CHECK_THROWS_AS(read_sexps("(a (b)"), ParseError);
    CHECK_THROWS_AS(read_sexps("a)"), ParseError);
}

TEST_CASE("fixture domains parse with the expected schema counts") {
    const auto bw = parse_domain(read_fixture("blocksworld/domain.pddl"));
    CHECK(bw.actions.size() == 4);
    CHECK(bw.predicates.size() == 5);
    const auto dl = parse_domain(read_fixture("driverlog/domain.pddl"));
    CHECK(dl.actions.size() == 6);
    const auto& drive = dl.actions[dl.action_index("DRIVE-TRUCK")];
    CHECK(drive.params.size() == 4);
    CHECK(drive.params[1].name == "?LOC-FROM");
    CHECK(dl.is_subtype("TRUCK", "LOCATABLE"));
    CHECK_FALSE(dl.is_subtype("LOCATION", "LOCATABLE"));
    CHECK(parse_domain("(define (domain empty) (:predicates (p)))").actions.empty());
}

TEST_CASE("unsupported constructs and unknown types are rejected") {
    CHECK_THROWS_AS(parse_domain("(define (domain z) (:types a b - object)"
                                 " (:predicates (at ?x - (either a b))))"),
                    ParseError);
    try {
        parse_domain("(define (domain z) (:predicates (p ?x)) (:action a :parameters (?x)"
                     " :precondition (or (p ?x) (p ?x)) :effect (p ?x)))");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("OR") != std::string::npos);
        CHECK(e.line == 1);
    }
    CHECK_THROWS_AS(parse_domain("(define (domain z) (:predicates (p ?x - widget)))"), TypeError);
    CHECK_THROWS_AS(parse_domain("(define (domain z) (:predicates (p ?x))"
                                 " (:action a :parameters (?x) :precondition (and) :effect (q ?x)))"),
                    ParseError);
    CHECK_THROWS_AS(parse_domain("(define (domain z) (:predicates (p ?x))"
                                 " (:action a :parameters (?x) :precondition (and) :effect (p ?y)))"),
                    ParseError);
    CHECK_THROWS_AS(parse_domain("(define (domain z) (:predicates (p ?x))"
                                 " (:action a :parameters (?x) :effect (and (p ?x) (not (p ?x)))))"),
                    ParseError);
    CHECK_THROWS_AS(parse_domain("(define (domain z) (:requirements :adl))"), ParseError);
}

TEST_CASE("printing and re-parsing is the identity") {
    for (const char* name : {"blocksworld", "driverlog", "zenotravel", "depots"}) {
        const auto l = load(name);
        CHECK(parse_domain(print_domain(l.d)) == l.d);
        CHECK(parse_problem(print_problem(l.p), l.d) == l.p);
        CHECK(print_domain(parse_domain(print_domain(l.d))) == print_domain(l.d));
    }
}

TEST_CASE("grounding one block") {
    const auto d = parse_domain(read_fixture("blocksworld/domain.pddl"));
    const auto p = parse_problem("(define (problem one) (:domain blocksworld) (:objects A)"
                                 " (:init (clear A) (on-table A) (arm-empty)))",
                                 d);
    const auto g = ground(d, p);
    CHECK(g.domain.fluents ==
          std::vector<std::string>{"(CLEAR A)", "(ON-TABLE A)", "(ARM-EMPTY)", "(HOLDING A)", "(ON A A)"});
    CHECK(g.domain.actions ==
          std::vector<std::string>{"(PICKUP A)", "(PUTDOWN A)", "(STACK A A)", "(UNSTACK A A)"});
    CHECK(g.init == State{true, true, true, false, false});
}

TEST_CASE("fixture fluent counts and the grounding count law") {
    const std::pair<const char*, std::size_t> expected[] = {
        {"driverlog", 231}, {"zenotravel", 91}, {"blocksworld", 209}, {"depots", 250}};
    for (auto [name, n] : expected) {
        const auto l = load(name);
        CHECK(l.g.domain.num_fluents() == n);
        std::size_t total = 0;
        for (std::size_t s = 0; s < l.d.actions.size(); ++s) total += expected_actions(l.d, l.p, s);
        CHECK(l.g.domain.num_actions() == total);
    }
    CHECK(load("zenotravel").g.domain.num_actions() == 20808);
}

TEST_CASE("schema matches") {
    const auto l = load("blocksworld");
    const SchemaMap m(l.d, l.g.domain);
    const auto& gd = l.g.domain;
    const std::size_t stack_eg = *gd.action_index("(STACK E G)");
    auto names = [&](std::size_t a, std::size_t f) {
        std::set<std::string> out;
        for (std::size_t i : m.matches(a, f)) out.insert(m.pattern_name(m.schema_of(a), i));
        return out;
    };
    CHECK(names(stack_eg, *gd.fluent_index("(ON E G)")) == std::set<std::string>{"(ON ?OB ?UNDEROB)"});
    CHECK(m.action_head(m.schema_of(stack_eg)) == "(STACK ?OB ?UNDEROB)");
    const std::size_t stack_aa = *gd.action_index("(STACK A A)");
    CHECK(names(stack_aa, *gd.fluent_index("(ON A A)")) ==
          std::set<std::string>{"(ON ?OB ?OB)", "(ON ?OB ?UNDEROB)", "(ON ?UNDEROB ?OB)", "(ON ?UNDEROB ?UNDEROB)"});
    const std::size_t pick = *gd.action_index("(PICKUP A)");
    CHECK(names(pick, *gd.fluent_index("(ARM-EMPTY)")) == std::set<std::string>{"(ARM-EMPTY)"});
    CHECK_THROWS_AS(m.matches(pick, *gd.fluent_index("(CLEAR B)")), OffParameterFluent);
    // Every pattern's instances reproduce the pattern under substitution.
    for (std::size_t s = 0; s < m.num_schemas(); ++s)
        for (std::size_t i = 0; i < m.patterns(s).size(); ++i)
            for (auto [a, f] : m.instances(s, i)) {
                const auto ms = m.matches(a, f);
                CHECK(std::find(ms.begin(), ms.end(), i) != ms.end());
            }
    // 5 single-parameter patterns for PICKUP and PUTDOWN, 11 for STACK and UNSTACK.
    CHECK(m.patterns(0).size() == 5);
    CHECK(m.patterns(2).size() == 11);
}

TEST_CASE("golden effect rows follow the generating effects") {
    const auto l = load("blocksworld");
    const SchemaMap m(l.d, l.g.domain);
    const auto rows = golden_effect_rows(m);
    const std::set<std::string> rs(rows.begin(), rows.end());
    CHECK(rs.count("(PICKUP CAUSES (HOLDING ?OB))"));
    CHECK(rs.count("(UNSTACK CAUSES (NOT (CLEAR ?OB)))"));
    CHECK(rs.count("(UNSTACK CAUSES (CLEAR ?UNDEROB))"));
    CHECK(rs.count("(PICKUP KEEPS (ON ?OB ?OB))"));
    CHECK(rows.size() == 32);
    CHECK(rows == std::vector<std::string>(rs.begin(), rs.end()));
}

TEST_CASE("blocksworld random walks keep the arm invariant") {
    const auto l = load("blocksworld");
    const auto m = ground_model(l.d, l.g);
    const auto& gd = l.g.domain;
    std::vector<std::size_t> holding;
    for (std::size_t f = 0; f < gd.num_fluents(); ++f)
        if (gd.fluents[f].rfind("(HOLDING", 0) == 0) holding.push_back(f);
    const std::size_t arm = *gd.fluent_index("(ARM-EMPTY)");
    std::mt19937_64 rng(5);
    State s = l.g.init;
    for (int t = 0; t < 2000; ++t) {
        std::vector<std::size_t> ok;
        for (std::size_t a = 0; a < gd.num_actions(); ++a)
            if (m.executable(s, a)) ok.push_back(a);
        REQUIRE_FALSE(ok.empty());
        apply_in_place(m, s, ok[rng() % ok.size()]);
        std::size_t held = 0;
        for (std::size_t f : holding) held += s[f];
        CHECK((s[arm] ? held == 0 : held == 1));
    }
}

TEST_CASE("depots drive in place keeps the truck where it is") {
    const auto l = load("depots");
    const auto m = ground_model(l.d, l.g);
    const auto& gd = l.g.domain;
    const std::size_t a = *gd.action_index("(DRIVE TRUCK0 DEPOT0 DEPOT0)");
    const std::size_t f = *gd.fluent_index("(AT TRUCK0 DEPOT0)");
    CHECK(m.effect(a, f) == Effect::CausesTrue);
    CHECK(apply(m, l.g.init, a) == std::optional<State>(l.g.init));
}

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "brute.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "instances.hpp"
#include "slaf/engines/slaf0.hpp"
#include "slaf/errors.hpp"
#include "slaf/extract/extract.hpp"
#include "slaf/model/axioms.hpp"
#include "slaf/model/fixtures.hpp"
#include "slaf/sim/simulator.hpp"

using namespace slaf;

namespace {

Cnf random_cnf(std::mt19937_64& rng, std::size_t nv, std::size_t nc, std::size_t width) {
    Cnf f;
    while (f.clauses.size() < nc) {
        std::vector<lit_t> c;
        for (std::size_t i = 0; i < width; ++i) c.push_back(mk_lit(static_cast<atom_t>(rng() % nv), rng() % 2 == 0));
        if (auto made = make_clause(c)) f.add(*made);
    }
    return f;
}

bool load(SatSolver& s, const Cnf& f, std::size_t nv) {
    s.reserve_vars(nv);
    bool ok = true;
    for (const auto& c : f.clauses) ok = s.add_clause(c) && ok;
    return ok;
}

std::vector<atom_t> iota_atoms(std::size_t n) {
    std::vector<atom_t> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<atom_t>(i);
    return v;
}

std::uint64_t mask_of(const SatSolver& s, std::size_t nv) {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < nv; ++i)
        if (s.model_value(static_cast<std::uint32_t>(i))) m |= 1ull << i;
    return m;
}

// AS run over a fixture trace, with the schema table and the schematized belief.
struct SchemaRun {
    std::unique_ptr<World> w;
    Vocabulary v;
    std::unique_ptr<AsEngine> engine;
    std::unique_ptr<pddl::SchemaMap> map;
    PropTable table;
    AsBelief schematized;
    SatInstance inst;
};

std::unique_ptr<SchemaRun> schema_run(const std::string& name, std::size_t steps, std::uint64_t seed, bool bias) {
    auto r = std::make_unique<SchemaRun>();
    r->w = load_world(name);
    r->v = r->w->g.domain.vocabulary();
    sim::TraceConfig cfg;
    cfg.steps = steps;
    cfg.seed = seed;
    const sim::Trace t = sim::generate_trace(r->w->g.domain, r->w->m, r->w->g.init, cfg);
    r->engine = std::make_unique<AsEngine>(r->v, true);
    for (const auto& st : t.steps) r->engine->step(st.action, st.obs);
    r->map = std::make_unique<pddl::SchemaMap>(r->w->d, r->w->g.domain);
    r->table = schema_props(r->v, *r->map);
    Schematizer sz(r->v, *r->map, r->table, OffParamPolicy::AssumeKeeps);
    r->schematized = sz.apply(r->engine->store(), r->engine->belief());
    r->inst = make_instance(r->v, r->table, render_belief(r->engine->store(), r->v, r->schematized), true, bias,
                            sz.side_axioms(true));
    return r;
}

}  // namespace

TEST_CASE("solver agrees with enumeration on random small formulas") {
    std::mt19937_64 rng(5);
    std::size_t sat = 0, unsat = 0;
    for (int rep = 0; rep < 400; ++rep) {
        const std::size_t nv = 4 + rng() % 9;
        const Cnf f = random_cnf(rng, nv, nv * (2 + rng() % 5), 3);
        const auto vocab = iota_atoms(nv);
        const auto ms = brute::models(f, vocab);
        SatSolver s(rng());
        load(s, f, nv);
        const SatResult r = s.solve();
        CHECK((r == SatResult::Sat) == !ms.empty());
        if (r == SatResult::Sat) {
            ++sat;
            CHECK(ms.count(mask_of(s, nv)) == 1);
        } else {
            ++unsat;
        }
        // Assumptions: a conflict is a subset of them and is itself contradictory.
        std::vector<lit_t> as;
        for (int i = 0; i < 3; ++i) as.push_back(mk_lit(static_cast<atom_t>(rng() % nv), rng() % 2 == 0));
        Cnf with = f;
        for (lit_t a : as) with.add({a});
        const bool expect = !brute::models(with, vocab).empty();
        const SatResult ra = s.solve(as);
        REQUIRE(ra != SatResult::Unknown);
        CHECK((ra == SatResult::Sat) == expect);
        if (ra == SatResult::Sat) {
            for (lit_t a : as) CHECK(s.model_value(lit_atom(a)) != lit_negated(a));
        } else if (r == SatResult::Sat) {
            Cnf core = f;
            for (lit_t c : s.conflict()) {
                CHECK(std::find(as.begin(), as.end(), c) != as.end());
                core.add({c});
            }
            CHECK(brute::models(core, vocab).empty());
        }
    }
    CHECK(sat > 50);
    CHECK(unsat > 50);
}

TEST_CASE("solver handles harder instances") {
    // Six pigeons, five holes.
    const std::size_t P = 6, H = 5;
    auto x = [&](std::size_t p, std::size_t h) { return static_cast<atom_t>(p * H + h); };
    Cnf php;
    for (std::size_t p = 0; p < P; ++p) {
        Clause c;
        for (std::size_t h = 0; h < H; ++h) c.push_back(mk_lit(x(p, h)));
        php.add(c);
    }
    for (std::size_t h = 0; h < H; ++h)
        for (std::size_t p = 0; p < P; ++p)
            for (std::size_t q = p + 1; q < P; ++q) php.add({mk_lit(x(p, h), true), mk_lit(x(q, h), true)});
    SatSolver s;
    load(s, php, P * H);
    CHECK(s.solve() == SatResult::Unsat);

    std::mt19937_64 rng(9);
    const std::size_t nv = 200;
    const Cnf f = random_cnf(rng, nv, 780, 3);
    SatSolver t(1);
    load(t, f, nv);
    REQUIRE(t.solve() == SatResult::Sat);
    std::vector<bool> asg(nv);
    for (std::size_t i = 0; i < nv; ++i) asg[i] = t.model_value(static_cast<std::uint32_t>(i));
    CHECK(evaluate(f, asg));
}

TEST_CASE("same seed, same model") {
    std::mt19937_64 rng(2);
    const Cnf f = random_cnf(rng, 60, 150, 3);
    SatSolver a(7), b(7);
    load(a, f, 60);
    load(b, f, 60);
    REQUIRE(a.solve() == SatResult::Sat);
    REQUIRE(b.solve() == SatResult::Sat);
    CHECK(a.model() == b.model());
}

TEST_CASE("external solver contract") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("slaf-ext-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    auto script = [&](const std::string& name, const std::string& body) {
        const fs::path p = dir / name;
        std::ofstream(p) << "#!/bin/sh\n" << body;
        fs::permissions(p, fs::perms::owner_all);
        return p.string();
    };
    const std::vector<Clause> cls{{mk_lit(0)}, {mk_lit(1, true)}};
    const auto ok = solve_external({script("sat.sh", "echo 'c hi'\necho 's SATISFIABLE'\necho 'v 1 -2 0'\nexit 10\n")}, 2, cls);
    CHECK(ok.result == SatResult::Sat);
    CHECK(ok.model == std::vector<std::uint8_t>{1, 0});
    CHECK(solve_external({script("unsat.sh", "echo 's UNSATISFIABLE'\nexit 20\n")}, 2, cls).result == SatResult::Unsat);
    CHECK_THROWS_AS(solve_external({script("crash.sh", "exit 3\n")}, 2, cls), SolverFailure);
    CHECK_THROWS_AS(solve_external({script("slow.sh", "sleep 5\n"), std::chrono::seconds(1)}, 2, cls), SolverFailure);
    // The DIMACS file is passed as the last argument.
    const auto echo = solve_external({script("cat.sh", "grep -q '^p cnf 2 3' \"$1\" && echo 's UNSATISFIABLE'\n")}, 2, cls,
                                     {mk_lit(0, true)});
    CHECK(echo.result == SatResult::Unsat);
    CHECK(format_solution(SatResult::Sat, {1, 0}) == "s SATISFIABLE\nv 1 -2 0\n");
    fs::remove_all(dir);
}

TEST_CASE("belief_to_cnf on trivial and three-key beliefs") {
    const Vocabulary one(std::vector<std::string>{"f"}, std::vector<std::string>{"a"});
    const Cnf t = belief_to_cnf(Cnf::truth(), one);
    CHECK(t.clauses.size() == 5);
    CHECK(t == simplified(vocab_axioms(one)));

    const Vocabulary v = toy::locked_door().vocabulary();
    NnfStore s;
    auto K = [&](int a) { return NnfStore::atom(v.keeps(a, 0)); };
    auto U = [&](int a) { return NnfStore::atom(v.causes(a, 0, false)); };
    const NodeRef phi =
        s.mk_and(NnfStore::atom(v.fluent(0)),
                 s.mk_or({s.mk_and({U(0), K(1), K(2)}), s.mk_and({K(0), U(1), K(2)}), s.mk_and({K(0), K(1), U(2)})}));
    const Cnf c = belief_to_cnf(to_cnf(s, phi), v, false);
    std::vector<atom_t> vocab{v.fluent(0)};
    for (int a = 0; a < 3; ++a)
        for (auto k : {PropKind::CausesPos, PropKind::CausesNeg, PropKind::Keeps}) vocab.push_back(v.prop(a, k, 0));
    std::set<std::uint64_t> expected;
    for (int k = 1; k <= 3; ++k) {
        const auto asg = encode_pair(v, State{true}, toy::locked_door_model(k), false);
        std::uint64_t m = 0;
        for (std::size_t i = 0; i < vocab.size(); ++i)
            if (asg[vocab[i]]) m |= 1ull << i;
        expected.insert(m);
    }
    CHECK(brute::models(c, vocab) == expected);
}

TEST_CASE("locked door: extraction and queries") {
    const Vocabulary v = toy::locked_door().vocabulary();
    AsEngine e(v, true);
    e.observe({fluent_lit(0, true)});
    e.step(0, {fluent_lit(0, false)});
    auto inst = make_instance(v, ground_props(v), render_belief(e.store(), v, e.belief()), true, false);
    const auto r = extract_model(inst);
    REQUIRE(r.model);
    CHECK(r.model->rows[0][0].effect == EffectTag::CausesNeg);
    CHECK(query_prop(inst, mk_lit(v.causes(0, 0, false))) == QueryResult::Entailed);
    CHECK(query_prop(inst, mk_lit(v.keeps(0, 0))) == QueryResult::Refuted);
    CHECK(query_prop(inst, mk_lit(v.keeps(1, 0))) == QueryResult::Unknown);
    std::ostringstream out;
    emit_model(*r.model, out);
    CHECK(out.str().find("(unlock1 CAUSES (NOT locked))\n") != std::string::npos);

    // A contradictory belief yields no model.
    auto bad = make_instance(v, ground_props(v), Cnf::falsity(), true, false);
    CHECK_FALSE(extract_model(bad).model);

    // A fresh belief leaves every effect open.
    auto fresh = make_instance(v, ground_props(v), Cnf::truth(), true, false);
    for (std::size_t a = 0; a < 3; ++a)
        for (PropKind k : {PropKind::CausesPos, PropKind::CausesNeg, PropKind::Keeps})
            CHECK(query_prop(fresh, mk_lit(v.prop(a, k, 0))) == QueryResult::Unknown);
}

TEST_CASE("three keys: a failed key is known to keep the door locked") {
    const Vocabulary v = toy::locked_door().vocabulary();
    NnfStore s;
    auto K = [&](int a) { return NnfStore::atom(v.keeps(a, 0)); };
    auto U = [&](int a) { return NnfStore::atom(v.causes(a, 0, false)); };
    const NodeRef phi =
        s.mk_and(NnfStore::atom(v.fluent(0)),
                 s.mk_or({s.mk_and({U(0), K(1), K(2)}), s.mk_and({K(0), U(1), K(2)}), s.mk_and({K(0), K(1), U(2)})}));
    const Cnf start = conjoin(to_cnf(s, phi), vocab_axioms(v, false));
    const Cnf after = slaf0_step(start, v, 1, {fluent_lit(0, true)}, false);
    auto inst = make_instance(v, ground_props(v), after, false, false);
    CHECK(query_prop(inst, mk_lit(v.keeps(1, 0))) == QueryResult::Entailed);
    CHECK(query_prop(inst, mk_lit(v.causes(1, 0, false))) == QueryResult::Refuted);
    CHECK(query_prop(inst, mk_lit(v.keeps(0, 0))) == QueryResult::Unknown);
}

TEST_CASE("exclusive siblings are never both entailed") {
    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 30; ++rep) {
        const auto in = inst::random_success_instance(rng, 2, 2, 6, 0.6);
        const Vocabulary v = in.domain.vocabulary();
        AsEngine e(v, true);
        e.observe(in.init_obs);
        for (const auto& st : in.steps) e.step(st.action, st.obs);
        auto sat = make_instance(v, ground_props(v), render_belief(e.store(), v, e.belief()), true, false);
        for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t f = 0; f < 2; ++f) {
                const auto q1 = query_prop(sat, mk_lit(v.causes(a, f, true)));
                const auto q2 = query_prop(sat, mk_lit(v.causes(a, f, false)));
                CHECK_FALSE((q1 == QueryResult::Entailed && q2 == QueryResult::Entailed));
                // Entailed propositions hold in the extracted model; refuted ones do not.
                const auto m = extract_model(sat).model;
                REQUIRE(m);
                const EffectTag tag = m->rows[a][f].effect;
                if (q1 == QueryResult::Entailed) CHECK(tag == EffectTag::CausesPos);
                if (q1 == QueryResult::Refuted) CHECK(tag != EffectTag::CausesPos);
                if (q2 == QueryResult::Entailed) CHECK(tag == EffectTag::CausesNeg);
            }
    }
}

TEST_CASE("bias axioms") {
    const Vocabulary one(std::vector<std::string>{"f"}, std::vector<std::string>{"a"});
    const PropTable t = ground_props(one);
    const Cnf b = bias_axioms(t);
    CHECK(b.clauses.size() == 2);
    // With the bias every extracted CAUSES f comes with NEEDS not f.
    AsEngine e(one, true);
    e.observe({fluent_lit(0, false)});
    e.step(0, {fluent_lit(0, true)});
    auto inst = make_instance(one, t, render_belief(e.store(), one, e.belief()), true, true);
    const auto r = extract_model(inst);
    REQUIRE(r.model);
    CHECK(r.model->rows[0][0].effect == EffectTag::CausesPos);
    CHECK(r.model->rows[0][0].needs_neg);
    CHECK(r.relaxed_bias.empty());
    // Contradicting data relaxes the bias instead of failing.
    AsEngine e2(one, true);
    e2.observe({fluent_lit(0, true)});
    e2.step(0, {fluent_lit(0, true)});
    e2.step(0, {fluent_lit(0, true)});
    auto inst2 = make_instance(one, t, conjoin(render_belief(e2.store(), one, e2.belief()), Cnf{{{mk_lit(one.causes(0, 0, true))}}}),
                               true, true);
    const auto r2 = extract_model(inst2);
    REQUIRE(r2.model);
    CHECK(r2.relaxed_bias.size() == 1);
    CHECK(r2.relaxed_bias[0] == "(OR (NOT (a CAUSES f)) (a NEEDS (NOT f)))");
}

TEST_CASE("schematization of single propositions") {
    const auto w = load_world("blocksworld");
    Vocabulary v = w->g.domain.vocabulary();
    const pddl::SchemaMap m(w->d, w->g.domain);
    const PropTable t = schema_props(v, m);
    Schematizer sz(v, m, t, OffParamPolicy::AssumeKeeps);
    const auto& gd = w->g.domain;
    const std::size_t stack_eg = gd.action_index("(STACK E G)").value();
    const std::size_t on_eg = gd.fluent_index("(ON E G)").value();
    const Cnf one{{{mk_lit(v.causes(stack_eg, on_eg, true))}}};
    const Cnf out = sz.apply(one);
    REQUIRE(out.clauses.size() == 1);
    CHECK(literal_name(v, out.clauses[0][0]) == "((STACK ?OB ?UNDEROB) CAUSES (ON ?OB ?UNDEROB))");

    // (STACK A A) instantiates both HOLDING patterns; the negated disjunction splits.
    const std::size_t stack_aa = gd.action_index("(STACK A A)").value();
    const std::size_t holding_a = gd.fluent_index("(HOLDING A)").value();
    const Cnf neg = sz.apply(Cnf{{{mk_lit(v.causes(stack_aa, holding_a, true), true)}}});
    CHECK(neg.clauses.size() == 2);
    for (const auto& c : neg.clauses) CHECK(c.size() == 1);

    // Off-parameter propositions: KEEPS is assumed.
    const std::size_t on_bc = gd.fluent_index("(ON B C)").value();
    CHECK(sz.apply(Cnf{{{mk_lit(v.keeps(stack_eg, on_bc))}}}).is_true());
    CHECK(sz.apply(Cnf{{{mk_lit(v.causes(stack_eg, on_bc, true))}}}).is_false());
    Schematizer keep(v, m, t, OffParamPolicy::KeepGround);
    const Cnf kept = keep.apply(Cnf{{{mk_lit(v.keeps(stack_eg, on_bc))}}});
    CHECK(kept.clauses == std::vector<Clause>{{mk_lit(v.keeps(stack_eg, on_bc))}});
    CHECK(keep.side_axioms(true).clauses.size() == 5);
}

TEST_CASE("schematized belief equals the ground belief under add-wins expansion") {
    const auto run = schema_run("blocksworld", 40, 3, false);
    const Vocabulary& v = run->v;
    const pddl::SchemaMap& m = *run->map;
    const PropTable& t = run->table;
    NnfStore& s = run->engine->store();
    const NodeRef ground = denotation(s, v, run->engine->belief());
    const NodeRef schema = denotation(s, v, run->schematized);
    std::vector<atom_t> vocab = s.atoms(ground);
    for (atom_t a : s.atoms(schema)) vocab.push_back(a);
    std::sort(vocab.begin(), vocab.end());
    vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());
    std::unordered_map<atom_t, std::size_t> pos;
    for (std::size_t i = 0; i < vocab.size(); ++i) pos[vocab[i]] = i;
    const NnfEvaluator eg(s, ground, vocab), es(s, schema, vocab);

    std::mt19937_64 rng(8);
    for (int rep = 0; rep < 300; ++rep) {
        // A random schema model; half the time the generating one.
        SchemaActionModel sm = generating_model(m, t, true);
        if (rep % 2) {
            for (auto& rows : sm.rows)
                for (auto& r : rows) {
                    r.effect = static_cast<EffectTag>(rng() % 3);
                    const int n = static_cast<int>(rng() % 3);
                    r.needs_pos = n == 1;
                    r.needs_neg = n == 2;
                }
        }
        std::vector<bool> asg(vocab.size(), false);
        auto set = [&](atom_t a, bool val) {
            if (auto it = pos.find(a); it != pos.end()) asg[it->second] = val;
        };
        for (std::size_t a = 0; a < t.actions.size(); ++a)
            for (std::size_t p = 0; p < t.patterns[a].size(); ++p) {
                const ModelRow& r = sm.rows[a][p];
                set(t.atom(a, p, PropKind::CausesPos), r.effect == EffectTag::CausesPos);
                set(t.atom(a, p, PropKind::CausesNeg), r.effect == EffectTag::CausesNeg);
                set(t.atom(a, p, PropKind::Keeps), r.effect == EffectTag::Keeps);
                set(t.atom(a, p, PropKind::NeedsPos), r.needs_pos);
                set(t.atom(a, p, PropKind::NeedsNeg), r.needs_neg);
            }
        // Ground expansion: an add from any pattern wins, then a delete, else keep.
        for (atom_t x : vocab) {
            if (!v.is_action_prop(x)) continue;
            const AtomInfo in = v.info(x);
            const std::size_t sch = m.schema_of(in.action);
            bool add = false, del = false, np = false, nn = false;
            if (m.in_scope(in.action, in.fluent))
                for (std::size_t p : m.matches(in.action, in.fluent)) {
                    const ModelRow& r = sm.rows[sch][p];
                    add |= r.effect == EffectTag::CausesPos;
                    del |= r.effect == EffectTag::CausesNeg;
                    np |= r.needs_pos;
                    nn |= r.needs_neg;
                }
            bool val = false;
            switch (in.prop) {
                case PropKind::CausesPos: val = add; break;
                case PropKind::CausesNeg: val = del && !add; break;
                case PropKind::Keeps: val = !add && !del; break;
                case PropKind::NeedsPos: val = np; break;
                case PropKind::NeedsNeg: val = nn; break;
            }
            asg[pos.at(x)] = val;
        }
        for (std::size_t f = 0; f < v.num_fluents(); ++f) set(v.fluent(f), rng() % 2 == 0);
        CHECK(eg(asg) == es(asg));
    }
}

TEST_CASE("the generating model survives schematized extraction on every fixture") {
    for (const char* name : {"blocksworld", "driverlog", "zenotravel", "depots"}) {
        CAPTURE(name);
        const auto run = schema_run(name, 300, 11, true);
        const SchemaActionModel truth = generating_model(*run->map, run->table, true);
        CHECK(model_satisfies(run->inst, truth));
        const auto r = extract_model(run->inst);
        REQUIRE(r.model);
        CHECK(model_satisfies(run->inst, *r.model));
        // Bias clauses that survived hold in the extracted model.
        for (std::size_t a = 0; a < r.model->rows.size(); ++a)
            for (std::size_t p = 0; p < r.model->rows[a].size(); ++p) {
                const ModelRow& row = r.model->rows[a][p];
                CHECK_FALSE((row.needs_pos && row.needs_neg));
            }
    }
}

TEST_CASE("golden emission is byte-identical and empty models print nothing") {
    for (const char* name : {"blocksworld", "driverlog", "zenotravel", "depots"}) {
        CAPTURE(name);
        const auto w = load_world(name);
        Vocabulary v = w->g.domain.vocabulary();
        const pddl::SchemaMap m(w->d, w->g.domain);
        const PropTable t = schema_props(v, m);
        std::ostringstream out;
        emit_model(generating_model(m, t, false), out);
        CHECK(out.str() == read_fixture(std::string(name) + "/golden_effects.txt"));
    }
    std::ostringstream empty;
    emit_model(SchemaActionModel{}, empty);
    CHECK(empty.str().empty());

    const auto w = load_world("blocksworld");
    Vocabulary v = w->g.domain.vocabulary();
    const pddl::SchemaMap m(w->d, w->g.domain);
    const PropTable t = schema_props(v, m);
    const SchemaActionModel full = generating_model(m, t, true);
    const auto rows = model_rows(full);
    CHECK(std::find(rows.begin(), rows.end(), "(PICKUP CAUSES (HOLDING ?OB))") != rows.end());
    CHECK(std::find(rows.begin(), rows.end(), "(PICKUP NEEDS (CLEAR ?OB))") != rows.end());
    // NEEDS rows precede CAUSES rows, which precede KEEPS rows, per action.
    const auto first_pickup_causes = std::find(rows.begin(), rows.end(), "(PICKUP CAUSES (HOLDING ?OB))");
    CHECK(std::find(rows.begin(), first_pickup_causes, "(PICKUP NEEDS (CLEAR ?OB))") != first_pickup_causes);

    // PDDL emission re-parses to the generating domain.
    std::ostringstream pd;
    emit_pddl(full, m, pd);
    const pddl::DomainSchema back = pddl::parse_domain(pd.str());
    REQUIRE(back.actions.size() == w->d.actions.size());
    for (std::size_t s = 0; s < back.actions.size(); ++s) {
        auto sorted = [](std::vector<pddl::Literal> ls) {
            std::sort(ls.begin(), ls.end(), [](const auto& x, const auto& y) {
                return std::tie(x.pred, x.args, x.positive) < std::tie(y.pred, y.args, y.positive);
            });
            return ls;
        };
        CHECK(sorted(back.actions[s].pre) == sorted(w->d.actions[s].pre));
        CHECK(sorted(back.actions[s].eff) == sorted(w->d.actions[s].eff));
    }
}

TEST_CASE("known preconditions supply NEEDS rows") {
    const Vocabulary v = toy::locked_door().vocabulary();
    const std::vector<std::vector<lit_t>> pre{{fluent_lit(0, true)}, {}, {}};
    PreEngine e(v, pre);
    e.observe({fluent_lit(0, true)});
    e.step(0, true, {fluent_lit(0, false)});
    const PropTable t = ground_props(v);
    const SchemaActionModel needs = needs_from_preconditions(t, pre);
    auto inst = make_instance(v, t, render_belief(e.store(), v, e.belief()), false, true);
    CHECK(inst.bias.empty());
    ExtractOptions opts;
    opts.known_needs = &needs;
    const auto r = extract_model(inst, opts);
    REQUIRE(r.model);
    CHECK_FALSE(r.needs_from_solver);
    CHECK(r.model->rows[0][0].needs_pos);
    CHECK(r.model->rows[0][0].effect == EffectTag::CausesNeg);
    CHECK(model_rows(*r.model).front() == "(unlock1 NEEDS locked)");
}

TEST_CASE("fully observed tiny runs converge to the hidden effects") {
    std::mt19937_64 rng(77);
    std::size_t checked = 0;
    for (int rep = 0; rep < 25; ++rep) {
        const std::size_t nf = 3, na = 3;
        auto in = inst::random_success_instance(rng, nf, na, 0, 1.0);
        in.hidden = inst::random_model(rng, nf, na, 0.0);
        const Vocabulary v = in.domain.vocabulary();
        AsEngine e(v, true);
        State s = in.init;
        e.observe(in.init_obs);
        // seen[a][f][v]: a was taken with f = v beforehand.
        std::vector<std::array<std::array<bool, 2>, 3>> seen(na);
        for (int t = 0; t < 120; ++t) {
            const std::size_t a = rng() % na;
            for (std::size_t f = 0; f < nf; ++f) seen[a][f][s[f]] = true;
            apply_in_place(in.hidden, s, a);
            std::vector<lit_t> obs;
            for (std::size_t f = 0; f < nf; ++f) obs.push_back(fluent_lit(f, s[f]));
            e.step(a, obs);
        }
        auto sat = make_instance(v, ground_props(v), render_belief(e.store(), v, e.belief()), true, false);
        const auto r = extract_model(sat, {});
        REQUIRE(r.model);
        for (std::size_t a = 0; a < na; ++a)
            for (std::size_t f = 0; f < nf; ++f) {
                if (!(seen[a][f][0] && seen[a][f][1])) continue;
                ++checked;
                const Effect h = in.hidden.effect(a, f);
                const EffectTag want = h == Effect::CausesTrue    ? EffectTag::CausesPos
                                       : h == Effect::CausesFalse ? EffectTag::CausesNeg
                                                                  : EffectTag::Keeps;
                CHECK(r.model->rows[a][f].effect == want);
            }
    }
    CHECK(checked > 100);
}

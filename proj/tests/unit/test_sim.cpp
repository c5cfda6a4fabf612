#include <chrono>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "slaf/errors.hpp"
#include "slaf/model/fixtures.hpp"
#include "slaf/pddl/pddl.hpp"
#include "slaf/sim/simulator.hpp"

using namespace slaf;
using namespace slaf::sim;

namespace {

std::string dump(const GroundDomain& d, const Trace& t) {
    std::ostringstream o;
    write_trace(o, d, t);
    return o.str();
}

}  // namespace

TEST_CASE("bounded draws stay in range and cover it") {
    Rng r(3);
    std::vector<int> hits(7, 0);
    for (int i = 0; i < 7000; ++i) ++hits[r.below(7)];
    for (int h : hits) CHECK(h > 800);
    CHECK_THROWS_AS(r.below(0), Error);
}

TEST_CASE("traces are deterministic, truthful and replayable") {
    const auto wp = load_world("blocksworld");
    const World& w = *wp;
    TraceConfig cfg;
    cfg.steps = 1000;
    cfg.seed = 42;
    const auto t0 = std::chrono::steady_clock::now();
    const Trace a = generate_trace(w.g.domain, w.m, w.g.init, cfg);
    const Trace b = generate_trace(w.g.domain, w.m, w.g.init, cfg);
    CHECK(dump(w.g.domain, a) == dump(w.g.domain, b));
    CHECK(replay_check(w.g.domain, w.m, w.g.init, a));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(secs < 1.0);
    for (const auto& st : a.steps) {
        CHECK(st.ok);
        CHECK(st.obs.size() == 10);
    }
    Trace flipped = a;
    flipped.steps[500].obs[3] = lit_not(flipped.steps[500].obs[3]);
    CHECK_FALSE(replay_check(w.g.domain, w.m, w.g.init, flipped));
    cfg.steps = 0;
    CHECK(generate_trace(w.g.domain, w.m, w.g.init, cfg).steps.empty());
}

TEST_CASE("trace files round trip") {
    const auto wp = load_world("driverlog");
    const World& w = *wp;
    TraceConfig cfg;
    cfg.steps = 200;
    cfg.policy = Policy::AnyAction;
    const Trace t = generate_trace(w.g.domain, w.m, w.g.init, cfg);
    const std::string text = dump(w.g.domain, t);
    std::istringstream in(text);
    const Trace back = read_trace(in, w.g.domain);
    CHECK(dump(w.g.domain, back) == text);
    CHECK(text.find("\"action\":\"") != std::string::npos);
    std::istringstream bad("{\"domain\":\"x\",\"fluents\":1,\"actions\":1}\n");
    CHECK_THROWS_AS(read_trace(bad, w.g.domain), ParseError);
}

TEST_CASE("toy trace line format") {
    const GroundDomain d = toy::locked_door();
    Trace t{d.name, 1, 3, 0, 1, {}};
    t.steps.push_back({1, 0, true, true, {fluent_lit(0, false)}});
    const std::string text = dump(d, t);
    CHECK(text.substr(text.find('\n') + 1) == "{\"t\":1,\"action\":\"unlock1\",\"args\":[],\"ok\":true,\"obs\":{\"locked\":false}}\n");
    std::istringstream no_ok("{\"domain\":\"door\",\"fluents\":1,\"actions\":3}\n"
                             "{\"t\":1,\"action\":\"unlock2\",\"args\":[],\"obs\":{}}\n");
    const Trace r = read_trace(no_ok, d);
    CHECK_FALSE(r.steps[0].ok_known);
}

TEST_CASE("any-action policy on the locked door") {
    const GroundDomain d = toy::locked_door();
    TraceConfig cfg;
    cfg.steps = 50;
    cfg.obs_per_step = 1;
    cfg.policy = Policy::AnyAction;
    const Trace t = generate_trace(d, toy::locked_door_model(1), State{true}, cfg);
    bool saw_other = false;
    State s{true};
    for (const auto& st : t.steps) {
        CHECK(st.ok);
        if (st.action != 0 && s[0]) {
            saw_other = true;
            CHECK(st.obs == std::vector<lit_t>{fluent_lit(0, true)});
        }
        apply_in_place(toy::locked_door_model(1), s, st.action);
    }
    CHECK(saw_other);
}

TEST_CASE("any-action failures leave the state alone") {
    const auto wp = load_world("driverlog");
    const World& w = *wp;
    TraceConfig cfg;
    cfg.steps = 400;
    cfg.policy = Policy::AnyAction;
    cfg.obs_per_step = 231;
    const Trace t = generate_trace(w.g.domain, w.m, w.g.init, cfg);
    std::size_t failures = 0;
    State s = w.g.init;
    for (const auto& st : t.steps) {
        State before = s;
        CHECK(apply_in_place(w.m, s, st.action) == st.ok);
        if (!st.ok) {
            ++failures;
            CHECK(s == before);
        }
    }
    CHECK(failures > 0);
    std::size_t total = 0;
    for (const auto& [name, n] : action_distribution(w.g.domain, t)) total += n;
    CHECK(total == 400);
    CHECK(action_distribution(w.g.domain, t).front().first == "LOAD-TRUCK");
}

TEST_CASE("strict coverage observes every fluent within each window") {
    const auto wp = load_world("blocksworld");
    const World& w = *wp;
    for (std::size_t k : {2u, 3u, 4u}) {
        TraceConfig cfg;
        cfg.steps = 300;
        cfg.coverage_k = k;
        const Trace t = generate_trace(w.g.domain, w.m, w.g.init, cfg);
        std::vector<std::size_t> last(w.g.domain.num_fluents(), 0);
        for (const auto& st : t.steps) {
            for (lit_t l : st.obs) last[lit_atom(l)] = st.index;
            for (std::size_t f = 0; f < last.size(); ++f) CHECK(st.index - last[f] < k);
        }
    }
}

TEST_CASE("dead ends are reported") {
    const GroundDomain d("d", {"p"}, {"a"});
    StripsActionModel m(1, 1);
    m.set_pre(0, {fluent_lit(0, true)});
    m.set_effect(0, 0, Effect::CausesFalse);
    TraceConfig cfg;
    cfg.steps = 3;
    cfg.obs_per_step = 1;
    CHECK_THROWS_AS(generate_trace(d, m, State{true}, cfg), DeadEnd);
}

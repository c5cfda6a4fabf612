// Runs every acceptance criterion and prints one PASS/FAIL line each.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "brute.hpp"
#include "fixtures.hpp"
#include "instances.hpp"
#include "slaf/cli/pipeline.hpp"
#include "slaf/engines/as.hpp"
#include "slaf/engines/pre.hpp"
#include "slaf/engines/render.hpp"
#include "slaf/engines/slaf0.hpp"
#include "slaf/logic/resolution.hpp"
#include "slaf/model/tiny.hpp"
#include "slaf/sim/simulator.hpp"

using namespace slaf;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned thresholds.
constexpr std::size_t kMinInstances = 200;
constexpr std::size_t kMaxTraceLen = 8;
constexpr double kOracleBudgetSeconds = 60.0;
constexpr std::size_t kResolveInstances = 500;
constexpr int kResolveAtoms = 10;
constexpr std::size_t kDistributionInstances = 200;
constexpr std::size_t kBoundSteps = 1000;
constexpr std::size_t kThroughputSteps = 5000;
constexpr double kDecileRatio = 2.0;
constexpr double kThroughputBudgetSeconds = 60.0;
constexpr std::size_t kGoldenSteps = 1000;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double x, int prec = 3) {
    std::ostringstream s;
    s.precision(prec);
    s << std::fixed << x;
    return s.str();
}

// The tiny suite shared by the first two criteria. Shapes with at most three
// (action, fluent) pairs are compared over the whole model universe; larger
// shapes over the slice whose preconditions equal the hidden ones.
struct SuiteItem {
    inst::Instance in;
    std::shared_ptr<const std::vector<StripsActionModel>> models;
    bool sliced = false;
};

std::vector<SuiteItem> success_suite() {
    std::mt19937_64 rng(2024);
    std::vector<SuiteItem> out;
    const std::pair<std::size_t, std::size_t> full[] = {{1, 1}, {1, 2}, {1, 3}, {2, 1}, {2, 2}, {3, 1}};
    for (auto [nf, na] : full) {
        auto models = std::make_shared<const std::vector<StripsActionModel>>(enumerate_models_for(inst::tiny_domain(nf, na)));
        for (int rep = 0; rep < 30; ++rep)
            out.push_back({inst::random_success_instance(rng, nf, na, 1 + rng() % kMaxTraceLen, 0.3), models, false});
    }
    const std::pair<std::size_t, std::size_t> sliced[] = {{2, 3}, {3, 2}, {3, 3}};
    for (auto [nf, na] : sliced)
        for (int rep = 0; rep < 10; ++rep) {
            auto in = inst::random_success_instance(rng, nf, na, 1 + rng() % kMaxTraceLen, 0.3);
            ModelConstraints c;
            c.known_pre.emplace();
            for (std::size_t a = 0; a < na; ++a) c.known_pre->push_back(in.hidden.pre(a));
            auto models = std::make_shared<const std::vector<StripsActionModel>>(enumerate_models_for(in.domain, c));
            out.push_back({std::move(in), models, true});
        }
    return out;
}

OracleBelief oracle_for(const inst::Instance& in, const std::shared_ptr<const std::vector<StripsActionModel>>& models) {
    const std::size_t nf = in.domain.num_fluents();
    std::vector<OracleBelief::Pair> pairs;
    for (std::uint32_t m = 0; m < models->size(); ++m)
        for (std::uint64_t s = 0; s < (1ull << nf); ++s) pairs.emplace_back(s, m);
    const OracleBelief all(nf, models, std::move(pairs));
    return oracle_slaf(all.filter(in.init_obs), in.steps);
}

Outcome oracle_equivalence(const std::vector<SuiteItem>& suite) {
    const auto t0 = Clock::now();
    std::size_t exact = 0, sliced = 0;
    for (const auto& it : suite) {
        const Vocabulary v = it.in.domain.vocabulary();
        AsEngine e(v);
        e.observe(it.in.init_obs);
        for (const auto& st : it.in.steps) e.step(st.action, st.obs);
        if (inst::compare(e.store(), e.denotation(), v, oracle_for(it.in, it.models), true).exact()) ++exact;
        sliced += it.sliced;
    }
    const double t = seconds_since(t0);
    return {suite.size() >= kMinInstances && exact == suite.size() && t < kOracleBudgetSeconds,
            std::to_string(exact) + "/" + std::to_string(suite.size()) + " exact (" + std::to_string(sliced) +
                " on precondition slices), " + fmt(t) + " s"};
}

Outcome slaf0_agreement(const std::vector<SuiteItem>& suite) {
    std::size_t same = 0;
    for (const auto& it : suite) {
        const Vocabulary v = it.in.domain.vocabulary();
        AsEngine e(v);
        e.observe(it.in.init_obs);
        Cnf b;
        for (lit_t l : it.in.init_obs) b.add({l});
        for (const auto& st : it.in.steps) {
            e.step(st.action, st.obs);
            b = slaf0_step(b, v, st.action, st.obs);
        }
        const NodeRef rb = e.store().from_cnf(b);
        std::vector<atom_t> vocab;
        for (atom_t x = 0; x < v.base_size(); ++x) vocab.push_back(x);
        const NnfEvaluator as_ev(e.store(), e.denotation(), vocab), s0_ev(e.store(), rb, vocab);
        const std::size_t nf = v.num_fluents();
        bool agree = true;
        for (std::uint32_t m = 0; m < it.models->size() && agree; ++m)
            for (std::uint64_t sm = 0; sm < (1ull << nf) && agree; ++sm) {
                const auto bits = encode_pair(v, state_from_mask(sm, nf), (*it.models)[m], true);
                agree = as_ev(bits) == s0_ev(bits);
            }
        same += agree;
    }
    return {same == suite.size(), std::to_string(same) + "/" + std::to_string(suite.size()) + " equivalent"};
}

Outcome pre_safety() {
    std::mt19937_64 rng(77);
    const std::pair<std::size_t, std::size_t> shapes[] = {{1, 2}, {2, 2}, {3, 2}, {2, 3}, {3, 3}};
    std::size_t n = 0, safe = 0, exact = 0, with_failures = 0;
    for (auto [nf, na] : shapes)
        for (int rep = 0; rep < 45; ++rep) {
            const auto in = inst::random_failure_instance(rng, nf, na, 1 + rng() % kMaxTraceLen, 0.3);
            ModelConstraints c;
            c.known_pre = in.known_pre;
            auto models = std::make_shared<const std::vector<StripsActionModel>>(enumerate_models_for(in.domain, c));
            const Vocabulary v = in.domain.vocabulary();
            PreEngine e(v, in.known_pre);
            e.observe(in.init_obs);
            for (const auto& st : in.steps) e.step(st.action, st.ok, st.obs);
            const auto agree = inst::compare(e.store(), e.denotation(), v, oracle_for(in, models), false);
            ++n;
            safe += agree.safe();
            exact += agree.exact();
            with_failures += std::any_of(in.steps.begin(), in.steps.end(), [](const OracleStep& s) { return !s.ok; });
        }
    // Every trace here carries its ok flags, so every instance must be exact.
    return {n >= kMinInstances && safe == n && exact == n,
            std::to_string(safe) + "/" + std::to_string(n) + " safe, " + std::to_string(exact) + " exact, " +
                std::to_string(with_failures) + " with failures"};
}

Outcome resolve_projection() {
    std::mt19937_64 rng(5);
    std::vector<atom_t> vocab(kResolveAtoms);
    for (int i = 0; i < kResolveAtoms; ++i) vocab[i] = i;
    std::size_t ok = 0;
    for (std::size_t t = 0; t < kResolveInstances; ++t) {
        const Cnf f = brute::random_cnf(rng, kResolveAtoms, 4 + rng() % 24, 1 + rng() % 4);
        const atom_t x = rng() % kResolveAtoms;
        std::vector<atom_t> rest;
        std::vector<int> keep;
        for (int i = 0; i < kResolveAtoms; ++i)
            if (static_cast<atom_t>(i) != x) {
                rest.push_back(i);
                keep.push_back(i);
            }
        ok += brute::models(resolve_out(f, x), rest) == brute::project(brute::models(f, vocab), keep);
    }
    return {ok == kResolveInstances, std::to_string(ok) + "/" + std::to_string(kResolveInstances) + " equal"};
}

// Distribution of exact SLAF over the connectives, by consequence finding and
// enumeration, plus the factored step's own guarantees: it distributes over
// disjunction by construction, equals exact SLAF on conjunction-free input,
// and is implied by exact SLAF otherwise.
Outcome distribution() {
    std::mt19937_64 rng(31);
    std::size_t ok_or = 0, ok_and = 0, ok_factored = 0, n = 0;
    for (std::size_t t = 0; t < kDistributionInstances; ++t) {
        const std::size_t nf = t % 4 == 3 ? 2 : 1;
        Vocabulary v = inst::tiny_domain(nf, 1).vocabulary();
        TinyLanguage tl(v);
        FactoredSlaf fs(tl);
        NnfStore s;
        std::vector<atom_t> vocab;
        for (std::size_t f = 0; f < nf; ++f) vocab.push_back(v.fluent(f));
        for (atom_t x : tl.atoms_of(0)) vocab.push_back(x);
        const NodeRef ex = s.from_cnf(tl.exclusivity(0));
        const NodeRef tau = tl.teff(s, 0);
        auto lit = [&] { return NnfStore::atom(v.fluent(rng() % nf), rng() % 2 == 0); };
        bool has_and = false;
        auto sub = [&] {
            switch (rng() % 3) {
                case 0: return lit();
                case 1: has_and = true; return s.mk_and(lit(), lit());
                default: return s.mk_or(lit(), lit());
            }
        };
        std::vector<lit_t> obs;
        if (rng() % 2) obs.push_back(mk_lit(v.fluent(rng() % nf), rng() % 2 == 0));
        auto models_of = [&](NodeRef r) { return enumerate_models(s, s.mk_and(r, ex), vocab); };
        auto exact_of = [&](NodeRef r) {
            const Cnf c = conjoin(slaf0_step(to_cnf(s, r), s, tau, v, obs), tl.exclusivity(0));
            NnfStore u;
            return enumerate_models(u, u.from_cnf(c), vocab);
        };
        const NodeRef x = sub(), y = sub();
        const auto ex_x = exact_of(x), ex_y = exact_of(y);
        std::vector<std::uint64_t> uni, inter;
        std::set_union(ex_x.begin(), ex_x.end(), ex_y.begin(), ex_y.end(), std::back_inserter(uni));
        std::set_intersection(ex_x.begin(), ex_x.end(), ex_y.begin(), ex_y.end(), std::back_inserter(inter));
        const auto ex_or = exact_of(s.mk_or(x, y)), ex_and = exact_of(s.mk_and(x, y));
        ok_or += ex_or == uni;
        ok_and += std::includes(inter.begin(), inter.end(), ex_and.begin(), ex_and.end());

        const auto f_or = models_of(fs.step(s, s.mk_or(x, y), 0, obs));
        const auto f_sep = models_of(s.mk_or(fs.step(s, x, 0, obs), fs.step(s, y, 0, obs)));
        const auto f_and = models_of(fs.step(s, s.mk_and(x, y), 0, obs));
        const bool factored = f_or == f_sep && (has_and || f_or == ex_or) &&
                              std::includes(f_and.begin(), f_and.end(), ex_and.begin(), ex_and.end()) &&
                              std::includes(f_or.begin(), f_or.end(), ex_or.begin(), ex_or.end());
        ok_factored += factored;
        ++n;
    }
    return {ok_or == n && ok_and == n && ok_factored == n,
            "or exact " + std::to_string(ok_or) + "/" + std::to_string(n) + ", and one-sided " + std::to_string(ok_and) +
                "/" + std::to_string(n) + ", factored step " + std::to_string(ok_factored) + "/" + std::to_string(n)};
}

// Three-block world, small enough to render the ground belief every few
// hundred steps.
std::unique_ptr<World> three_blocks() {
    auto w = std::make_unique<World>();
    w->d = pddl::parse_domain(read_fixture("blocksworld/domain.pddl"));
    w->g = pddl::ground(w->d, pddl::parse_problem("(define (problem bw-3) (:domain blocksworld) (:objects A B C - object)"
                                                  " (:init (arm-empty) (on-table A) (on B A) (clear B) (on-table C)"
                                                  " (clear C)))",
                                                  w->d));
    w->m = pddl::ground_model(w->d, w->g);
    return w;
}

std::vector<lit_t> full_observation(const State& s) {
    std::vector<lit_t> out;
    for (std::size_t f = 0; f < s.size(); ++f) out.push_back(fluent_lit(f, s[f]));
    return out;
}

// The initial state is observed, so every window of k steps from time zero
// contains an observation of each fluent. The same run from an unobserved
// start is reported alongside: its first window leaves clauses of k + 1
// literals.
Outcome kcnf_bound() {
    const auto w = three_blocks();
    const Vocabulary v = w->g.domain.vocabulary();
    const RenderOptions ro{true, 10'000'000};
    std::size_t m = 0;
    for (std::size_t a = 0; a < w->m.num_actions(); ++a) m = std::max(m, w->m.pre(a).size());
    bool ok = true;
    std::string detail;
    for (std::size_t k : {2, 3, 4}) {
        sim::TraceConfig tc;
        tc.steps = kBoundSteps;
        tc.obs_per_step = 0;
        tc.coverage_k = k;
        tc.seed = k;
        std::size_t as_max = 0, pre_max = 0, cold_max = 0;
        {
            const auto t = sim::generate_trace(w->g.domain, w->m, w->g.init, tc);
            AsEngine e(v), cold(v);
            e.observe(full_observation(w->g.init));
            for (const auto& st : t.steps) {
                e.step(st.action, st.obs);
                cold.step(st.action, st.obs);
                if (st.index % 200 == 0) {
                    as_max = std::max(as_max, render_belief(e.store(), v, e.belief(), ro).max_clause_length());
                    cold_max = std::max(cold_max, render_belief(cold.store(), v, cold.belief(), ro).max_clause_length());
                }
            }
        }
        {
            tc.policy = sim::Policy::AnyAction;
            const auto t = sim::generate_trace(w->g.domain, w->m, w->g.init, tc);
            std::vector<std::vector<lit_t>> pre;
            for (std::size_t a = 0; a < w->m.num_actions(); ++a) pre.push_back(w->m.pre(a));
            PreEngine e(v, pre);
            e.observe(full_observation(w->g.init));
            for (const auto& st : t.steps) {
                e.step(st.action, st.ok, st.obs);
                if (st.index % 200 == 0)
                    pre_max = std::max(pre_max, render_belief(e.store(), v, e.belief(), ro).max_clause_length());
            }
        }
        ok = ok && as_max <= k && pre_max <= m * k;
        detail += "k=" + std::to_string(k) + ": as " + std::to_string(as_max) + " (unobserved start " + std::to_string(cold_max) + "), pre " + std::to_string(pre_max) +
                  " (bound " + std::to_string(m * k) + "); ";
    }
    detail.resize(detail.size() - 2);
    return {ok, detail};
}

Outcome throughput() {
    const auto w = load_world("blocksworld");
    sim::TraceConfig tc;
    tc.steps = kThroughputSteps;
    const auto t = sim::generate_trace(w->g.domain, w->m, w->g.init, tc);
    const Vocabulary v = w->g.domain.vocabulary();
    AsEngine e(v);
    std::vector<double> per;
    per.reserve(t.steps.size());
    for (const auto& st : t.steps) {
        const auto t0 = Clock::now();
        e.step(st.action, st.obs);
        per.push_back(seconds_since(t0));
    }
    const std::size_t dec = per.size() / 10;
    auto mean = [&](std::size_t from) {
        double s = 0;
        for (std::size_t i = from; i < from + dec; ++i) s += per[i];
        return s / static_cast<double>(dec);
    };
    double total = 0;
    for (double x : per) total += x;
    const double first = mean(0), last = mean(per.size() - dec);
    return {w->g.domain.num_fluents() >= 200 && last <= kDecileRatio * first && total < kThroughputBudgetSeconds,
            std::to_string(w->g.domain.num_fluents()) + " fluents, decile ratio " + fmt(last / first, 2) + ", total " +
                fmt(total) + " s"};
}

struct GoldenRun {
    std::string name;
    cli::RunReport report;
};

std::vector<GoldenRun> golden_runs(const std::string& out_root) {
    std::vector<GoldenRun> out;
    for (std::string name : {"blocksworld", "driverlog", "zenotravel", "depots"}) {
        cli::RunConfig cfg;
        cfg.domain_path = fixture_path(name + "/domain.pddl");
        cfg.problem_path = fixture_path(name + "/problem.pddl");
        cfg.steps = kGoldenSteps;
        cfg.cnf_metrics = false;
        cfg.query_limit = 0;
        cfg.out_dir = out_root + "/" + name;
        out.push_back({name, cli::run_pipeline(cfg)});
    }
    return out;
}

Outcome golden(const std::vector<GoldenRun>& runs) {
    bool ok = true;
    std::string detail;
    for (const auto& r : runs) {
        const bool m = r.report.golden_match.value_or(false);
        ok = ok && m;
        detail += r.name + (m ? " match" : " DIFFER (" + std::to_string(r.report.golden_diff.size()) + " rows)") + ", ";
    }
    detail.resize(detail.size() - 2);
    return {ok, detail};
}

Outcome fluent_counts() {
    const std::pair<const char*, std::size_t> want[] = {
        {"driverlog", 231}, {"zenotravel", 91}, {"blocksworld", 209}, {"depots", 250}};
    bool ok = true;
    std::string detail;
    for (auto [name, n] : want) {
        const std::size_t got = load_world(name)->g.domain.num_fluents();
        ok = ok && got == n;
        detail += std::string(name) + " " + std::to_string(got) + "/" + std::to_string(n) + ", ";
    }
    detail.resize(detail.size() - 2);
    return {ok, detail};
}

// Reported side by side, never gated.
Outcome cnf_report(const std::vector<GoldenRun>& runs) {
    struct Anchor {
        const char* name;
        std::size_t clauses, vars;
        double slaf, inference;
    };
    const Anchor anchors[] = {{"blocksworld", 235492, 187, 2.203, 42.312},
                              {"driverlog", 82338, 210, 2.469, 8.406},
                              {"zenotravel", 71119, 138, 1.109, 11.015},
                              {"depots", 85359, 236, 2.797, 8.062}};
    std::string detail;
    for (const auto& r : runs)
        for (const auto& a : anchors)
            if (r.name == a.name && r.report.cnf)
                detail += r.name + " " + std::to_string(r.report.cnf->clauses) + "/" + std::to_string(r.report.cnf->vars) +
                          " vs " + std::to_string(a.clauses) + "/" + std::to_string(a.vars) + ", time " +
                          fmt(r.report.slaf_time, 2) + "+" + fmt(r.report.extraction_time, 2) + " s vs " +
                          fmt(a.slaf, 3) + "+" + fmt(a.inference, 3) + " s; ";
    if (detail.size() >= 2) detail.resize(detail.size() - 2);
    return {true, "reported: " + detail};
}

}  // namespace

int main(int argc, char** argv) {
    const std::string out_root = argc > 1 ? argv[1] : "acceptance_out";
    std::filesystem::create_directories(out_root);
    int failures = 0;
    auto report = [&](int id, const std::string& name, const std::function<Outcome()>& f) {
        Outcome o;
        try {
            o = f();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::cout << (o.pass ? "PASS " : "FAIL ") << id << ' ' << name << ": " << o.detail << std::endl;
    };

    const auto suite = success_suite();
    report(1, "oracle equivalence", [&] { return oracle_equivalence(suite); });
    report(2, "slaf0 agreement", [&] { return slaf0_agreement(suite); });
    report(3, "pre safety and exactness", pre_safety);
    report(4, "resolve_out equals projection", resolve_projection);
    report(5, "distribution", distribution);
    report(6, "k-cnf bound", kcnf_bound);
    report(7, "throughput shape", throughput);
    std::vector<GoldenRun> runs;
    report(8, "golden models", [&] {
        runs = golden_runs(out_root);
        return golden(runs);
    });
    report(9, "fluent counts", fluent_counts);
    report(10, "cnf statistics", [&] { return cnf_report(runs); });
    return failures == 0 ? 0 : 1;
}

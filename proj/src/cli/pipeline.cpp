#include "slaf/cli/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <memory>
#include <set>
#include <span>
#include <sstream>

#include "slaf/engines/slaf0.hpp"
#include "slaf/logic/resolution.hpp"
#include "slaf/model/domain.hpp"
#include "slaf/model/fixtures.hpp"
#include "slaf/model/oracle.hpp"
#include "slaf/model/tiny.hpp"

namespace slaf::cli {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

std::optional<EngineKind> parse_engine(const std::string& name) {
    if (name == "oracle") return EngineKind::Oracle;
    if (name == "slaf0") return EngineKind::Slaf0;
    if (name == "factored") return EngineKind::Factored;
    if (name == "as") return EngineKind::As;
    if (name == "pre") return EngineKind::Pre;
    return std::nullopt;
}

std::string engine_name(EngineKind e) {
    switch (e) {
        case EngineKind::Oracle: return "oracle";
        case EngineKind::Slaf0: return "slaf0";
        case EngineKind::Factored: return "factored";
        case EngineKind::As: return "as";
        case EngineKind::Pre: return "pre";
    }
    return "?";
}

int exit_code_for(const std::exception& e) {
    if (auto* s = dynamic_cast<const StageError*>(&e)) return s->code;
    if (dynamic_cast<const ParseError*>(&e)) return kExitParse;
    if (dynamic_cast<const SolverFailure*>(&e)) return kExitExtract;
    return kExitLearn;
}

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw StageError(kExitParse, "cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p);
    if (!out) throw StageError(kExitIo, "cannot write " + p.string());
    return out;
}

// Domain, hidden model and schema map for one run. Not movable: the schema
// map points into it.
struct Setup {
    pddl::DomainSchema d;
    pddl::Grounding g;
    StripsActionModel hidden;
    bool is_pddl = false;
    std::unique_ptr<pddl::SchemaMap> map;

    Setup() = default;
    Setup(const Setup&) = delete;
    Setup& operator=(const Setup&) = delete;
};

std::unique_ptr<Setup> load_setup(const std::string& toy, const std::string& domain, const std::string& problem) {
    auto s = std::make_unique<Setup>();
    if (!toy.empty()) {
        if (toy != "locked-door") throw StageError(kExitUsage, "unknown toy domain '" + toy + "' (known: locked-door)");
        s->g.domain = toy::locked_door();
        s->g.init = State{true};
        s->hidden = toy::locked_door_model(1);
        return s;
    }
    if (domain.empty() || problem.empty()) throw StageError(kExitUsage, "--domain and --problem are required");
    try {
        s->d = pddl::parse_domain(slurp(domain));
        s->g = pddl::ground(s->d, pddl::parse_problem(slurp(problem), s->d));
    } catch (const ParseError& e) {
        throw StageError(kExitParse, e.what());
    }
    s->hidden = pddl::ground_model(s->d, s->g);
    s->is_pddl = true;
    s->map = std::make_unique<pddl::SchemaMap>(s->d, s->g.domain);
    return s;
}

sim::Trace obtain_trace(const Setup& s, const RunConfig& cfg) {
    if (!cfg.trace_path.empty()) {
        std::ifstream in(cfg.trace_path);
        if (!in) throw StageError(kExitParse, "cannot read trace " + cfg.trace_path);
        try {
            return sim::read_trace(in, s.g.domain);
        } catch (const ParseError& e) {
            throw StageError(kExitParse, std::string("trace: ") + e.what());
        }
    }
    sim::TraceConfig tc;
    tc.steps = cfg.steps;
    tc.obs_per_step = std::min(cfg.obs_per_step, s.g.domain.num_fluents());  // the default of 10 exceeds toy domains
    tc.policy = cfg.policy;
    tc.seed = cfg.seed;
    tc.record_every = cfg.record_every;
    tc.coverage_k = cfg.coverage_k;
    try {
        return sim::generate_trace(s.g.domain, s.hidden, s.g.init, tc);
    } catch (const DeadEnd& e) {
        throw StageError(kExitLearn, std::string("simulation: ") + e.what());
    }
}

std::vector<std::vector<lit_t>> known_preconditions(const StripsActionModel& m) {
    std::vector<std::vector<lit_t>> out;
    for (std::size_t a = 0; a < m.num_actions(); ++a) out.push_back(m.pre(a));
    return out;
}

// Whichever belief the chosen engine keeps.
struct Learner {
    EngineKind kind;
    Vocabulary& v;
    std::unique_ptr<AsEngine> as;
    std::unique_ptr<PreEngine> pre;
    Cnf slaf0 = Cnf::truth();
    bool slaf0_known_pre = false;
    std::vector<std::vector<lit_t>> known_pre;
    NnfStore store;
    std::unique_ptr<TinyLanguage> tiny;
    NodeRef factored = NnfStore::kTrue;
    OracleBelief oracle;
    // When set, CNF metrics are taken on the schematized belief, which is the
    // formula extraction sees; the ground rendering is far too large to
    // produce every few hundred steps on the PDDL domains.
    Schematizer* sz = nullptr;

    Learner(EngineKind k, Vocabulary& vocab) : kind(k), v(vocab) {}

    void step(const sim::TraceStep& st) {
        switch (kind) {
            case EngineKind::As:
                if (!st.ok) throw Error("this engine assumes successful actions; use --engine pre for traces with failures");
                as->step(st.action, st.obs);
                break;
            case EngineKind::Pre:
                if (!st.ok_known) throw Error("trace step lacks the ok flag, which this engine requires");
                pre->step(st.action, st.ok, st.obs);
                break;
            case EngineKind::Slaf0:
                if (st.ok) {
                    slaf0 = slaf0_known_pre ? slaf0_step(slaf0, v, st.action, st.obs, false, &known_pre[st.action])
                                            : slaf0_step(slaf0, v, st.action, st.obs, true);
                } else {
                    slaf0 = slaf0_fail(slaf0, known_pre[st.action], st.obs);
                }
                if (slaf0.is_false()) throw InconsistentBelief("belief became unsatisfiable", st.index);
                break;
            case EngineKind::Factored:
                if (!st.ok) throw Error("this engine assumes successful actions");
                factored = FactoredSlaf(*tiny).step(store, factored, st.action, st.obs);
                if (factored == NnfStore::kFalse) throw InconsistentBelief("belief became unsatisfiable", st.index);
                break;
            case EngineKind::Oracle:
                oracle = (st.ok ? oracle.progress(st.action) : oracle.fail(st.action)).filter(st.obs);
                if (oracle.size() == 0) throw InconsistentBelief("belief became empty", st.index);
                break;
        }
    }

    std::vector<NodeRef> roots(const AsBelief& b) const {
        std::vector<NodeRef> r;
        for (const auto& x : b.fluents) r.insert(r.end(), {x.expl_pos, x.expl_neg, x.ctx});
        return r;
    }

    static constexpr RenderOptions kMetricRender{true, 2'000'000};

    template <class F>
    static std::optional<Cnf> try_render(F f) {
        try {
            return f();
        } catch (const ClauseExplosion&) {
            return std::nullopt;  // metric left empty
        }
    }

    static void set_cnf(StepMetric& m, const std::optional<Cnf>& c) {
        if (!c) return;
        m.cnf_clauses = c->clauses.size();
        m.max_clause_len = c->max_clause_length();
    }

    void measure(StepMetric& m, bool cnf_metrics) {
        switch (kind) {
            case EngineKind::As: {
                const auto r = roots(as->belief());
                m.dag_nodes = as->store().reachable(r);
                if (cnf_metrics) {
                    const auto c = try_render([&] {
                        return sz ? render_belief(as->store(), v, sz->apply(as->store(), as->belief()), kMetricRender)
                                  : render_belief(as->store(), v, as->belief(), kMetricRender);
                    });
                    set_cnf(m, c);
                }
                break;
            }
            case EngineKind::Pre: {
                const PreBelief& b = pre->belief();
                auto r = roots(b.top);
                for (const auto& g : b.groups)
                    for (const auto& br : g)
                        for (const auto& [f, x] : br.comps) r.insert(r.end(), {x.expl_pos, x.expl_neg, x.ctx});
                r.insert(r.end(), b.frozen.begin(), b.frozen.end());
                m.dag_nodes = pre->store().reachable(r);
                if (cnf_metrics) {
                    const auto c = try_render([&] {
                        return sz ? render_belief(pre->store(), v, sz->apply(pre->store(), b), kMetricRender)
                                  : render_belief(pre->store(), v, b, kMetricRender);
                    });
                    set_cnf(m, c);
                }
                break;
            }
            case EngineKind::Slaf0:
                m.dag_nodes = slaf0.literal_count();
                m.cnf_clauses = slaf0.clauses.size();
                m.max_clause_len = slaf0.max_clause_length();
                break;
            case EngineKind::Factored:
                m.dag_nodes = store.reachable(std::span<const NodeRef>(&factored, 1));
                break;
            case EngineKind::Oracle:
                m.pairs = oracle.size();
                break;
        }
    }
};

std::unique_ptr<Learner> make_learner(EngineKind kind, Vocabulary& v, const Setup& s, const sim::Trace& t) {
    auto L = std::make_unique<Learner>(kind, v);
    L->known_pre = known_preconditions(s.hidden);
    bool failures = false;
    for (const auto& st : t.steps) failures |= !st.ok;
    switch (kind) {
        case EngineKind::As: L->as = std::make_unique<AsEngine>(v, true); break;
        case EngineKind::Pre: L->pre = std::make_unique<PreEngine>(v, L->known_pre); break;
        case EngineKind::Slaf0:
            L->slaf0_known_pre = failures;
            break;
        case EngineKind::Factored: L->tiny = std::make_unique<TinyLanguage>(v); break;
        case EngineKind::Oracle: {
            ModelConstraints c;
            if (failures) c.known_pre = L->known_pre;
            L->oracle = OracleBelief::all(v.num_fluents(), enumerate_models_for(s.g.domain, c));
            break;
        }
    }
    return L;
}

void record(RunReport& r, Learner& L, std::size_t step, double cumulative, double window, std::size_t window_steps,
            bool cnf_metrics) {
    StepMetric m;
    m.step = step;
    m.cumulative_time = cumulative;
    m.step_time = window_steps ? window / static_cast<double>(window_steps) : 0.0;
    L.measure(m, cnf_metrics);
    r.metrics.push_back(m);
}

// Runs the engine over the trace, filling metrics. Exceptions from the
// engines are rethrown as learn-stage errors carrying the step index.
void learn(RunReport& r, Learner& L, const sim::Trace& t, const RunConfig& cfg) {
    double cumulative = 0, window = 0;
    std::size_t window_steps = 0;
    for (const auto& st : t.steps) {
        const auto t0 = Clock::now();
        try {
            L.step(st);
        } catch (const StageError&) {
            throw;
        } catch (const InconsistentBelief& e) {
            throw StageError(kExitLearn, e.what());
        } catch (const std::exception& e) {
            throw StageError(kExitLearn, std::string(e.what()) + " (step " + std::to_string(st.index) + ")");
        }
        const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
        cumulative += dt;
        window += dt;
        ++window_steps;
        if (cfg.record_every > 0 && st.index % cfg.record_every == 0) {
            record(r, L, st.index, cumulative, window, window_steps, cfg.cnf_metrics);
            window = 0;
            window_steps = 0;
        }
    }
    r.slaf_time = cumulative;
}

SchemaActionModel model_from_strips(const PropTable& t, const StripsActionModel& m) {
    SchemaActionModel out = SchemaActionModel::shaped_like(t);
    for (std::size_t a = 0; a < m.num_actions(); ++a)
        for (std::size_t f = 0; f < m.num_fluents(); ++f) {
            ModelRow& row = out.rows[a][f];
            const Effect e = m.effect(a, f);
            row.effect = e == Effect::CausesTrue ? EffectTag::CausesPos : e == Effect::CausesFalse ? EffectTag::CausesNeg : EffectTag::Keeps;
            row.needs_pos = m.needs(a, f) > 0;
            row.needs_neg = m.needs(a, f) < 0;
        }
    return out;
}

std::string bias_text(const Vocabulary& v, atom_t causes, atom_t needs) {
    Clause c = *make_clause({mk_lit(causes, true), mk_lit(needs)});
    std::string out = "(OR";
    for (lit_t l : c) out += " " + literal_name(v, l);
    return out + ")";
}

void extract_stage(RunReport& r, Learner& L, Setup& s, Vocabulary& v, const PropTable& table, Schematizer* sz,
                   const RunConfig& cfg, const fs::path& out_dir) {
    if (L.kind == EngineKind::Factored) {
        r.note = "the general effect language has no STRIPS decoding; no model extracted";
        return;
    }
    const bool schematize = sz != nullptr;
    SchemaActionModel model;
    const auto t0 = Clock::now();
    if (L.kind == EngineKind::Oracle) {
        for (const auto& [sm, mi] : L.oracle.pairs()) {
            if (r.oracle_belief.size() >= 64) break;
            std::string line = "state {";
            bool first = true;
            for (std::size_t f = 0; f < v.num_fluents(); ++f)
                if ((sm >> f) & 1u) {
                    line += (first ? "" : " ") + v.fluent_name(f);
                    first = false;
                }
            line += "} model " + std::to_string(mi);
            r.oracle_belief.push_back(line);
        }
        model = model_from_strips(table, L.oracle.model(L.oracle.pairs().front().second));
        r.needs_source = "oracle";
        r.note = "the model of the first surviving pair is emitted";
    } else {
        const bool with_needs = L.kind == EngineKind::As || (L.kind == EngineKind::Slaf0 && !L.slaf0_known_pre);
        Cnf belief;
        Cnf side;
        try {
            switch (L.kind) {
                case EngineKind::As:
                    belief = sz ? render_belief(L.as->store(), v, sz->apply(L.as->store(), L.as->belief()))
                                : render_belief(L.as->store(), v, L.as->belief());
                    break;
                case EngineKind::Pre:
                    belief = sz ? render_belief(L.pre->store(), v, sz->apply(L.pre->store(), L.pre->belief()))
                                : render_belief(L.pre->store(), v, L.pre->belief());
                    break;
                default:
                    belief = sz ? sz->apply(L.slaf0) : L.slaf0;
                    break;
            }
        } catch (const ClauseExplosion& e) {
            throw StageError(kExitExtract, e.what());
        }
        if (sz) side = sz->side_axioms(with_needs);
        SatInstance inst = make_instance(v, table, belief, with_needs, cfg.bias, side);
        r.cnf = inst.stats();
        if (cfg.dump_cnf) {
            r.cnf_path = (out_dir / "belief.cnf").string();
            auto out = open_out(r.cnf_path);
            write_dimacs(inst.cnf, out, v);
        }
        SchemaActionModel known;
        ExtractOptions opts;
        opts.seed = cfg.seed;
        if (cfg.solver != "embedded") opts.external = ExternalSolver{cfg.solver, std::chrono::seconds(cfg.solver_timeout)};
        if (!with_needs) {
            known = schematize ? needs_from_domain(*s.map, table) : needs_from_preconditions(table, L.known_pre);
            opts.known_needs = &known;
        }
        ExtractResult res;
        try {
            res = extract_model(inst, opts);
        } catch (const SolverFailure& e) {
            throw StageError(kExitExtract, e.what());
        }
        if (!res.model) throw StageError(kExitExtract, "no action model is consistent with the belief");
        model = *res.model;
        r.solver_calls = res.solver_calls;
        r.bias_clauses = res.bias_clauses;
        r.relaxed_bias = res.relaxed_bias;
        r.needs_source = with_needs ? "solver" : "known preconditions";

        if (table.num_rows() <= cfg.query_limit) {
            const int kinds = with_needs ? kPropKinds : 3;
            for (std::size_t a = 0; a < table.actions.size(); ++a)
                for (std::size_t p = 0; p < table.patterns[a].size(); ++p)
                    for (int k = 0; k < kinds; ++k)
                        r.queries[prop_row(table, a, p, static_cast<PropKind>(k))] =
                            to_string(query_prop(inst, mk_lit(table.atom(a, p, static_cast<PropKind>(k))), opts));
        }
        std::set<std::string> relaxed(res.relaxed_bias.begin(), res.relaxed_bias.end());
        for (std::size_t a = 0; a < table.actions.size(); ++a)
            for (std::size_t p = 0; p < table.patterns[a].size(); ++p) {
                const ModelRow& row = model.rows[a][p];
                for (bool positive : {true, false}) {
                    if (!(positive ? row.needs_pos : row.needs_neg)) continue;
                    const PropKind nk = positive ? PropKind::NeedsPos : PropKind::NeedsNeg;
                    const std::string key = prop_row(table, a, p, nk);
                    std::string origin;
                    if (!with_needs) {
                        origin = "known";
                    } else if (auto q = r.queries.find(key); q != r.queries.end() && q->second == "entailed") {
                        origin = "belief";
                    } else {
                        const PropKind ck = positive ? PropKind::CausesNeg : PropKind::CausesPos;
                        const bool forced = cfg.bias && row.effect == (positive ? EffectTag::CausesNeg : EffectTag::CausesPos) &&
                                            !relaxed.count(bias_text(v, table.atom(a, p, ck), table.atom(a, p, nk)));
                        origin = forced ? "bias" : "solver choice";
                    }
                    r.needs_origin[key] = origin;
                }
            }
    }
    r.extraction_time = std::chrono::duration<double>(Clock::now() - t0).count();
    r.model_rows = model_rows(model);
    r.model_path = (out_dir / "model.sexp").string();
    {
        auto out = open_out(r.model_path);
        emit_model(model, out);
    }
    if (schematize) {
        r.pddl_path = (out_dir / "model.pddl").string();
        auto out = open_out(r.pddl_path);
        emit_pddl(model, *s.map, out);
        const auto got = effect_rows(model);
        const auto want = pddl::golden_effect_rows(*s.map);
        r.golden_match = got == want;
        for (const auto& x : got)
            if (!std::binary_search(want.begin(), want.end(), x)) r.golden_diff.push_back("+" + x);
        for (const auto& x : want)
            if (!std::binary_search(got.begin(), got.end(), x)) r.golden_diff.push_back("-" + x);
    }
}

template <class T>
nlohmann::ordered_json opt(const std::optional<T>& x) {
    return x ? nlohmann::ordered_json(*x) : nlohmann::ordered_json(nullptr);
}

}  // namespace

RunReport run_pipeline(const RunConfig& cfg) {
    RunReport r;
    r.config = cfg;
    const fs::path out_dir(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw StageError(kExitIo, "cannot create " + out_dir.string() + ": " + ec.message());

    auto setup = load_setup(cfg.toy, cfg.domain_path, cfg.problem_path);
    const GroundDomain& d = setup->g.domain;
    r.domain = d.name;
    r.fluents = d.num_fluents();
    r.actions = d.num_actions();

    const sim::Trace trace = obtain_trace(*setup, cfg);
    r.steps = trace.steps.size();
    if (cfg.trace_path.empty()) {
        r.trace_path = (out_dir / "trace.jsonl").string();
        auto out = open_out(r.trace_path);
        sim::write_trace(out, d, trace);
    } else {
        r.trace_path = cfg.trace_path;
    }

    Vocabulary v = d.vocabulary();
    if (!cfg.learn) {
        r.report_path = (out_dir / "report.json").string();
        auto out = open_out(r.report_path);
        out << to_json(r).dump(2) << '\n';
        return r;
    }
    std::unique_ptr<Learner> L;
    try {
        L = make_learner(cfg.engine, v, *setup, trace);
    } catch (const Error& e) {
        throw StageError(kExitLearn, e.what());
    }
    const bool schematize = cfg.schematize && setup->is_pddl &&
                            (cfg.engine == EngineKind::As || cfg.engine == EngineKind::Pre || cfg.engine == EngineKind::Slaf0);
    const PropTable table = schematize ? schema_props(v, *setup->map) : ground_props(v);
    std::unique_ptr<Schematizer> sz;
    if (schematize) sz = std::make_unique<Schematizer>(v, *setup->map, table, cfg.off_param);
    L->sz = sz.get();
    learn(r, *L, trace, cfg);
    if (cfg.extract) extract_stage(r, *L, *setup, v, table, sz.get(), cfg, out_dir);

    r.report_path = (out_dir / "report.json").string();
    r.metrics_path = (out_dir / "metrics.csv").string();
    {
        auto out = open_out(r.metrics_path);
        write_metrics_csv(r, out);
    }
    {
        auto out = open_out(r.report_path);
        out << to_json(r).dump(2) << '\n';
    }
    return r;
}

nlohmann::ordered_json to_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["domain"] = c.domain_path;
    j["problem"] = c.problem_path;
    j["toy"] = c.toy;
    j["trace"] = c.trace_path;
    j["engine"] = engine_name(c.engine);
    j["steps"] = c.steps;
    j["obs_per_step"] = c.obs_per_step;
    j["seed"] = c.seed;
    j["policy"] = c.policy == sim::Policy::ExecutableOnly ? "executable" : "any";
    j["coverage_k"] = c.coverage_k;
    j["schematize"] = c.schematize;
    j["bias_1to1"] = c.bias;
    j["off_param"] = c.off_param == OffParamPolicy::AssumeKeeps ? "assume-keeps" : "keep-ground";
    j["solver"] = c.solver;
    j["record_every"] = c.record_every;
    j["out_dir"] = c.out_dir;
    return j;
}

nlohmann::ordered_json to_json(const RunReport& r) {
    nlohmann::ordered_json j;
    j["config"] = to_json(r.config);
    j["domain"] = r.domain;
    j["fluents"] = r.fluents;
    j["actions"] = r.actions;
    j["steps"] = r.steps;
    auto& ms = j["metrics"] = nlohmann::ordered_json::array();
    for (const auto& m : r.metrics) {
        nlohmann::ordered_json x;
        x["step"] = m.step;
        x["cumulative_time"] = m.cumulative_time;
        x["step_time"] = m.step_time;
        x["dag_nodes"] = m.dag_nodes;
        x["cnf_clauses"] = opt(m.cnf_clauses);
        x["max_clause_len"] = opt(m.max_clause_len);
        if (m.pairs) x["pairs"] = *m.pairs;
        ms.push_back(std::move(x));
    }
    auto& f = j["final"];
    f["slaf_time"] = r.slaf_time;
    f["extraction_time"] = r.extraction_time;
    if (r.cnf) f["cnf"] = {{"clauses", r.cnf->clauses}, {"variables", r.cnf->vars}, {"literals", r.cnf->literals}, {"max_clause_len", r.cnf->max_len}};
    f["solver"] = {{"calls", r.solver_calls}, {"bias_clauses", r.bias_clauses}, {"relaxed_bias", r.relaxed_bias}};
    f["needs_source"] = r.needs_source;
    f["needs_origin"] = r.needs_origin;
    f["model"] = r.model_rows;
    f["model_path"] = r.model_path;
    f["pddl_path"] = r.pddl_path;
    f["cnf_path"] = r.cnf_path;
    f["trace_path"] = r.trace_path;
    f["golden_match"] = opt(r.golden_match);
    f["golden_diff"] = r.golden_diff;
    if (!r.queries.empty()) {
        std::map<std::string, std::size_t> tally;
        for (const auto& [k, lbl] : r.queries) ++tally[lbl];
        f["query_summary"] = tally;
        f["queries"] = r.queries;
    }
    if (!r.oracle_belief.empty()) f["oracle_belief"] = r.oracle_belief;
    if (!r.note.empty()) f["note"] = r.note;
    return j;
}

void write_metrics_csv(const RunReport& r, std::ostream& out) {
    out << "step,cumulative_time,step_time,dag_nodes,cnf_clauses,max_clause_len,pairs\n";
    auto o = [](const std::optional<std::size_t>& x) { return x ? std::to_string(*x) : std::string(); };
    for (const auto& m : r.metrics)
        out << m.step << ',' << m.cumulative_time << ',' << m.step_time << ',' << m.dag_nodes << ',' << o(m.cnf_clauses)
            << ',' << o(m.max_clause_len) << ',' << o(m.pairs) << '\n';
}

// ---------------------------------------------------------------------------

BenchResult run_bench(const BenchConfig& cfg) {
    BenchResult res;
    for (const auto& name : cfg.domains) {
        for (std::size_t size : cfg.sizes) {
            for (EngineKind e : cfg.engines) {
                const std::string cell = name + "," + engine_name(e) + "," + std::to_string(size);
                try {
                    const fs::path dir = fs::path(cfg.fixtures_dir) / name;
                    auto setup = load_setup("", (dir / "domain.pddl").string(), (dir / "problem.pddl").string());
                    RunConfig rc;
                    rc.engine = e;
                    rc.steps = size;
                    rc.obs_per_step = cfg.obs_per_step;
                    rc.seed = cfg.seed;
                    rc.record_every = cfg.record_every;
                    rc.cnf_metrics = false;
                    rc.policy = e == EngineKind::Pre ? sim::Policy::AnyAction : sim::Policy::ExecutableOnly;
                    const sim::Trace t = obtain_trace(*setup, rc);
                    Vocabulary v = setup->g.domain.vocabulary();
                    auto L = make_learner(e, v, *setup, t);
                    RunReport r;
                    learn(r, *L, t, rc);
                    for (const auto& m : r.metrics)
                        res.rows.push_back({name, setup->g.domain.num_fluents(), engine_name(e), size, m.step, m.step_time,
                                            m.pairs ? *m.pairs : m.dag_nodes});
                } catch (const std::exception& ex) {
                    res.failures.push_back(cell + ": " + ex.what());
                }
            }
        }
    }
    const fs::path out_dir(cfg.out_dir);
    fs::create_directories(out_dir);
    {
        auto out = open_out(out_dir / "bench.csv");
        write_bench_csv(res, out);
    }
    {
        auto out = open_out(out_dir / "bench.dat");
        write_bench_dat(res, out);
    }
    {
        auto out = open_out(out_dir / "failures.txt");
        for (const auto& f : res.failures) out << f << '\n';
    }
    return res;
}

void write_bench_csv(const BenchResult& r, std::ostream& out) {
    out << "domain,fluents,engine,step,time_per_step,formula_size\n";
    for (const auto& x : r.rows)
        out << x.domain << ',' << x.fluents << ',' << x.engine << ',' << x.step << ',' << x.time_per_step << ','
            << x.formula_size << '\n';
}

// One gnuplot data block per (domain, engine, size) cell, separated by two
// blank lines so that `index` selects a cell.
void write_bench_dat(const BenchResult& r, std::ostream& out) {
    std::string current;
    for (const auto& x : r.rows) {
        const std::string key = x.domain + " " + x.engine + " " + std::to_string(x.size);
        if (key != current) {
            if (!current.empty()) out << "\n\n";
            out << "# " << key << " (fluents " << x.fluents << ")\n# step time_per_step formula_size\n";
            current = key;
        }
        out << x.step << ' ' << x.time_per_step << ' ' << x.formula_size << '\n';
    }
}

std::vector<std::string> oracle_check_locked_door(const std::string& trace_path) {
    const GroundDomain d = toy::locked_door();
    std::vector<StripsActionModel> models{toy::locked_door_model(1), toy::locked_door_model(2), toy::locked_door_model(3)};
    OracleBelief b(1, std::make_shared<const std::vector<StripsActionModel>>(models), {{1, 0}, {1, 1}, {1, 2}});
    std::vector<OracleStep> steps;
    if (trace_path.empty()) {
        steps.push_back({0, true, {fluent_lit(0, false)}});
    } else {
        std::ifstream in(trace_path);
        if (!in) throw StageError(kExitParse, "cannot read trace " + trace_path);
        for (const auto& st : sim::read_trace(in, d).steps) steps.push_back({st.action, st.ok, st.obs});
    }
    const OracleBelief out = oracle_slaf(b, steps);
    std::vector<std::string> lines;
    for (const auto& [sm, mi] : out.pairs())
        lines.push_back(std::string("<") + ((sm & 1u) ? "{locked}" : "{}") + ", R" + std::to_string(mi + 1) + ">");
    return lines;
}

}  // namespace slaf::cli

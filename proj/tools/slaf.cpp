// Command-line front end. Exit codes: 0 ok, 1 usage, 2 parse, 3 learn,
// 4 extract, 5 output.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "slaf/cli/pipeline.hpp"
#include "slaf/logic/resolution.hpp"
#include "slaf/model/fixtures.hpp"

using namespace slaf;
using namespace slaf::cli;

namespace {

const std::map<std::string, EngineKind> kEngines{{"oracle", EngineKind::Oracle},
                                                 {"slaf0", EngineKind::Slaf0},
                                                 {"factored", EngineKind::Factored},
                                                 {"as", EngineKind::As},
                                                 {"pre", EngineKind::Pre}};
const std::map<std::string, sim::Policy> kPolicies{{"executable", sim::Policy::ExecutableOnly},
                                                   {"any", sim::Policy::AnyAction}};
const std::map<std::string, OffParamPolicy> kOffParam{{"assume-keeps", OffParamPolicy::AssumeKeeps},
                                                      {"keep-ground", OffParamPolicy::KeepGround}};

void add_world_flags(CLI::App* app, RunConfig& c) {
    app->add_option("--domain", c.domain_path, "PDDL domain file");
    app->add_option("--problem", c.problem_path, "PDDL problem file");
    app->add_option("--toy", c.toy, "built-in toy domain instead of PDDL")->check(CLI::IsMember({"locked-door"}));
}

void add_trace_flags(CLI::App* app, RunConfig& c) {
    app->add_option("--steps", c.steps, "trace length")->capture_default_str();
    app->add_option("--obs-per-step", c.obs_per_step, "fluents observed per step")->capture_default_str();
    app->add_option("--seed", c.seed, "random seed")->capture_default_str();
    app->add_option("--policy", c.policy, "action choice: executable or any")
        ->transform(CLI::CheckedTransformer(kPolicies, CLI::ignore_case).description(""))
        ->option_text("executable|any [executable]");
    app->add_option("--coverage-k", c.coverage_k, "observe every fluent within each window of k steps (0: off)")
        ->capture_default_str();
    app->add_option("--record-every", c.record_every, "metric recording interval")->capture_default_str();
    app->add_option("--out-dir", c.out_dir, "output directory")->capture_default_str();
}

void add_learn_flags(CLI::App* app, RunConfig& c) {
    app->add_option("--trace", c.trace_path, "read this trace instead of generating one");
    app->add_option("--engine", c.engine, "oracle, slaf0, factored, as or pre")
        ->transform(CLI::CheckedTransformer(kEngines, CLI::ignore_case).description(""))
        ->option_text("NAME [as]");
    app->add_flag("--schematize,!--no-schematize", c.schematize, "extract a schema-level model (default on)");
    app->add_flag("--bias-1to1,!--no-bias-1to1", c.bias, "soft clauses tying each effect to a precondition (default on)");
    app->add_option("--off-param", c.off_param, "fluents outside an action's arguments: assume-keeps or keep-ground")
        ->transform(CLI::CheckedTransformer(kOffParam, CLI::ignore_case).description(""))
        ->option_text("assume-keeps|keep-ground [assume-keeps]");
    app->add_option("--solver", c.solver, "embedded, or a DIMACS solver executable")->capture_default_str();
    app->add_option("--solver-timeout", c.solver_timeout, "seconds per external solver call")->capture_default_str();
    app->add_flag("--dump-cnf", c.dump_cnf, "write the extraction CNF as belief.cnf");
    app->add_flag("!--no-extract", c.extract, "stop after learning");
    app->add_flag("!--no-cnf-metrics", c.cnf_metrics, "record DAG size only");
    app->add_option("--query-limit", c.query_limit, "classify every proposition when the table is this small")
        ->capture_default_str();
}

void print_summary(const RunReport& r) {
    std::cout << "domain " << r.domain << ": " << r.fluents << " fluents, " << r.actions << " actions, " << r.steps
              << " steps\n";
    std::cout << "slaf time " << r.slaf_time << " s, extraction time " << r.extraction_time << " s\n";
    if (r.cnf) std::cout << "cnf " << r.cnf->clauses << " clauses, " << r.cnf->vars << " variables\n";
    if (r.golden_match) std::cout << "golden effect rows: " << (*r.golden_match ? "match" : "differ") << '\n';
    for (const auto& d : r.golden_diff) std::cout << "  " << d << '\n';
    for (const auto& line : r.oracle_belief) std::cout << line << '\n';
    if (!r.note.empty()) std::cout << "note: " << r.note << '\n';
    if (!r.model_path.empty()) std::cout << "model " << r.model_path << '\n';
    std::cout << "report " << r.report_path << '\n';
}

int run_extract(const RunConfig& c, const std::string& cnf_path, bool needs) {
    std::unique_ptr<pddl::DomainSchema> d;
    pddl::Grounding g;
    std::unique_ptr<pddl::SchemaMap> map;
    auto slurp = [](const std::string& p) {
        std::ifstream in(p);
        if (!in) throw StageError(kExitParse, "cannot read " + p);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    if (!c.toy.empty()) {
        g.domain = toy::locked_door();
    } else {
        if (c.domain_path.empty() || c.problem_path.empty()) throw StageError(kExitUsage, "--domain and --problem are required");
        d = std::make_unique<pddl::DomainSchema>(pddl::parse_domain(slurp(c.domain_path)));
        g = pddl::ground(*d, pddl::parse_problem(slurp(c.problem_path), *d));
        map = std::make_unique<pddl::SchemaMap>(*d, g.domain);
    }
    Vocabulary v = g.domain.vocabulary();
    const bool schematize = c.schematize && map;
    PropTable table = schematize ? schema_props(v, *map) : ground_props(v);
    std::ifstream in(cnf_path);
    if (!in) throw StageError(kExitParse, "cannot read " + cnf_path);
    const Cnf belief = read_dimacs(in, v);
    SatInstance inst = make_instance(v, table, belief, needs, c.bias);
    ExtractOptions opts;
    opts.seed = c.seed;
    if (c.solver != "embedded") opts.external = ExternalSolver{c.solver, std::chrono::seconds(c.solver_timeout)};
    SchemaActionModel known;
    if (!needs && map) {
        known = needs_from_domain(*map, table);
        opts.known_needs = &known;
    }
    const ExtractResult res = extract_model(inst, opts);
    if (!res.model) throw StageError(kExitExtract, "no action model is consistent with the formula");
    std::filesystem::create_directories(c.out_dir);
    const auto path = std::filesystem::path(c.out_dir) / "model.sexp";
    std::ofstream out(path);
    if (!out) throw StageError(kExitIo, "cannot write " + path.string());
    emit_model(*res.model, out);
    for (const auto& r : res.relaxed_bias) std::cout << "relaxed " << r << '\n';
    std::cout << "model " << path.string() << '\n';
    return kExitOk;
}

int run_solve(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw StageError(kExitParse, "cannot read " + path);
    Vocabulary v;
    DimacsMap m;
    const Cnf f = read_dimacs(in, v, &m);
    SatSolver s(1);
    const std::size_t n = m.index_to_atom.size() - 1;
    s.reserve_vars(n);
    bool ok = true;
    for (const auto& c : f.clauses) {
        std::vector<lit_t> lits;
        for (lit_t l : c) lits.push_back(mk_lit(static_cast<atom_t>(m.atom_to_index.at(lit_atom(l)) - 1), lit_negated(l)));
        ok = s.add_clause(lits) && ok;
    }
    const SatResult r = ok ? s.solve() : SatResult::Unsat;
    std::vector<std::uint8_t> model;
    if (r == SatResult::Sat) model = s.model();
    model.resize(n);
    std::cout << format_solution(r, model);
    return r == SatResult::Sat ? 10 : r == SatResult::Unsat ? 20 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Learning STRIPS action models from partially observed traces"};
    app.set_config("--config", "", "TOML/INI file with [learn]-style sections; flags override it");
    app.require_subcommand(1);
    app.footer("Exit codes: 0 ok, 1 usage, 2 parse, 3 learn, 4 extract, 5 output");

    RunConfig cfg;
    auto* simulate = app.add_subcommand("simulate", "generate a trace");
    add_world_flags(simulate, cfg);
    add_trace_flags(simulate, cfg);

    auto* learn = app.add_subcommand("learn", "simulate or read a trace, learn, extract and emit");
    add_world_flags(learn, cfg);
    add_trace_flags(learn, cfg);
    add_learn_flags(learn, cfg);

    std::string cnf_path;
    bool cnf_needs = true;
    auto* extract = app.add_subcommand("extract", "extract a model from a named DIMACS belief");
    add_world_flags(extract, cfg);
    extract->add_option("--cnf", cnf_path, "DIMACS file with c var names")->required();
    extract->add_flag("--needs,!--no-needs", cnf_needs, "the formula mentions NEEDS atoms (default on)");
    extract->add_flag("--schematize,!--no-schematize", cfg.schematize, "schema-level table (default on)");
    extract->add_flag("--bias-1to1,!--no-bias-1to1", cfg.bias, "precondition bias (default on)");
    extract->add_option("--solver", cfg.solver, "embedded, or a DIMACS solver executable")->capture_default_str();
    extract->add_option("--seed", cfg.seed, "solver seed")->capture_default_str();
    extract->add_option("--out-dir", cfg.out_dir, "output directory")->capture_default_str();

    BenchConfig bench_cfg;
    std::vector<std::string> bench_engines{"as"};
    auto* bench = app.add_subcommand("bench", "time per step over domains x sizes x engines");
    bench->add_option("--fixtures", bench_cfg.fixtures_dir, "directory with <domain>/domain.pddl and problem.pddl")
        ->capture_default_str();
    bench->add_option("--domains", bench_cfg.domains, "fixture names")->capture_default_str();
    bench->add_option("--sizes", bench_cfg.sizes, "trace lengths")->capture_default_str();
    bench->add_option("--engines", bench_engines, "engine names")->check(CLI::IsMember(kEngines))->capture_default_str();
    bench->add_option("--obs-per-step", bench_cfg.obs_per_step, "fluents observed per step")->capture_default_str();
    bench->add_option("--seed", bench_cfg.seed, "random seed")->capture_default_str();
    bench->add_option("--record-every", bench_cfg.record_every, "recording interval")->capture_default_str();
    bench->add_option("--out-dir", bench_cfg.out_dir, "output directory")->capture_default_str();

    std::string oracle_trace;
    auto* oracle = app.add_subcommand("oracle-check", "explicit belief on the locked door");
    oracle->add_option("--trace", oracle_trace, "trace file (default: unlock1, door observed open)");

    std::string solve_path;
    auto* solve = app.add_subcommand("solve", "embedded solver on a DIMACS file (external-solver output format)");
    solve->add_option("file", solve_path, "DIMACS file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*simulate) {
            cfg.learn = false;
            const RunReport r = run_pipeline(cfg);
            std::cout << "trace " << r.trace_path << " (" << r.steps << " steps)\n";
            return kExitOk;
        }
        if (*learn) {
            print_summary(run_pipeline(cfg));
            return kExitOk;
        }
        if (*extract) return run_extract(cfg, cnf_path, cnf_needs);
        if (*bench) {
            bench_cfg.engines.clear();
            for (const auto& e : bench_engines) bench_cfg.engines.push_back(kEngines.at(e));
            const BenchResult r = run_bench(bench_cfg);
            std::cout << r.rows.size() << " rows, " << r.failures.size() << " failed cells\n";
            for (const auto& f : r.failures) std::cout << "failed " << f << '\n';
            return kExitOk;
        }
        if (*oracle) {
            for (const auto& line : oracle_check_locked_door(oracle_trace)) std::cout << line << '\n';
            return kExitOk;
        }
        if (*solve) return run_solve(solve_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
    return kExitUsage;
}

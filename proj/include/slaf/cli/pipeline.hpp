#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "slaf/errors.hpp"
#include "slaf/extract/extract.hpp"
#include "slaf/sim/simulator.hpp"

namespace slaf::cli {

// Process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,    // bad flags or configuration
    kExitParse = 2,    // PDDL, trace, DIMACS or config file could not be read
    kExitLearn = 3,    // simulation or belief update failed
    kExitExtract = 4,  // no consistent model, or the solver failed
    kExitIo = 5,       // outputs could not be written
};

// A failure tagged with the pipeline stage that raised it.
struct StageError : Error {
    StageError(int exit_code, const std::string& what) : Error(what), code(exit_code) {}
    int code;
};

enum class EngineKind { Oracle, Slaf0, Factored, As, Pre };
std::optional<EngineKind> parse_engine(const std::string& name);
std::string engine_name(EngineKind e);

struct RunConfig {
    std::string domain_path;
    std::string problem_path;
    std::string toy;         // "locked-door" instead of PDDL files
    std::string trace_path;  // read this trace instead of generating one
    EngineKind engine = EngineKind::As;
    std::size_t steps = 1000;
    std::size_t obs_per_step = 10;
    std::uint64_t seed = 1;
    sim::Policy policy = sim::Policy::ExecutableOnly;
    std::size_t coverage_k = 0;
    bool schematize = true;
    bool bias = true;
    OffParamPolicy off_param = OffParamPolicy::AssumeKeeps;
    std::string solver = "embedded";  // or an executable for the external contract
    std::size_t solver_timeout = 600;
    std::size_t record_every = 200;
    bool cnf_metrics = true;
    bool dump_cnf = false;
    bool learn = true;    // false: simulate and write the trace only
    bool extract = true;
    std::size_t query_limit = 3000;  // classify propositions when the table is at most this many rows
    std::string out_dir = "out";
};

struct StepMetric {
    std::size_t step = 0;
    double cumulative_time = 0;  // SLAF time only
    double step_time = 0;        // mean over the window ending here
    std::size_t dag_nodes = 0;
    std::optional<std::size_t> cnf_clauses;
    std::optional<std::size_t> max_clause_len;
    std::optional<std::size_t> pairs;  // oracle only
};

struct RunReport {
    RunConfig config;
    std::string domain;
    std::size_t fluents = 0;
    std::size_t actions = 0;
    std::size_t steps = 0;
    std::vector<StepMetric> metrics;
    double slaf_time = 0;
    double extraction_time = 0;
    std::optional<CnfStats> cnf;
    std::size_t solver_calls = 0;
    std::size_t bias_clauses = 0;
    std::vector<std::string> relaxed_bias;
    std::string needs_source;
    std::vector<std::string> model_rows;
    std::map<std::string, std::string> queries;       // proposition -> entailed/refuted/unknown
    std::map<std::string, std::string> needs_origin;  // NEEDS row -> belief/bias/solver choice/known
    std::optional<bool> golden_match;
    std::vector<std::string> golden_diff;
    std::vector<std::string> oracle_belief;
    std::string note;
    std::string trace_path, model_path, pddl_path, cnf_path, report_path, metrics_path;
};

// simulate (or read) -> learn -> extract -> emit, writing outputs under
// config.out_dir. Throws StageError.
RunReport run_pipeline(const RunConfig& cfg);

nlohmann::ordered_json to_json(const RunReport& r);
nlohmann::ordered_json to_json(const RunConfig& c);
void write_metrics_csv(const RunReport& r, std::ostream& out);

// Maps any exception to an exit code and message.
int exit_code_for(const std::exception& e);

struct BenchConfig {
    std::string fixtures_dir = "fixtures";
    std::vector<std::string> domains{"blocksworld"};
    std::vector<std::size_t> sizes{1000};
    std::vector<EngineKind> engines{EngineKind::As};
    std::size_t obs_per_step = 10;
    std::uint64_t seed = 1;
    std::size_t record_every = 200;
    std::string out_dir = "bench";
};

struct BenchRow {
    std::string domain;
    std::size_t fluents = 0;
    std::string engine;
    std::size_t size = 0;
    std::size_t step = 0;
    double time_per_step = 0;
    std::size_t formula_size = 0;
};

struct BenchResult {
    std::vector<BenchRow> rows;
    std::vector<std::string> failures;  // "domain,engine,size: message"
};

// Runs every (domain, size, engine) cell; a failing cell is recorded and the
// run continues. Writes bench.csv, bench.dat (gnuplot blocks) and failures.
BenchResult run_bench(const BenchConfig& cfg);
void write_bench_csv(const BenchResult& r, std::ostream& out);
void write_bench_dat(const BenchResult& r, std::ostream& out);

// Item-by-item oracle on the locked door. With no trace file the run starts
// from the three one-working-key models in a locked state and applies
// unlock1 observing the door open. Returns one line per surviving pair.
std::vector<std::string> oracle_check_locked_door(const std::string& trace_path);

}  // namespace slaf::cli

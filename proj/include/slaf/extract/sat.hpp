#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "slaf/logic/cnf.hpp"

namespace slaf {

enum class SatResult { Sat, Unsat, Unknown };

// Incremental CDCL solver. Variables are dense ids 0..n-1 and literals use the
// same encoding as formula literals (var * 2 + sign). Watched literals, VSIDS
// with phase saving, Luby restarts, learnt clause reduction, assumptions and
// final-conflict analysis. Behaviour is a function of the seed only.
class SatSolver {
public:
    explicit SatSolver(std::uint64_t seed = 0);

    std::uint32_t new_var();
    void reserve_vars(std::size_t n);
    std::size_t num_vars() const { return assigns_.size(); }

    // Returns false once the clause set is known unsatisfiable at level 0.
    bool add_clause(std::vector<lit_t> lits);

    // Preferred first phase for a variable.
    void set_phase(std::uint32_t var, bool value);

    SatResult solve(const std::vector<lit_t>& assumptions = {});
    // Conflict budget per solve call; 0 means none.
    void set_conflict_budget(std::uint64_t n) { budget_ = n; }

    bool model_value(std::uint32_t var) const { return model_[var] == 1; }
    const std::vector<std::uint8_t>& model() const { return model_; }
    // After Unsat under assumptions: the subset of assumptions that conflicts.
    const std::vector<lit_t>& conflict() const { return final_conflict_; }

    std::uint64_t conflicts() const { return conflicts_; }
    std::uint64_t decisions() const { return decisions_; }

private:
    static constexpr std::uint8_t kTrue = 1, kFalse = 0, kUndef = 2;
    static constexpr std::uint32_t kNoReason = UINT32_MAX;

    struct ClauseRec {
        std::vector<lit_t> lits;
        double activity = 0;
        bool learnt = false;
        bool deleted = false;
    };
    struct Watcher {
        std::uint32_t cref;
        lit_t blocker;
    };

    std::uint8_t value(lit_t l) const {
        const std::uint8_t a = assigns_[lit_atom(l)];
        return a == kUndef ? kUndef : static_cast<std::uint8_t>(a ^ (lit_negated(l) ? 1 : 0));
    }
    std::uint32_t level() const { return static_cast<std::uint32_t>(trail_lim_.size()); }
    void enqueue(lit_t l, std::uint32_t reason);
    std::uint32_t propagate();
    void analyze(std::uint32_t confl, std::vector<lit_t>& learnt, std::uint32_t& bt_level);
    void analyze_final(lit_t p);
    void cancel_until(std::uint32_t lvl);
    std::optional<lit_t> pick_branch();
    void attach(std::uint32_t cref);
    void bump_var(std::uint32_t v);
    void bump_clause(ClauseRec& c);
    void reduce_db();
    bool locked(std::uint32_t cref) const;
    SatResult search(std::uint64_t max_conflicts, const std::vector<lit_t>& assumptions);

    // Binary max-heap over activity.
    void heap_insert(std::uint32_t v);
    void heap_up(std::size_t i);
    void heap_down(std::size_t i);
    std::uint32_t heap_pop();
    bool heap_contains(std::uint32_t v) const { return heap_pos_[v] != UINT32_MAX; }

    std::vector<ClauseRec> clauses_;
    std::vector<std::uint32_t> learnts_;
    std::vector<std::vector<Watcher>> watches_;
    std::vector<std::uint8_t> assigns_;
    std::vector<std::uint8_t> phase_;
    std::vector<std::uint32_t> reason_;
    std::vector<std::uint32_t> level_;
    std::vector<double> activity_;
    std::vector<std::uint8_t> seen_;
    std::vector<lit_t> trail_;
    std::vector<std::uint32_t> trail_lim_;
    std::size_t qhead_ = 0;
    std::vector<std::uint32_t> heap_;
    std::vector<std::uint32_t> heap_pos_;
    double var_inc_ = 1.0;
    double cla_inc_ = 1.0;
    double max_learnts_ = 0;
    bool ok_ = true;
    std::uint64_t seed_;
    std::uint64_t rng_state_;
    std::uint64_t budget_ = 0;
    std::uint64_t conflicts_ = 0;
    std::uint64_t decisions_ = 0;
    std::vector<std::uint8_t> model_;
    std::vector<lit_t> final_conflict_;
};

struct ExternalSolver {
    std::string command;  // executable; the DIMACS path is appended as the last argument
    std::chrono::seconds timeout{600};
};

struct ExternalResult {
    SatResult result = SatResult::Unknown;
    std::vector<std::uint8_t> model;  // by DIMACS index - 1
};

// Writes the clauses (plus assumptions as units) in DIMACS, runs the command,
// and parses "s ..." and "v ... 0" lines. Exit status is ignored. Throws
// SolverFailure when no status line appears or the tool times out.
ExternalResult solve_external(const ExternalSolver& cfg, std::size_t num_vars, const std::vector<Clause>& clauses,
                              const std::vector<lit_t>& assumptions = {});

// Competition-format output of a model or verdict ("s ...", "v ... 0").
std::string format_solution(SatResult r, const std::vector<std::uint8_t>& model);

}  // namespace slaf

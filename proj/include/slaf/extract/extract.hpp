#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "slaf/engines/as.hpp"
#include "slaf/engines/pre.hpp"
#include "slaf/engines/render.hpp"
#include "slaf/extract/sat.hpp"
#include "slaf/logic/cnf.hpp"
#include "slaf/logic/nnf.hpp"
#include "slaf/pddl/pddl.hpp"

namespace slaf {

// The learnable propositions: one row of five atoms (indexed by PropKind) for
// each (action, fluent pattern) pair. A ground table has one action per ground
// action and one pattern per fluent; a schema table has one action per PDDL
// schema and one pattern per parameter-scoped predicate instance.
struct PropTable {
    std::vector<std::string> actions;                 // "STACK" or "unlock1"
    std::vector<std::vector<std::string>> patterns;   // "(ON ?OB ?UNDEROB)" or "locked"
    std::vector<std::vector<std::array<atom_t, kPropKinds>>> atoms;

    atom_t atom(std::size_t a, std::size_t p, PropKind k) const { return atoms[a][p][static_cast<int>(k)]; }
    std::size_t num_rows() const;
};

PropTable ground_props(const Vocabulary& v);
// Interns "((STACK ?OB ?UNDEROB) CAUSES (ON ?OB ?UNDEROB))"-style atoms.
PropTable schema_props(Vocabulary& v, const pddl::SchemaMap& m);

enum class EffectTag : std::uint8_t { CausesPos, CausesNeg, Keeps };

struct ModelRow {
    EffectTag effect = EffectTag::Keeps;
    bool needs_pos = false;
    bool needs_neg = false;
    bool operator==(const ModelRow&) const = default;
};

struct SchemaActionModel {
    std::vector<std::string> actions;
    std::vector<std::vector<std::string>> patterns;
    std::vector<std::vector<ModelRow>> rows;

    static SchemaActionModel shaped_like(const PropTable& t);
    bool empty() const { return actions.empty(); }
    bool operator==(const SchemaActionModel&) const = default;
};

// Exactly one of CAUSES f, CAUSES not f, KEEPS f per row; at most one NEEDS.
Cnf table_axioms(const PropTable& t, bool with_needs = true);
// (not CAUSES f or NEEDS not f) and (not CAUSES not f or NEEDS f) per row.
Cnf bias_axioms(const PropTable& t);

enum class OffParamPolicy { AssumeKeeps, KeepGround };

// Rewrites ground action propositions into schema propositions. A ground
// action whose arguments repeat an object can match several patterns for one
// fluent; its propositions are then combined so that an add wins over a
// delete, as in ground_model:
//   a CAUSES f       = OR_i  S_i CAUSES f
//   a CAUSES not f   = (OR_i S_i CAUSES not f) and AND_i not S_i CAUSES f
//   a KEEPS f        = AND_i S_i KEEPS f
//   a NEEDS l        = OR_i  S_i NEEDS l
// Fluents with an argument outside the action's arguments are resolved by the
// policy: AssumeKeeps maps KEEPS to TRUE and CAUSES/NEEDS to FALSE,
// KeepGround leaves the ground atom in place.
class Schematizer {
public:
    Schematizer(const Vocabulary& v, const pddl::SchemaMap& m, const PropTable& t, OffParamPolicy policy);

    NodeRef map_literal(NnfStore& s, lit_t l);
    NodeRef apply(NnfStore& s, NodeRef root);
    AsBelief apply(NnfStore& s, const AsBelief& b);
    PreBelief apply(NnfStore& s, const PreBelief& b);
    Cnf apply(const Cnf& f);

    // Axioms the rewritten formula needs besides table_axioms: ground axioms
    // for atoms kept under KeepGround, and NEEDS exclusivity across the
    // patterns of repeated-argument actions that were rewritten.
    Cnf side_axioms(bool with_needs) const;

private:
    const Vocabulary& v_;
    const pddl::SchemaMap& m_;
    const PropTable& t_;
    OffParamPolicy policy_;
    const NnfStore* memo_store_ = nullptr;
    std::unordered_map<atom_t, NodeRef> memo_;
    std::vector<std::pair<std::size_t, std::size_t>> kept_ground_;
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> shared_needs_;  // schema, patterns
};

// CNF of a belief conjoined with the ground vocabulary axioms, subsumption
// applied.
Cnf belief_to_cnf(const Cnf& belief, const Vocabulary& v, bool with_needs = true);
Cnf belief_to_cnf(const NnfStore& s, const Vocabulary& v, const AsBelief& b, bool with_needs = true,
                  const RenderOptions& opts = {});
Cnf belief_to_cnf(NnfStore& s, const Vocabulary& v, const PreBelief& b, const RenderOptions& opts = {});

struct ClauseGroup {
    std::string note;  // belief, vocab axioms, side axioms, query
    std::size_t first = 0;
    std::size_t count = 0;
};

// Hard clauses plus soft bias clauses over a dense variable map.
struct SatInstance {
    const Vocabulary* vocab = nullptr;
    PropTable table;
    bool with_needs = true;
    Cnf cnf;
    std::vector<ClauseGroup> groups;
    std::vector<Clause> bias;
    std::vector<atom_t> vars;  // solver variable -> atom
    std::unordered_map<atom_t, std::uint32_t> var_of;

    void add_group(const std::string& note, const Cnf& f);
    void set_bias(const Cnf& f);
    std::uint32_t var(atom_t a);
    std::optional<std::uint32_t> find_var(atom_t a) const;
    lit_t to_solver(lit_t l) const;
    CnfStats stats() const { return stats_of(cnf); }
};

// belief (already in CNF over the table's atoms) + table axioms (+ bias).
SatInstance make_instance(const Vocabulary& v, PropTable table, const Cnf& belief, bool with_needs, bool bias,
                          const Cnf& side_axioms = {});

struct ExtractOptions {
    std::uint64_t seed = 0;
    std::optional<ExternalSolver> external;
    bool prefer_keeps = true;
    bool prefer_no_needs = true;
    // Source of NEEDS rows when the instance carries no needs atoms.
    const SchemaActionModel* known_needs = nullptr;
};

struct ExtractResult {
    std::optional<SchemaActionModel> model;
    std::size_t bias_clauses = 0;
    std::vector<std::string> relaxed_bias;  // printed clauses that were dropped
    bool needs_from_solver = true;
    std::size_t solver_calls = 0;
};

ExtractResult extract_model(const SatInstance& inst, const ExtractOptions& opts = {});

// True iff the model, read as an assignment to the table atoms, extends to a
// model of the instance's hard clauses.
bool model_satisfies(const SatInstance& inst, const SchemaActionModel& m, std::uint64_t seed = 0);

enum class QueryResult { Entailed, Refuted, Unknown };
std::string to_string(QueryResult r);

// Entailed iff inst and not p is unsatisfiable (checked first, so an
// unsatisfiable instance entails everything); Refuted iff inst and p is
// unsatisfiable; Unknown otherwise.
QueryResult query_prop(const SatInstance& inst, lit_t p, const ExtractOptions& opts = {});
QueryResult query_formula(const SatInstance& inst, NnfStore& s, NodeRef p, const ExtractOptions& opts = {});

// Rows of the known preconditions of a PDDL domain, or of ground STRIPS
// preconditions for a ground table.
SchemaActionModel needs_from_domain(const pddl::SchemaMap& m, const PropTable& t);
SchemaActionModel needs_from_preconditions(const PropTable& t, const std::vector<std::vector<lit_t>>& pre);
// Effects (and optionally preconditions) of the generating domain.
SchemaActionModel generating_model(const pddl::SchemaMap& m, const PropTable& t, bool with_needs);

// "(STACK CAUSES (NOT (CLEAR ?UNDEROB)))" for one proposition of a table row.
std::string prop_row(const PropTable& t, std::size_t a, std::size_t p, PropKind k);

// Rows in emission order: per action (sorted), NEEDS rows, then CAUSES, then
// KEEPS, each block sorted.
std::vector<std::string> model_rows(const SchemaActionModel& m);
void emit_model(const SchemaActionModel& m, std::ostream& out);
// One :action block per schema of the given domain, with preconditions from
// NEEDS rows and effects from CAUSES rows.
void emit_pddl(const SchemaActionModel& m, const pddl::SchemaMap& map, std::ostream& out);

// Only the CAUSES and KEEPS rows, sorted, comparable to golden_effect_rows.
std::vector<std::string> effect_rows(const SchemaActionModel& m);

}  // namespace slaf

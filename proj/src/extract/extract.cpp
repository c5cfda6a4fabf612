#include <algorithm>

#include "slaf/errors.hpp"
#include "slaf/extract/extract.hpp"

namespace slaf {

std::uint32_t SatInstance::var(atom_t a) {
    auto [it, fresh] = var_of.emplace(a, static_cast<std::uint32_t>(vars.size()));
    if (fresh) vars.push_back(a);
    return it->second;
}

std::optional<std::uint32_t> SatInstance::find_var(atom_t a) const {
    auto it = var_of.find(a);
    if (it == var_of.end()) return std::nullopt;
    return it->second;
}

lit_t SatInstance::to_solver(lit_t l) const { return mk_lit(var_of.at(lit_atom(l)), lit_negated(l)); }

void SatInstance::add_group(const std::string& note, const Cnf& f) {
    groups.push_back({note, cnf.clauses.size(), f.clauses.size()});
    for (const auto& c : f.clauses)
        for (lit_t l : c) var(lit_atom(l));
    cnf.append(f);
}

void SatInstance::set_bias(const Cnf& f) {
    for (const auto& c : f.clauses)
        for (lit_t l : c) var(lit_atom(l));
    bias = f.clauses;
}

SatInstance make_instance(const Vocabulary& v, PropTable table, const Cnf& belief, bool with_needs, bool bias,
                          const Cnf& side_axioms) {
    SatInstance inst;
    inst.vocab = &v;
    inst.with_needs = with_needs;
    inst.table = std::move(table);
    for (const auto& per_action : inst.table.atoms)
        for (const auto& row : per_action)
            for (int k = 0; k < (with_needs ? kPropKinds : 3); ++k) inst.var(row[k]);
    inst.add_group("belief", belief);
    inst.add_group("vocab axioms", table_axioms(inst.table, with_needs));
    if (!side_axioms.clauses.empty()) inst.add_group("side axioms", side_axioms);
    if (bias && with_needs) inst.set_bias(bias_axioms(inst.table));
    return inst;
}

namespace {

std::vector<lit_t> solver_clause(const SatInstance& inst, const Clause& c) {
    std::vector<lit_t> out;
    out.reserve(c.size());
    for (lit_t l : c) out.push_back(inst.to_solver(l));
    return out;
}

// Returns false if the hard clauses are already contradictory.
bool load(SatSolver& s, const SatInstance& inst) {
    s.reserve_vars(inst.vars.size());
    for (const auto& c : inst.cnf.clauses)
        if (!s.add_clause(solver_clause(inst, c))) return false;
    return true;
}

SatResult run(SatSolver& s, const std::vector<lit_t>& assumptions, std::size_t& calls) {
    ++calls;
    const SatResult r = s.solve(assumptions);
    if (r == SatResult::Unknown) throw SolverFailure("embedded solver gave up");
    return r;
}

SchemaActionModel decode(const SatInstance& inst, const std::vector<std::uint8_t>& model, const ExtractOptions& opts) {
    SchemaActionModel m = SchemaActionModel::shaped_like(inst.table);
    auto val = [&](atom_t a) { return model[inst.var_of.at(a)] == 1; };
    for (std::size_t a = 0; a < m.actions.size(); ++a) {
        for (std::size_t p = 0; p < m.patterns[a].size(); ++p) {
            ModelRow& row = m.rows[a][p];
            if (val(inst.table.atom(a, p, PropKind::CausesPos))) row.effect = EffectTag::CausesPos;
            else if (val(inst.table.atom(a, p, PropKind::CausesNeg))) row.effect = EffectTag::CausesNeg;
            else row.effect = EffectTag::Keeps;
            if (inst.with_needs) {
                row.needs_pos = val(inst.table.atom(a, p, PropKind::NeedsPos));
                row.needs_neg = val(inst.table.atom(a, p, PropKind::NeedsNeg));
            } else if (opts.known_needs) {
                row.needs_pos = opts.known_needs->rows.at(a).at(p).needs_pos;
                row.needs_neg = opts.known_needs->rows.at(a).at(p).needs_neg;
            }
        }
    }
    return m;
}

std::string clause_text(const SatInstance& inst, const Clause& c) {
    std::string out = "(OR";
    for (lit_t l : c) out += " " + literal_name(*inst.vocab, l);
    return out + ")";
}

// Greedily adds each candidate to the assumption set when that stays
// satisfiable; the model is refreshed after every success.
void prefer(SatSolver& s, std::vector<lit_t>& base, const std::vector<lit_t>& candidates,
            std::vector<std::uint8_t>& model, std::size_t& calls) {
    for (lit_t c : candidates)
        if ((model[lit_atom(c)] == 1) != lit_negated(c)) base.push_back(c);
    for (lit_t c : candidates) {
        if ((model[lit_atom(c)] == 1) != lit_negated(c)) continue;
        base.push_back(c);
        if (run(s, base, calls) == SatResult::Sat) model = s.model();
        else base.pop_back();
    }
}

ExtractResult extract_external(const SatInstance& inst, const ExtractOptions& opts) {
    ExtractResult res;
    res.bias_clauses = inst.bias.size();
    res.needs_from_solver = inst.with_needs;
    std::vector<Clause> clauses;
    clauses.reserve(inst.cnf.clauses.size() + inst.bias.size());
    for (const auto& c : inst.cnf.clauses) clauses.push_back(solver_clause(inst, c));
    const std::size_t hard = clauses.size();
    for (const auto& c : inst.bias) clauses.push_back(solver_clause(inst, c));
    ++res.solver_calls;
    ExternalResult r = solve_external(*opts.external, inst.vars.size(), clauses);
    if (r.result == SatResult::Unsat && !inst.bias.empty()) {
        // No cores from the external tool: the bias is dropped as a whole.
        for (const auto& c : inst.bias) res.relaxed_bias.push_back(clause_text(inst, c));
        clauses.resize(hard);
        ++res.solver_calls;
        r = solve_external(*opts.external, inst.vars.size(), clauses);
    }
    if (r.result == SatResult::Unknown) throw SolverFailure("external solver returned UNKNOWN");
    if (r.result == SatResult::Unsat) return res;
    res.model = decode(inst, r.model, opts);
    return res;
}

}  // namespace

ExtractResult extract_model(const SatInstance& inst, const ExtractOptions& opts) {
    ExtractResult res;
    if (opts.external) {
        res = extract_external(inst, opts);
    } else {
        res.bias_clauses = inst.bias.size();
        res.needs_from_solver = inst.with_needs;
        SatSolver s(opts.seed);
        if (!load(s, inst)) return res;
        for (const auto& per_action : inst.table.atoms) {
            for (const auto& row : per_action) {
                s.set_phase(inst.var_of.at(row[static_cast<int>(PropKind::Keeps)]), true);
            }
        }
        std::vector<lit_t> selectors;
        for (const auto& c : inst.bias) {
            const std::uint32_t sel = s.new_var();
            auto lits = solver_clause(inst, c);
            lits.push_back(mk_lit(sel, true));
            s.add_clause(std::move(lits));
            selectors.push_back(mk_lit(sel));
        }
        std::vector<bool> active(selectors.size(), true);
        auto assumed = [&] {
            std::vector<lit_t> out;
            for (std::size_t i = 0; i < selectors.size(); ++i)
                if (active[i]) out.push_back(selectors[i]);
            return out;
        };
        std::vector<lit_t> base;
        for (;;) {
            base = assumed();
            if (run(s, base, res.solver_calls) == SatResult::Sat) break;
            std::vector<lit_t> core = s.conflict();
            if (core.empty()) return res;
            // Shrink to a minimal core by deletion, then relax all of it.
            for (std::size_t i = 0; i < core.size();) {
                std::vector<lit_t> trial = core;
                trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
                if (run(s, trial, res.solver_calls) == SatResult::Unsat) {
                    const auto& c = s.conflict();
                    std::vector<lit_t> next;
                    for (lit_t l : trial)
                        if (std::find(c.begin(), c.end(), l) != c.end()) next.push_back(l);
                    core = std::move(next);
                    if (core.empty()) return res;
                    i = 0;
                } else {
                    ++i;
                }
            }
            for (lit_t l : core) {
                const auto idx = static_cast<std::size_t>(std::find(selectors.begin(), selectors.end(), l) - selectors.begin());
                active[idx] = false;
                res.relaxed_bias.push_back(clause_text(inst, inst.bias[idx]));
            }
        }
        std::vector<std::uint8_t> model = s.model();
        if (opts.prefer_keeps) {
            std::vector<lit_t> keeps;
            for (const auto& per_action : inst.table.atoms)
                for (const auto& row : per_action) keeps.push_back(mk_lit(inst.var_of.at(row[static_cast<int>(PropKind::Keeps)])));
            prefer(s, base, keeps, model, res.solver_calls);
        }
        if (opts.prefer_no_needs && inst.with_needs) {
            std::vector<lit_t> no_needs;
            for (const auto& per_action : inst.table.atoms)
                for (const auto& row : per_action)
                    for (PropKind k : {PropKind::NeedsPos, PropKind::NeedsNeg})
                        no_needs.push_back(mk_lit(inst.var_of.at(row[static_cast<int>(k)]), true));
            prefer(s, base, no_needs, model, res.solver_calls);
        }
        res.model = decode(inst, model, opts);
    }
    if (res.model && !model_satisfies(inst, *res.model, opts.seed))
        throw Error("decoded model does not satisfy the instance");
    return res;
}

bool model_satisfies(const SatInstance& inst, const SchemaActionModel& m, std::uint64_t seed) {
    SatSolver s(seed);
    if (!load(s, inst)) return false;
    std::vector<lit_t> assumptions;
    for (std::size_t a = 0; a < m.actions.size(); ++a) {
        for (std::size_t p = 0; p < m.patterns[a].size(); ++p) {
            const ModelRow& row = m.rows[a][p];
            auto put = [&](PropKind k, bool value) {
                assumptions.push_back(mk_lit(inst.var_of.at(inst.table.atom(a, p, k)), !value));
            };
            put(PropKind::CausesPos, row.effect == EffectTag::CausesPos);
            put(PropKind::CausesNeg, row.effect == EffectTag::CausesNeg);
            put(PropKind::Keeps, row.effect == EffectTag::Keeps);
            if (inst.with_needs) {
                put(PropKind::NeedsPos, row.needs_pos);
                put(PropKind::NeedsNeg, row.needs_neg);
            }
        }
    }
    return s.solve(assumptions) == SatResult::Sat;
}

std::string to_string(QueryResult r) {
    switch (r) {
        case QueryResult::Entailed: return "entailed";
        case QueryResult::Refuted: return "refuted";
        default: return "unknown";
    }
}

QueryResult query_prop(const SatInstance& inst, lit_t p, const ExtractOptions& opts) {
    NnfStore s;
    return query_formula(inst, s, NnfStore::lit(p), opts);
}

QueryResult query_formula(const SatInstance& inst, NnfStore& store, NodeRef p, const ExtractOptions& opts) {
    // Atoms of the query that the instance does not mention get fresh variables.
    std::unordered_map<atom_t, std::uint32_t> extra;
    std::uint32_t next = static_cast<std::uint32_t>(inst.vars.size());
    auto encode = [&](const Cnf& f) {
        std::vector<Clause> out;
        for (const auto& c : f.clauses) {
            Clause lits;
            for (lit_t l : c) {
                const atom_t a = lit_atom(l);
                std::uint32_t v;
                if (auto found = inst.find_var(a)) v = *found;
                else if (auto it = extra.find(a); it != extra.end()) v = it->second;
                else v = extra[a] = next++;
                lits.push_back(mk_lit(v, lit_negated(l)));
            }
            out.push_back(std::move(lits));
        }
        return out;
    };
    const auto pos = encode(to_cnf(store, p));
    const auto neg = encode(to_cnf(store, store.negate(p)));

    auto satisfiable = [&](const std::vector<Clause>& with) {
        if (opts.external) {
            std::vector<Clause> all;
            for (const auto& c : inst.cnf.clauses) all.push_back(solver_clause(inst, c));
            all.insert(all.end(), with.begin(), with.end());
            const auto r = solve_external(*opts.external, next, all);
            if (r.result == SatResult::Unknown) throw SolverFailure("external solver returned UNKNOWN");
            return r.result == SatResult::Sat;
        }
        SatSolver s(opts.seed);
        if (!load(s, inst)) return false;
        s.reserve_vars(next);
        for (const auto& c : with)
            if (!s.add_clause(c)) return false;
        std::size_t calls = 0;
        return run(s, {}, calls) == SatResult::Sat;
    };
    if (!satisfiable(neg)) return QueryResult::Entailed;
    if (!satisfiable(pos)) return QueryResult::Refuted;
    return QueryResult::Unknown;
}

}  // namespace slaf

#include "slaf/engines/as.hpp"

#include "slaf/errors.hpp"
#include "slaf/logic/snapshot.hpp"

namespace slaf {

FluentFactor as_effect_update(NnfStore& s, const Vocabulary& v, const FluentFactor& x, std::size_t a,
                              std::size_t f, bool with_needs) {
    const NodeRef keeps = NnfStore::atom(v.keeps(a, f));
    const NodeRef cause_pos = NnfStore::atom(v.causes(a, f, true));
    const NodeRef cause_neg = NnfStore::atom(v.causes(a, f, false));
    FluentFactor out;
    if (with_needs) {
        const NodeRef needs_pos = NnfStore::atom(v.needs(a, f, true));
        const NodeRef needs_neg = NnfStore::atom(v.needs(a, f, false));
        out.ctx = s.mk_and({x.ctx, s.mk_or(s.negate(needs_pos), x.expl_pos), s.mk_or(s.negate(needs_neg), x.expl_neg)});
        out.expl_pos = s.mk_or(cause_pos, s.mk_and({keeps, s.negate(needs_neg), x.expl_pos}));
        out.expl_neg = s.mk_or(cause_neg, s.mk_and({keeps, s.negate(needs_pos), x.expl_neg}));
    } else {
        out.ctx = x.ctx;
        out.expl_pos = s.mk_or(cause_pos, s.mk_and(keeps, x.expl_pos));
        out.expl_neg = s.mk_or(cause_neg, s.mk_and(keeps, x.expl_neg));
    }
    return out;
}

AsBelief as_effect_update(NnfStore& s, const Vocabulary& v, const AsBelief& b, std::size_t a, bool with_needs) {
    AsBelief out;
    out.fluents.reserve(b.fluents.size());
    for (std::size_t f = 0; f < b.fluents.size(); ++f)
        out.fluents.push_back(as_effect_update(s, v, b.fluents[f], a, f, with_needs));
    return out;
}

FluentFactor as_observe(NnfStore& s, const FluentFactor& x, bool value) {
    FluentFactor out;
    out.ctx = s.mk_and(x.ctx, value ? x.expl_pos : x.expl_neg);
    out.expl_pos = value ? NnfStore::kTrue : NnfStore::kFalse;
    out.expl_neg = value ? NnfStore::kFalse : NnfStore::kTrue;
    return out;
}

AsBelief as_observe(NnfStore& s, const AsBelief& b, const std::vector<lit_t>& obs) {
    AsBelief out = b;
    std::vector<std::int8_t> seen(b.fluents.size(), -1);
    for (lit_t l : obs) {
        const std::size_t f = lit_atom(l);
        if (f >= b.fluents.size()) throw Error("observation mentions a non-fluent atom");
        const std::int8_t val = lit_negated(l) ? 0 : 1;
        if (seen[f] >= 0 && seen[f] != val) throw InconsistentObservation("observation holds both signs of a fluent");
        if (seen[f] == val) continue;
        seen[f] = val;
        out.fluents[f] = as_observe(s, out.fluents[f], val == 1);
    }
    return out;
}

NodeRef factor_denotation(NnfStore& s, const Vocabulary& v, std::size_t f, const FluentFactor& x) {
    return s.mk_and({s.mk_or(NnfStore::atom(v.fluent(f), true), x.expl_pos),
                     s.mk_or(NnfStore::atom(v.fluent(f)), x.expl_neg), x.ctx});
}

NodeRef denotation(NnfStore& s, const Vocabulary& v, const AsBelief& b) {
    std::vector<NodeRef> parts;
    parts.reserve(b.fluents.size());
    for (std::size_t f = 0; f < b.fluents.size(); ++f) parts.push_back(factor_denotation(s, v, f, b.fluents[f]));
    return s.mk_and(std::move(parts));
}

bool action_only(const NnfStore& s, const Vocabulary& v, const AsBelief& b) {
    for (const auto& x : b.fluents)
        for (NodeRef r : {x.expl_pos, x.expl_neg, x.ctx})
            for (atom_t a : s.atoms(r))
                if (v.is_fluent(a) || v.is_primed(a)) return false;
    return true;
}

std::string write_snapshot(const NnfStore& s, const Vocabulary& v, const AsBelief& b) {
    std::vector<NodeRef> roots;
    for (const auto& x : b.fluents) {
        roots.push_back(x.expl_pos);
        roots.push_back(x.expl_neg);
        roots.push_back(x.ctx);
    }
    return write_dag(s, roots, v);
}

AsBelief read_snapshot(const std::string& text, NnfStore& s, Vocabulary& v) {
    const auto roots = read_dag(text, s, v);
    if (roots.size() % 3 != 0) throw ParseError("snapshot root count is not a multiple of three");
    AsBelief b;
    for (std::size_t i = 0; i < roots.size(); i += 3) b.fluents.push_back({roots[i], roots[i + 1], roots[i + 2]});
    return b;
}

AsEngine::AsEngine(const Vocabulary& v, bool with_needs)
    : v_(v), with_needs_(with_needs), belief_(AsBelief::unknown(v.num_fluents())) {}

void AsEngine::check(std::size_t f) const {
    if (belief_.fluents[f].is_false())
        throw InconsistentBelief("belief became unsatisfiable on fluent " + v_.fluent_name(f), steps_);
}

void AsEngine::observe(const std::vector<lit_t>& obs) {
    belief_ = as_observe(store_, belief_, obs);
    for (lit_t l : obs) check(lit_atom(l));
}

void AsEngine::step(std::size_t a, const std::vector<lit_t>& obs) {
    ++steps_;
    belief_ = as_effect_update(store_, v_, belief_, a, with_needs_);
    observe(obs);
}

}  // namespace slaf

#include "slaf/engines/render.hpp"

#include <algorithm>
#include <bit>
#include <map>

namespace slaf {

bool merge_effect_triples(const Vocabulary& v, Clause& c) {
    // (action, fluent) -> bits: 1,2,4 positive causes+/causes-/keeps, 8,16,32 negative.
    std::map<std::pair<std::size_t, std::size_t>, unsigned> seen;
    bool any = false;
    for (lit_t l : c) {
        const atom_t x = lit_atom(l);
        if (!v.is_action_prop(x)) continue;
        const AtomInfo info = v.info(x);
        unsigned bit;
        switch (info.prop) {
        case PropKind::CausesPos: bit = 1; break;
        case PropKind::CausesNeg: bit = 2; break;
        case PropKind::Keeps: bit = 4; break;
        default: continue;
        }
        unsigned& m = seen[{info.action, info.fluent}];
        m |= lit_negated(l) ? bit << 3 : bit;
        any = true;
    }
    if (!any) return true;
    std::vector<lit_t> out;
    std::vector<std::pair<std::size_t, std::size_t>> replaced;
    for (auto& [key, m] : seen) {
        const unsigned pos = m & 7u, neg = m >> 3;
        if (pos == 7u) return false;
        if (std::popcount(neg) >= 2) return false;
        if (std::popcount(pos) == 2) {
            const unsigned third = 7u & ~pos;
            const PropKind k = third == 1 ? PropKind::CausesPos : third == 2 ? PropKind::CausesNeg : PropKind::Keeps;
            out.push_back(mk_lit(v.prop(key.first, k, key.second), true));
            replaced.push_back(key);
        }
    }
    if (replaced.empty()) return true;
    for (lit_t l : c) {
        const atom_t x = lit_atom(l);
        if (v.is_action_prop(x) && !lit_negated(l)) {
            const AtomInfo info = v.info(x);
            if (info.prop != PropKind::NeedsPos && info.prop != PropKind::NeedsNeg &&
                std::find(replaced.begin(), replaced.end(), std::pair<std::size_t, std::size_t>{info.action, info.fluent}) != replaced.end())
                continue;
        }
        out.push_back(l);
    }
    auto made = make_clause(std::move(out));
    if (!made) return false;
    c = std::move(*made);
    return true;
}

CnfStats stats_of(const Cnf& f) {
    return {f.clauses.size(), f.literal_count(), f.max_clause_length(), f.atoms().size()};
}

namespace {

CnfOptions cnf_options(const Vocabulary& v, const RenderOptions& opts) {
    CnfOptions o;
    o.clause_limit = opts.clause_limit;
    if (opts.merge_triples) o.rewrite = [&v](Clause& c) { return merge_effect_triples(v, c); };
    return o;
}

}  // namespace

Cnf render_belief(const NnfStore& s, const Vocabulary& v, const AsBelief& b, const RenderOptions& opts) {
    // Each factor is rendered on its own; conjunction of clause sets needs no
    // distribution, and the renderer's memo shares common explanation chains.
    CnfRenderer r(s, cnf_options(v, opts));
    Cnf out;
    for (std::size_t f = 0; f < b.fluents.size(); ++f) {
        const auto& x = b.fluents[f];
        for (const auto& [expl, lit] : {std::pair{x.expl_pos, mk_lit(v.fluent(f), true)},
                                        std::pair{x.expl_neg, mk_lit(v.fluent(f))}}) {
            for (Clause c : r.render(expl).clauses) {
                c.push_back(lit);
                if (auto made = make_clause(std::move(c))) {
                    if (opts.merge_triples && !merge_effect_triples(v, *made)) continue;
                    out.add(std::move(*made));
                }
            }
        }
        out.append(r.render(x.ctx));
    }
    simplify(out);
    return out;
}

Cnf render_belief(NnfStore& s, const Vocabulary& v, const PreBelief& b, const RenderOptions& opts) {
    Cnf out = render_belief(s, v, b.top, opts);
    std::vector<NodeRef> rest;
    for (const auto& g : b.groups) {
        std::vector<NodeRef> alts;
        for (const auto& br : g) alts.push_back(branch_denotation(s, v, br));
        rest.push_back(s.mk_or(std::move(alts)));
    }
    for (NodeRef r : b.frozen) rest.push_back(r);
    CnfRenderer r(s, cnf_options(v, opts));
    for (NodeRef n : rest) out.append(r.render(n));
    simplify(out);
    return out;
}

}  // namespace slaf

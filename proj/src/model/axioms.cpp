#include "slaf/model/axioms.hpp"

#include <algorithm>

namespace slaf {

NodeRef tau_eff(NnfStore& s, const Vocabulary& v, std::size_t a, bool with_needs) {
    std::vector<NodeRef> parts;
    for (std::size_t f = 0; f < v.num_fluents(); ++f) {
        const NodeRef keeps = NnfStore::atom(v.keeps(a, f));
        for (bool pos : {true, false}) {
            const NodeRef l = NnfStore::atom(v.fluent(f), !pos);
            const NodeRef l_next = NnfStore::atom(v.primed(f), !pos);
            if (with_needs) parts.push_back(s.mk_or(NnfStore::atom(v.needs(a, f, pos), true), l));
            // cause := a^l or (a^f° and l)
            const NodeRef cause = s.mk_or(NnfStore::atom(v.causes(a, f, pos)), s.mk_and(keeps, l));
            parts.push_back(s.mk_or(s.negate(cause), l_next));
            parts.push_back(s.mk_or(s.negate(l_next), cause));
        }
    }
    return s.mk_and(std::move(parts));
}

Cnf vocab_axioms_for(const Vocabulary& v, std::size_t a, std::size_t f, bool with_needs) {
    const atom_t cp = v.causes(a, f, true), cn = v.causes(a, f, false), k = v.keeps(a, f);
    Cnf out;
    out.add({mk_lit(cp), mk_lit(cn), mk_lit(k)});
    out.add({mk_lit(cp, true), mk_lit(cn, true)});
    out.add({mk_lit(cp, true), mk_lit(k, true)});
    out.add({mk_lit(cn, true), mk_lit(k, true)});
    if (with_needs) out.add({mk_lit(v.needs(a, f, true), true), mk_lit(v.needs(a, f, false), true)});
    for (auto& c : out.clauses) std::sort(c.begin(), c.end());
    return out;
}

Cnf vocab_axioms(const Vocabulary& v, bool with_needs) {
    Cnf out;
    for (std::size_t a = 0; a < v.num_actions(); ++a)
        for (std::size_t f = 0; f < v.num_fluents(); ++f) out.append(vocab_axioms_for(v, a, f, with_needs));
    std::sort(out.clauses.begin(), out.clauses.end());
    return out;
}

}  // namespace slaf

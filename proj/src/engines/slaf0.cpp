#include "slaf/engines/slaf0.hpp"

#include "slaf/errors.hpp"
#include "slaf/logic/resolution.hpp"
#include "slaf/model/axioms.hpp"

namespace slaf {

namespace {

void add_obs(Cnf& f, const std::vector<lit_t>& obs) {
    for (lit_t l : obs) f.add(Clause{l});
    simplify(f);
}

}  // namespace

Cnf slaf0_step(const Cnf& b, const NnfStore& s, NodeRef tau, const Vocabulary& v, const std::vector<lit_t>& obs,
               std::size_t clause_limit) {
    CnfOptions opts;
    opts.clause_limit = clause_limit;
    Cnf joint = conjoin(b, to_cnf(s, tau, opts));
    std::vector<atom_t> state;
    for (std::size_t f = 0; f < v.num_fluents(); ++f) state.push_back(v.fluent(f));
    Cnf out = rename_primed(eliminate_vars(joint, state, clause_limit), v);
    add_obs(out, obs);
    return out;
}

Cnf slaf0_step(const Cnf& b, const Vocabulary& v, std::size_t a, const std::vector<lit_t>& obs, bool with_needs,
               const std::vector<lit_t>* known_pre, std::size_t clause_limit) {
    NnfStore s;
    const NodeRef tau = tau_eff(s, v, a, with_needs);
    if (!known_pre) return slaf0_step(b, s, tau, v, obs, clause_limit);
    Cnf held = b;
    add_obs(held, *known_pre);
    return slaf0_step(held, s, tau, v, obs, clause_limit);
}

Cnf slaf0_fail(const Cnf& b, const std::vector<lit_t>& known_pre, const std::vector<lit_t>& obs) {
    Cnf out = b;
    std::vector<lit_t> violated;
    for (lit_t l : known_pre) violated.push_back(lit_not(l));
    if (auto c = make_clause(std::move(violated))) out.add(std::move(*c));
    add_obs(out, obs);
    return out;
}

NodeRef FactoredSlaf::step(NnfStore& s, NodeRef f, std::size_t a, const std::vector<lit_t>& obs) {
    std::unordered_map<NodeRef, NodeRef> memo;
    const NodeRef any = lang_.literal_slaf(s, a, std::nullopt);
    auto leaf = [&](NodeRef n) -> NodeRef {
        if (n == NnfStore::kTrue) return any;
        if (n == NnfStore::kFalse) return NnfStore::kFalse;
        if (NnfStore::is_lit(n)) {
            const lit_t l = NnfStore::lit_of(n);
            if (lit_atom(l) < lang_.num_fluents()) return lang_.literal_slaf(s, a, l);
            return s.mk_and(n, any);
        }
        return memo.at(n);
    };
    for (NodeRef n : s.topo_order(std::span<const NodeRef>(&f, 1))) {
        const auto span = s.children(n);
        std::vector<NodeRef> kids(span.begin(), span.end());
        for (NodeRef& c : kids) c = leaf(c);
        memo.emplace(n, s.kind(n) == NodeKind::And ? s.mk_and(std::move(kids)) : s.mk_or(std::move(kids)));
    }
    std::vector<NodeRef> parts{leaf(f)};
    for (lit_t l : obs) parts.push_back(NnfStore::lit(l));
    return s.mk_and(std::move(parts));
}

}  // namespace slaf

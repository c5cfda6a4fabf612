#include "slaf/model/tiny.hpp"

#include "slaf/errors.hpp"

namespace slaf {

namespace {

constexpr std::size_t kClauseCap = 1'000'000;

// Literals of the complete term g (over P or P').
std::vector<lit_t> term_lits(std::uint64_t g, std::size_t nf, bool primed, const Vocabulary& v) {
    std::vector<lit_t> lits;
    for (std::size_t p = 0; p < nf; ++p) lits.push_back(mk_lit(primed ? v.primed(p) : v.fluent(p), !((g >> p) & 1u)));
    return lits;
}

}  // namespace

TinyLanguage::TinyLanguage(Vocabulary& v) : nf_(v.num_fluents()), na_(v.num_actions()), v_(v) {
    if (nf_ > kMaxFluents) throw VocabularyTooLarge("tiny language supports at most 6 fluents");
    for (std::size_t a = 0; a < na_; ++a)
        for (std::uint64_t g = 0; g < num_states(); ++g) {
            std::string bits;
            for (std::size_t p = 0; p < nf_; ++p) bits += ((g >> p) & 1u) ? '1' : '0';
            for (std::size_t i = 0; i < 2 * nf_; ++i)
                atoms_.push_back(v.intern("(" + v.action_name(a) + " CAUSES " + literal_name(v, static_cast<lit_t>(i)) +
                                          " IF " + bits + ")"));
        }
}

atom_t TinyLanguage::eff(std::size_t a, std::uint64_t g, lit_t l) const {
    return atoms_[(a * num_states() + g) * 2 * nf_ + l];
}

std::vector<atom_t> TinyLanguage::atoms_of(std::size_t a) const {
    const std::size_t per = num_states() * 2 * nf_;
    return {atoms_.begin() + static_cast<std::ptrdiff_t>(a * per), atoms_.begin() + static_cast<std::ptrdiff_t>((a + 1) * per)};
}

NodeRef TinyLanguage::teff(NnfStore& s, std::size_t a) const {
    std::vector<NodeRef> parts;
    for (std::size_t i = 0; i < 2 * nf_; ++i) {
        const lit_t l = static_cast<lit_t>(i);
        const NodeRef l_next = NnfStore::atom(v_.primed(lit_atom(l)), lit_negated(l));
        std::vector<NodeRef> explanations;
        for (std::uint64_t g = 0; g < num_states(); ++g) {
            const auto gl = term_lits(g, nf_, false, v_);
            // (a_G^l and G) => l'
            std::vector<NodeRef> clause{NnfStore::atom(eff(a, g, l), true), l_next};
            for (lit_t x : gl) clause.push_back(NnfStore::lit(lit_not(x)));
            parts.push_back(s.mk_or(std::move(clause)));
            std::vector<NodeRef> conj{NnfStore::atom(eff(a, g, l))};
            for (lit_t x : gl) conj.push_back(NnfStore::lit(x));
            explanations.push_back(s.mk_and(std::move(conj)));
        }
        // l' => some (a_G^l and G)
        explanations.push_back(s.negate(l_next));
        parts.push_back(s.mk_or(std::move(explanations)));
    }
    return s.mk_and(std::move(parts));
}

NodeRef TinyLanguage::coverage(NnfStore& s, std::size_t a) const {
    std::vector<NodeRef> parts;
    for (std::uint64_t g = 0; g < num_states(); ++g)
        for (std::size_t p = 0; p < nf_; ++p)
            parts.push_back(s.mk_or(NnfStore::atom(eff(a, g, mk_lit(static_cast<atom_t>(p)))),
                                    NnfStore::atom(eff(a, g, mk_lit(static_cast<atom_t>(p), true)))));
    return s.mk_and(std::move(parts));
}

Cnf TinyLanguage::exclusivity(std::size_t a) const {
    Cnf out;
    for (std::uint64_t g = 0; g < num_states(); ++g)
        for (std::size_t p = 0; p < nf_; ++p) {
            const atom_t x = eff(a, g, mk_lit(static_cast<atom_t>(p))), y = eff(a, g, mk_lit(static_cast<atom_t>(p), true));
            out.add(*make_clause({mk_lit(x), mk_lit(y)}));
            out.add(*make_clause({mk_lit(x, true), mk_lit(y, true)}));
        }
    simplify(out);
    return out;
}

NodeRef TinyLanguage::literal_slaf(NnfStore& s, std::size_t a, std::optional<lit_t> l) {
    if (cache_store_ != &s) {
        cache_.clear();
        cache_store_ = &s;
    }
    const std::pair<std::size_t, std::int64_t> key{a, l ? static_cast<std::int64_t>(*l) : -1};
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;

    std::vector<std::uint64_t> gs;
    for (std::uint64_t g = 0; g < num_states(); ++g)
        if (!l || (((g >> lit_atom(*l)) & 1u) != 0) != lit_negated(*l)) gs.push_back(g);
    const std::size_t nl = 2 * nf_;
    double count = 1;
    for (std::size_t i = 0; i < gs.size(); ++i) count *= static_cast<double>(nl);
    if (count > static_cast<double>(kClauseCap)) throw ClauseExplosion("closed form needs too many clauses");

    // One clause per selection (l_1..l_m): OR_i (l_i or a_{G_i}^{not l_i}).
    std::vector<NodeRef> parts{coverage(s, a)};
    std::vector<std::size_t> sel(gs.size(), 0);
    for (;;) {
        std::vector<lit_t> lits;
        for (std::size_t i = 0; i < gs.size(); ++i) {
            const lit_t li = static_cast<lit_t>(sel[i]);
            lits.push_back(mk_lit(v_.fluent(lit_atom(li)), lit_negated(li)));
            lits.push_back(mk_lit(eff(a, gs[i], lit_not(li))));
        }
        if (auto c = make_clause(std::move(lits))) parts.push_back(s.mk_clause(*c));
        std::size_t i = 0;
        for (; i < sel.size(); ++i) {
            if (++sel[i] < nl) break;
            sel[i] = 0;
        }
        if (i == sel.size()) break;
    }
    const NodeRef r = s.mk_and(std::move(parts));
    cache_.emplace(key, r);
    return r;
}

NodeRef TinyLanguage::theory(NnfStore& s, const TinyRelation& r) const {
    std::vector<NodeRef> parts;
    for (std::size_t a = 0; a < na_; ++a)
        for (std::uint64_t g = 0; g < num_states(); ++g) {
            for (std::size_t p = 0; p < nf_; ++p) {
                const atom_t pos = eff(a, g, mk_lit(static_cast<atom_t>(p)));
                const atom_t neg = eff(a, g, mk_lit(static_cast<atom_t>(p), true));
                parts.push_back(s.mk_or(NnfStore::atom(pos), NnfStore::atom(neg)));  // Th1
                if (r[a][g]) {                                                         // Th0
                    const bool val = (*r[a][g] >> p) & 1u;
                    parts.push_back(NnfStore::atom(val ? pos : neg));
                    parts.push_back(NnfStore::atom(val ? neg : pos, true));
                }
            }
            if (!r[a][g]) {  // Th2
                std::vector<NodeRef> any;
                for (std::size_t p = 0; p < nf_; ++p)
                    any.push_back(s.mk_and(NnfStore::atom(eff(a, g, mk_lit(static_cast<atom_t>(p)))),
                                           NnfStore::atom(eff(a, g, mk_lit(static_cast<atom_t>(p), true)))));
                parts.push_back(s.mk_or(std::move(any)));
            }
        }
    return s.mk_and(std::move(parts));
}

}  // namespace slaf

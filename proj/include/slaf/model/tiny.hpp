#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "slaf/logic/cnf.hpp"
#include "slaf/logic/nnf.hpp"

namespace slaf {

// Deterministic relation over a tiny domain: next[a][s] is the successor
// state mask of s under a, or nullopt when a is not executable in s.
using TinyRelation = std::vector<std::vector<std::optional<std::uint64_t>>>;

// General effect language with one proposition a_G^l per action a, complete
// term G (a state) and fluent literal l. Atoms are interned into the given
// vocabulary as "(a CAUSES l IF bits)", bits listing G's fluents in order.
class TinyLanguage {
public:
    static constexpr std::size_t kMaxFluents = 6;

    explicit TinyLanguage(Vocabulary& v);

    std::size_t num_fluents() const { return nf_; }
    std::size_t num_actions() const { return na_; }
    std::size_t num_states() const { return std::size_t{1} << nf_; }

    atom_t eff(std::size_t a, std::uint64_t g, lit_t l) const;
    const std::vector<atom_t>& atoms() const { return atoms_; }
    std::vector<atom_t> atoms_of(std::size_t a) const;

    // Effect and explanation-closure axioms for a, over P, P' and a's atoms.
    NodeRef teff(NnfStore& s, std::size_t a) const;
    // Conjunction of (a_G^l or a_G^{not l}).
    NodeRef coverage(NnfStore& s, std::size_t a) const;
    // Coverage plus not(a_G^l and a_G^{not l}): exactly one per (G, fluent).
    Cnf exclusivity(std::size_t a) const;

    // Closed form of SLAF[a](l) for a fluent literal l, or of SLAF[a](TRUE)
    // when l is nullopt. Results are cached per (a, l).
    NodeRef literal_slaf(NnfStore& s, std::size_t a, std::optional<lit_t> l);

    // Th0 u Th1 u Th2 for a relation.
    NodeRef theory(NnfStore& s, const TinyRelation& r) const;

    // The relation an interpretation denotes (with inertia when both effect
    // atoms of a fluent are false). value(atom) gives the interpretation.
    template <class F>
    TinyRelation relation_of(F value) const {
        TinyRelation r(na_, std::vector<std::optional<std::uint64_t>>(num_states()));
        for (std::size_t a = 0; a < na_; ++a)
            for (std::uint64_t st = 0; st < num_states(); ++st) {
                std::uint64_t next = 0;
                bool ok = true;
                for (std::size_t p = 0; p < nf_; ++p) {
                    const bool pos = value(eff(a, st, mk_lit(static_cast<atom_t>(p))));
                    const bool neg = value(eff(a, st, mk_lit(static_cast<atom_t>(p), true)));
                    if (pos && neg) ok = false;
                    if (pos || (((st >> p) & 1u) && !neg)) next |= 1ull << p;
                }
                if (ok) r[a][st] = next;
            }
        return r;
    }

private:
    std::size_t nf_, na_;
    const Vocabulary& v_;
    std::vector<atom_t> atoms_;  // [(a * states + g) * 2nf + lit]
    std::map<std::pair<std::size_t, std::int64_t>, NodeRef> cache_;
    const NnfStore* cache_store_ = nullptr;
};

}  // namespace slaf

#pragma once

#include <cstddef>

#include "slaf/engines/as.hpp"
#include "slaf/engines/pre.hpp"
#include "slaf/logic/cnf.hpp"

namespace slaf {

// Clause rewrite valid under the exactly-one axioms over
// {a CAUSES f, a CAUSES not f, a KEEPS f}: two positive atoms of one triple
// become the negation of the third, all three make the clause true, and two
// negative atoms of one triple also make it true. Returns false when the
// clause should be dropped.
bool merge_effect_triples(const Vocabulary& v, Clause& c);

struct RenderOptions {
    bool merge_triples = false;
    std::size_t clause_limit = 10'000'000;
};

struct CnfStats {
    std::size_t clauses = 0;
    std::size_t literals = 0;
    std::size_t max_len = 0;
    std::size_t vars = 0;
};

CnfStats stats_of(const Cnf& f);

Cnf render_belief(const NnfStore& s, const Vocabulary& v, const AsBelief& b, const RenderOptions& opts = {});
Cnf render_belief(NnfStore& s, const Vocabulary& v, const PreBelief& b, const RenderOptions& opts = {});

}  // namespace slaf

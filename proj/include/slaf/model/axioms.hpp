#pragma once

#include "slaf/logic/cnf.hpp"
#include "slaf/logic/nnf.hpp"

namespace slaf {

// Pre and Eff conjuncts for every fluent, over fluents, primed fluents and
// the revised action propositions of action a. Without needs atoms the
// precondition part is omitted (known-precondition mode).
NodeRef tau_eff(NnfStore& store, const Vocabulary& v, std::size_t a, bool with_needs = true);

// Exactly-one over {causes f, causes not f, keeps f} and at most one of the
// two needs atoms, for every action and fluent.
Cnf vocab_axioms(const Vocabulary& v, bool with_needs = true);
Cnf vocab_axioms_for(const Vocabulary& v, std::size_t a, std::size_t f, bool with_needs = true);

}  // namespace slaf

#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "slaf/logic/cnf.hpp"
#include "slaf/logic/nnf.hpp"
#include "slaf/model/tiny.hpp"

namespace slaf {

// Consequence-finding step with arbitrary transition axioms tau over P, P'
// and action atoms: CNF(b and tau), resolve away P, rename P' to P, conjoin o.
Cnf slaf0_step(const Cnf& b, const NnfStore& s, NodeRef tau, const Vocabulary& v, const std::vector<lit_t>& obs,
               std::size_t clause_limit = 1'000'000);

// Same step with the revised-language axioms of a successful action. With a
// known precondition the term is conjoined before progressing.
Cnf slaf0_step(const Cnf& b, const Vocabulary& v, std::size_t a, const std::vector<lit_t>& obs,
               bool with_needs = true, const std::vector<lit_t>* known_pre = nullptr,
               std::size_t clause_limit = 1'000'000);

// A failed action leaves the state alone: b and (some precondition literal is
// false) and o.
Cnf slaf0_fail(const Cnf& b, const std::vector<lit_t>& known_pre, const std::vector<lit_t>& obs);

// Distributes progression over the connectives of f in the general effect
// language: fluent literals map to literal_slaf(a, l), action literals p to
// p and literal_slaf(a, TRUE). The observation is conjoined on top.
class FactoredSlaf {
public:
    explicit FactoredSlaf(TinyLanguage& lang) : lang_(lang) {}
    NodeRef step(NnfStore& s, NodeRef f, std::size_t a, const std::vector<lit_t>& obs);

private:
    TinyLanguage& lang_;
};

}  // namespace slaf

#pragma once

#include <cstdint>
#include <iosfwd>
#include <unordered_map>
#include <vector>

#include "slaf/logic/cnf.hpp"
#include "slaf/logic/nnf.hpp"

namespace slaf {

// Drops every clause mentioning x and adds all non-tautological resolvents on
// x, then removes subsumed clauses. The result is equivalent to exists x. f.
Cnf resolve_out(const Cnf& f, atom_t x, std::size_t clause_limit = 10'000'000);

// Sequential resolve_out. The next variable is always the one occurring in the
// fewest clauses, recounted after every elimination.
Cnf eliminate_vars(const Cnf& f, const std::vector<atom_t>& xs, std::size_t clause_limit = 10'000'000);

// Maps primed fluents back to their unprimed atoms. Throws MixedVocabulary if
// an unprimed fluent is still present.
Cnf rename_primed(const Cnf& f, const Vocabulary& v);

// Total assignments over vocab (bit i of each mask is vocab[i]) that satisfy
// the formula. Throws VocabularyTooLarge above max_atoms.
std::vector<std::uint64_t> enumerate_models(const NnfStore& store, NodeRef root, const std::vector<atom_t>& vocab,
                                            std::size_t max_atoms = 24);
std::vector<std::uint64_t> enumerate_models(const Cnf& f, const std::vector<atom_t>& vocab,
                                            std::size_t max_atoms = 24);

// Existential projection of a model list onto a sub-vocabulary.
std::vector<std::uint64_t> project_models(const std::vector<std::uint64_t>& models, const std::vector<atom_t>& vocab,
                                          const std::vector<atom_t>& onto);

struct DimacsMap {
    std::vector<atom_t> index_to_atom;  // slot 0 unused
    std::unordered_map<atom_t, int> atom_to_index;
};

// Writes "c var i = name" lines, the problem line and the clauses. Variables
// are numbered by ascending atom id.
DimacsMap write_dimacs(const Cnf& f, std::ostream& out, const Vocabulary& v);
DimacsMap dimacs_map_for(const Cnf& f);

// Reads a DIMACS file. Variables named in "c var" comments are resolved
// through the vocabulary (interning unknown names); unnamed variables become
// interned atoms "v<i>".
Cnf read_dimacs(std::istream& in, Vocabulary& v, DimacsMap* map_out = nullptr);

}  // namespace slaf

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "slaf/logic/vocabulary.hpp"

namespace slaf {

// Sorted, duplicate-free literal list. Never contains both signs of an atom.
using Clause = std::vector<lit_t>;

// Canonicalizes a literal list. Returns nullopt for a tautology.
std::optional<Clause> make_clause(std::vector<lit_t> lits);

// Union of two canonical clauses; nullopt if the result is a tautology.
std::optional<Clause> merge_clauses(const Clause& a, const Clause& b);

// True iff every literal of a occurs in b (both canonical).
bool clause_subset(const Clause& a, const Clause& b);

// TRUE is the empty clause set, FALSE is {()}.
struct Cnf {
    std::vector<Clause> clauses;

    static Cnf truth() { return {}; }
    static Cnf falsity() { return Cnf{{Clause{}}}; }

    bool is_true() const { return clauses.empty(); }
    bool is_false() const;
    std::size_t max_clause_length() const;
    std::size_t literal_count() const;
    std::vector<atom_t> atoms() const;

    void add(Clause c) { clauses.push_back(std::move(c)); }
    void append(const Cnf& other);

    bool operator==(const Cnf& other) const { return clauses == other.clauses; }
};

// Removes duplicates and subsumed clauses and sorts the result. A formula with
// the empty clause collapses to FALSE.
void simplify(Cnf& f);
Cnf simplified(Cnf f);

Cnf conjoin(const Cnf& a, const Cnf& b);

bool evaluate(const Cnf& f, const std::vector<bool>& assignment_by_atom);

}  // namespace slaf

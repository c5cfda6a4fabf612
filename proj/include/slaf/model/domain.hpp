#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "slaf/logic/vocabulary.hpp"

namespace slaf {

// Back-reference from a ground atom to the schema it instantiates.
struct SchemaRef {
    std::size_t schema = SIZE_MAX;  // predicate or action-schema index
    std::vector<std::size_t> args;  // object indices
};

struct GroundDomain {
    std::string name;
    std::vector<std::string> fluents;
    std::vector<std::string> actions;
    // Filled by the grounder; empty for hand-built toy domains.
    std::vector<SchemaRef> fluent_refs;
    std::vector<SchemaRef> action_refs;

    GroundDomain() = default;
    GroundDomain(std::string n, std::vector<std::string> fs, std::vector<std::string> as);

    std::size_t num_fluents() const { return fluents.size(); }
    std::size_t num_actions() const { return actions.size(); }
    std::optional<std::size_t> fluent_index(const std::string& n) const;
    std::optional<std::size_t> action_index(const std::string& n) const;
    Vocabulary vocabulary() const { return Vocabulary(fluents, actions); }

    // Must be called after fluents/actions change.
    void reindex();

private:
    std::unordered_map<std::string, std::size_t> fluent_idx_, action_idx_;
};

// A world state: bit f is true iff fluent f holds.
using State = std::vector<bool>;

// Literal over fluent indices (same encoding as atom literals; fluent atom ids
// coincide with fluent indices in every Vocabulary).
inline lit_t fluent_lit(std::size_t f, bool positive) { return mk_lit(static_cast<atom_t>(f), !positive); }

inline bool holds(const State& s, lit_t l) { return s[lit_atom(l)] != lit_negated(l); }

std::uint64_t state_mask(const State& s);
State state_from_mask(std::uint64_t m, std::size_t n);

}  // namespace slaf

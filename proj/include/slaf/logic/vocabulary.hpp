#pragma once

#include <cstdint>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace slaf {

using atom_t = std::uint32_t;
using lit_t = std::uint32_t;

// Literal encoding: atom * 2 + (negated ? 1 : 0). Sorting literal codes orders
// by atom id first and sign second, which is the canonical clause order.
constexpr lit_t mk_lit(atom_t a, bool negated = false) { return (a << 1) | (negated ? 1u : 0u); }
constexpr atom_t lit_atom(lit_t l) { return l >> 1; }
constexpr bool lit_negated(lit_t l) { return (l & 1u) != 0; }
constexpr lit_t lit_not(lit_t l) { return l ^ 1u; }

// Kinds of revised-language action propositions, in atom-numbering order.
enum class PropKind : std::uint8_t { CausesPos = 0, CausesNeg = 1, Keeps = 2, NeedsPos = 3, NeedsNeg = 4 };
constexpr int kPropKinds = 5;

enum class AtomKind : std::uint8_t { Fluent, Primed, ActionProp, Extra };

struct AtomInfo {
    AtomKind kind;
    std::uint32_t fluent = 0;
    std::uint32_t action = 0;
    PropKind prop = PropKind::Keeps;
};

// Atom table for one ground domain. Fluents, primed fluents and the revised
// action propositions get arithmetic ids (fluents first, then primed fluents,
// then props ordered by action, kind, fluent). Everything else (schema props,
// tiny-language effect atoms, free test atoms) is interned after that range.
// Interning is safe under concurrent readers; inserts take a unique lock.
class Vocabulary {
public:
    Vocabulary() = default;
    Vocabulary(std::vector<std::string> fluents, std::vector<std::string> actions);
    Vocabulary(const Vocabulary& other);
    Vocabulary& operator=(const Vocabulary& other);

    std::size_t num_fluents() const { return fluents_.size(); }
    std::size_t num_actions() const { return actions_.size(); }
    const std::string& fluent_name(std::size_t f) const { return fluents_[f]; }
    const std::string& action_name(std::size_t a) const { return actions_[a]; }
    const std::vector<std::string>& fluent_names() const { return fluents_; }
    const std::vector<std::string>& action_names() const { return actions_; }

    atom_t fluent(std::size_t f) const { return static_cast<atom_t>(f); }
    atom_t primed(std::size_t f) const { return static_cast<atom_t>(num_fluents() + f); }
    atom_t prop(std::size_t a, PropKind k, std::size_t f) const {
        const std::size_t p = num_fluents();
        return static_cast<atom_t>(2 * p + (a * kPropKinds + static_cast<std::size_t>(k)) * p + f);
    }
    atom_t causes(std::size_t a, std::size_t f, bool positive) const {
        return prop(a, positive ? PropKind::CausesPos : PropKind::CausesNeg, f);
    }
    atom_t keeps(std::size_t a, std::size_t f) const { return prop(a, PropKind::Keeps, f); }
    atom_t needs(std::size_t a, std::size_t f, bool positive) const {
        return prop(a, positive ? PropKind::NeedsPos : PropKind::NeedsNeg, f);
    }

    // First id after the arithmetic range.
    atom_t base_size() const { return base_; }
    std::size_t size() const;

    AtomInfo info(atom_t a) const;
    bool is_fluent(atom_t a) const { return a < num_fluents(); }
    bool is_primed(atom_t a) const { return a >= num_fluents() && a < 2 * num_fluents(); }
    bool is_action_prop(atom_t a) const { return a >= 2 * num_fluents() && a < base_; }
    bool is_extra(atom_t a) const { return a >= base_; }

    std::string name(atom_t a) const;
    std::optional<atom_t> find(std::string_view name) const;
    std::optional<std::size_t> find_fluent(std::string_view name) const;
    std::optional<std::size_t> find_action(std::string_view name) const;

    // Interns a free atom by name; returns the existing id if known.
    atom_t intern(const std::string& name);

private:
    std::vector<std::string> fluents_;
    std::vector<std::string> actions_;
    std::unordered_map<std::string, std::uint32_t> fluent_index_;
    std::unordered_map<std::string, std::uint32_t> action_index_;
    atom_t base_ = 0;

    mutable std::shared_mutex mu_;
    std::vector<std::string> extras_;
    std::unordered_map<std::string, atom_t> extra_index_;
};

std::string literal_name(const Vocabulary& v, lit_t l);

}  // namespace slaf

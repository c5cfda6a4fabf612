#pragma once

#include <string>
#include <vector>

#include "slaf/logic/nnf.hpp"

namespace slaf {

// One fluent's share of a fluent-factored formula:
// (not f or expl_pos) and (f or expl_neg) and ctx, all three over action
// propositions only.
struct FluentFactor {
    NodeRef expl_pos = NnfStore::kTrue;
    NodeRef expl_neg = NnfStore::kTrue;
    NodeRef ctx = NnfStore::kTrue;

    bool operator==(const FluentFactor&) const = default;
    bool trivial() const { return expl_pos == NnfStore::kTrue && expl_neg == NnfStore::kTrue && ctx == NnfStore::kTrue; }
    // Structurally false: no value of f is possible or the context failed.
    bool is_false() const {
        return ctx == NnfStore::kFalse || (expl_pos == NnfStore::kFalse && expl_neg == NnfStore::kFalse);
    }
};

struct AsBelief {
    std::vector<FluentFactor> fluents;

    static AsBelief unknown(std::size_t n) { return {std::vector<FluentFactor>(n)}; }
    bool operator==(const AsBelief&) const = default;
};

// Progression by a successfully executed action. With needs atoms:
//   ctx    := ctx and (not a[f] or expl_f) and (not a[not f] or expl_not_f)
//   expl_l := a^l or (a^f° and not a[not l] and expl_l)
// Without them (known preconditions) the ctx update vanishes and expl_l :=
// a^l or (a^f° and expl_l).
FluentFactor as_effect_update(NnfStore& s, const Vocabulary& v, const FluentFactor& x, std::size_t a,
                              std::size_t f, bool with_needs = true);
AsBelief as_effect_update(NnfStore& s, const Vocabulary& v, const AsBelief& b, std::size_t a,
                          bool with_needs = true);

// Unit resolution with an observed literal of the factor's fluent.
FluentFactor as_observe(NnfStore& s, const FluentFactor& x, bool value);
// Throws InconsistentObservation when obs holds both signs of a fluent.
AsBelief as_observe(NnfStore& s, const AsBelief& b, const std::vector<lit_t>& obs);

NodeRef factor_denotation(NnfStore& s, const Vocabulary& v, std::size_t f, const FluentFactor& x);
NodeRef denotation(NnfStore& s, const Vocabulary& v, const AsBelief& b);

// Checks that no fluent atom occurs inside any component.
bool action_only(const NnfStore& s, const Vocabulary& v, const AsBelief& b);

// Roots are listed fluent by fluent as (expl_pos expl_neg ctx).
std::string write_snapshot(const NnfStore& s, const Vocabulary& v, const AsBelief& b);
AsBelief read_snapshot(const std::string& text, NnfStore& s, Vocabulary& v);

// Stateful driver that owns the node store and tracks the step index for
// diagnostics.
class AsEngine {
public:
    explicit AsEngine(const Vocabulary& v, bool with_needs = true);

    void observe(const std::vector<lit_t>& obs);
    void step(std::size_t a, const std::vector<lit_t>& obs);

    const AsBelief& belief() const { return belief_; }
    NnfStore& store() { return store_; }
    const NnfStore& store() const { return store_; }
    const Vocabulary& vocabulary() const { return v_; }
    std::size_t steps() const { return steps_; }
    bool with_needs() const { return with_needs_; }
    NodeRef denotation() { return slaf::denotation(store_, v_, belief_); }

private:
    void check(std::size_t fluent) const;

    const Vocabulary& v_;
    bool with_needs_;
    NnfStore store_;
    AsBelief belief_;
    std::size_t steps_ = 0;
};

}  // namespace slaf

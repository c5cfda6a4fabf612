#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "slaf/engines/as.hpp"

namespace slaf {

// Sparse fluent-factored formula. Fluents without an entry carry the trivial
// factor; inside a PreBelief this is exact because the top conjunct always
// implies whatever the trivial factor would have become.
struct PreBranch {
    std::vector<std::pair<std::uint32_t, FluentFactor>> comps;  // sorted by fluent

    bool is_false() const;
    bool operator==(const PreBranch&) const = default;
};

// top and (AND_i OR_j branch_ij) and (AND frozen). Frozen entries are
// disjunctions over action propositions only, which progression leaves alone.
struct PreBelief {
    AsBelief top;
    std::vector<std::vector<PreBranch>> groups;
    std::vector<NodeRef> frozen;

    static PreBelief unknown(std::size_t n) { return {AsBelief::unknown(n), {}, {}}; }
};

// One filtering step with known precondition term pre_a. A failed step adds
// the disjunction of "precondition literal i was false" and then observes o;
// a successful one observes pre_a, progresses, and observes o, on every
// component. merge_common runs afterwards.
PreBelief pre_step(NnfStore& s, const Vocabulary& v, const PreBelief& b, std::size_t a, bool ok,
                   const std::vector<lit_t>& obs, const std::vector<lit_t>& pre_a);

// Drops false branches, collapses single-branch groups into top, pulls
// factors (or just their explanation parts) shared by every branch of a
// group into top, and freezes groups left with action-only branches.
// Returns false if some group lost all of its branches.
bool merge_common(NnfStore& s, PreBelief& b);

NodeRef branch_denotation(NnfStore& s, const Vocabulary& v, const PreBranch& br);
NodeRef denotation(NnfStore& s, const Vocabulary& v, const PreBelief& b);

class PreEngine {
public:
    PreEngine(const Vocabulary& v, std::vector<std::vector<lit_t>> known_pre);

    void observe(const std::vector<lit_t>& obs);
    void step(std::size_t a, bool ok, const std::vector<lit_t>& obs);

    const PreBelief& belief() const { return belief_; }
    NnfStore& store() { return store_; }
    const Vocabulary& vocabulary() const { return v_; }
    std::size_t steps() const { return steps_; }
    const std::vector<lit_t>& precondition(std::size_t a) const { return pre_[a]; }
    std::size_t max_precondition() const;
    NodeRef denotation() { return slaf::denotation(store_, v_, belief_); }

private:
    const Vocabulary& v_;
    std::vector<std::vector<lit_t>> pre_;
    NnfStore store_;
    PreBelief belief_;
    std::size_t steps_ = 0;
};

}  // namespace slaf

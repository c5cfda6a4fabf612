#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "slaf/model/domain.hpp"

namespace slaf {

enum class Effect : std::uint8_t { CausesTrue = 0, CausesFalse = 1, Keeps = 2 };

// Unconditional STRIPS model. Per action: a consistent precondition term and
// a sparse effect term (fluents absent from it are kept).
class StripsActionModel {
public:
    StripsActionModel() = default;
    StripsActionModel(std::size_t fluents, std::size_t actions);

    std::size_t num_fluents() const { return nf_; }
    std::size_t num_actions() const { return pre_.size(); }

    Effect effect(std::size_t a, std::size_t f) const;
    void set_effect(std::size_t a, std::size_t f, Effect e);
    const std::vector<lit_t>& effects(std::size_t a) const { return eff_[a]; }

    // Precondition literals over fluent indices, sorted.
    const std::vector<lit_t>& pre(std::size_t a) const { return pre_[a]; }
    void set_pre(std::size_t a, std::vector<lit_t> lits);
    // Precondition status of f: +1 needs f, -1 needs not f, 0 neither.
    int needs(std::size_t a, std::size_t f) const;

    bool executable(const State& s, std::size_t a) const;
    bool operator==(const StripsActionModel& o) const { return nf_ == o.nf_ && pre_ == o.pre_ && eff_ == o.eff_; }
    bool operator<(const StripsActionModel& o) const { return std::tie(pre_, eff_) < std::tie(o.pre_, o.eff_); }

private:
    std::size_t nf_ = 0;
    std::vector<std::vector<lit_t>> pre_;
    std::vector<std::vector<lit_t>> eff_;
};

// nullopt iff a precondition literal is false in s.
std::optional<State> apply(const StripsActionModel& m, const State& s, std::size_t a);
// Same as apply but writes in place; returns false (s untouched) on failure.
bool apply_in_place(const StripsActionModel& m, State& s, std::size_t a);

// "a causes F" / "a keeps f" rules with no conditions.
struct EffectRule {
    std::size_t action;
    std::size_t fluent;
    Effect effect;
};

// Builds a model from a complete rule set; throws Error if a (a,f) pair is
// missing or listed twice. Preconditions are left empty.
StripsActionModel from_description(const GroundDomain& d, const std::vector<EffectRule>& rules);
std::vector<EffectRule> to_description(const StripsActionModel& m);

// Truth assignment (indexed by atom id, length v.base_size()) encoding the
// pair (s, m). Primed atoms are false; needs atoms are set iff with_needs.
std::vector<bool> encode_pair(const Vocabulary& v, const State& s, const StripsActionModel& m, bool with_needs = true);

}  // namespace slaf

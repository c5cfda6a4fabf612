#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "slaf/model/strips.hpp"

namespace slaf {

struct ModelConstraints {
    // Known preconditions per action. When absent every consistent
    // precondition term is enumerated.
    std::optional<std::vector<std::vector<lit_t>>> known_pre;
    // Optional fixed effect per (a * |P| + f); empty means all free.
    std::vector<std::optional<Effect>> fixed_effects;
};

// All models allowed by the constraints. Throws BeliefTooLarge above cap.
std::vector<StripsActionModel> enumerate_models_for(const GroundDomain& d, const ModelConstraints& c = {},
                                                    std::size_t cap = 1'000'000);

struct OracleStep {
    std::size_t action;
    bool ok = true;
    std::vector<lit_t> obs;  // fluent literals
};

// Explicit set of (state, model) pairs for domains with at most 64 fluents.
// Models live in a shared table; a pair stores the model's table index.
class OracleBelief {
public:
    using Pair = std::pair<std::uint64_t, std::uint32_t>;

    OracleBelief() = default;
    OracleBelief(std::size_t fluents, std::shared_ptr<const std::vector<StripsActionModel>> models,
                 std::vector<Pair> pairs);

    // Every state satisfying `init` paired with every model.
    static OracleBelief all(std::size_t fluents, std::vector<StripsActionModel> models,
                            const std::vector<lit_t>& init = {}, std::size_t cap = 1'000'000);

    std::size_t num_fluents() const { return nf_; }
    const std::vector<Pair>& pairs() const { return pairs_; }
    const StripsActionModel& model(std::uint32_t i) const { return (*models_)[i]; }
    const std::vector<StripsActionModel>& models() const { return *models_; }
    std::size_t size() const { return pairs_.size(); }
    bool contains(std::uint64_t s, std::uint32_t m) const;

    OracleBelief progress(std::size_t a) const;
    OracleBelief fail(std::size_t a) const;
    OracleBelief filter(const std::vector<lit_t>& obs) const;

private:
    struct Compiled {
        std::uint64_t pre_pos, pre_neg, set, clear;
    };
    void compile();

    std::size_t nf_ = 0;
    std::shared_ptr<const std::vector<StripsActionModel>> models_;
    std::shared_ptr<const std::vector<Compiled>> compiled_;  // [model * |A| + a]
    std::size_t na_ = 0;
    std::vector<Pair> pairs_;
};

// Item-by-item SLAF over an explicit pair set: progression (or failure
// filtering when ok is false), then observation filtering, per step.
OracleBelief oracle_slaf(const OracleBelief& b, const std::vector<OracleStep>& steps, std::size_t cap = 1'000'000);

}  // namespace slaf

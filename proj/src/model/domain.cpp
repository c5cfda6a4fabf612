#include "slaf/model/domain.hpp"

#include "slaf/errors.hpp"

namespace slaf {

GroundDomain::GroundDomain(std::string n, std::vector<std::string> fs, std::vector<std::string> as)
    : name(std::move(n)), fluents(std::move(fs)), actions(std::move(as)) {
    reindex();
}

void GroundDomain::reindex() {
    fluent_idx_.clear();
    action_idx_.clear();
    for (std::size_t i = 0; i < fluents.size(); ++i)
        if (!fluent_idx_.emplace(fluents[i], i).second) throw Error("duplicate fluent " + fluents[i]);
    for (std::size_t i = 0; i < actions.size(); ++i)
        if (!action_idx_.emplace(actions[i], i).second) throw Error("duplicate action " + actions[i]);
}

std::optional<std::size_t> GroundDomain::fluent_index(const std::string& n) const {
    auto it = fluent_idx_.find(n);
    if (it == fluent_idx_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> GroundDomain::action_index(const std::string& n) const {
    auto it = action_idx_.find(n);
    if (it == action_idx_.end()) return std::nullopt;
    return it->second;
}

std::uint64_t state_mask(const State& s) {
    if (s.size() > 64) throw VocabularyTooLarge("state has more than 64 fluents");
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i]) m |= 1ull << i;
    return m;
}

State state_from_mask(std::uint64_t m, std::size_t n) {
    State s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = (m >> i) & 1u;
    return s;
}

}  // namespace slaf

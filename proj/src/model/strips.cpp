#include "slaf/model/strips.hpp"

#include <algorithm>

#include "slaf/errors.hpp"

namespace slaf {

StripsActionModel::StripsActionModel(std::size_t fluents, std::size_t actions)
    : nf_(fluents), pre_(actions), eff_(actions) {}

namespace {

// Position of fluent f's literal inside a sorted literal list, or end.
std::vector<lit_t>::const_iterator find_fluent(const std::vector<lit_t>& lits, std::size_t f) {
    auto it = std::lower_bound(lits.begin(), lits.end(), mk_lit(static_cast<atom_t>(f), false));
    if (it != lits.end() && lit_atom(*it) == f) return it;
    return lits.end();
}

}  // namespace

Effect StripsActionModel::effect(std::size_t a, std::size_t f) const {
    auto it = find_fluent(eff_[a], f);
    if (it == eff_[a].end()) return Effect::Keeps;
    return lit_negated(*it) ? Effect::CausesFalse : Effect::CausesTrue;
}

void StripsActionModel::set_effect(std::size_t a, std::size_t f, Effect e) {
    auto& v = eff_[a];
    auto it = std::lower_bound(v.begin(), v.end(), mk_lit(static_cast<atom_t>(f), false));
    if (it != v.end() && lit_atom(*it) == f) it = v.erase(it);
    if (e != Effect::Keeps) v.insert(it, fluent_lit(f, e == Effect::CausesTrue));
}

void StripsActionModel::set_pre(std::size_t a, std::vector<lit_t> lits) {
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (std::size_t i = 1; i < lits.size(); ++i)
        if (lit_atom(lits[i]) == lit_atom(lits[i - 1])) throw Error("inconsistent precondition");
    pre_[a] = std::move(lits);
}

int StripsActionModel::needs(std::size_t a, std::size_t f) const {
    auto it = find_fluent(pre_[a], f);
    if (it == pre_[a].end()) return 0;
    return lit_negated(*it) ? -1 : 1;
}

bool StripsActionModel::executable(const State& s, std::size_t a) const {
    for (lit_t l : pre_[a])
        if (!holds(s, l)) return false;
    return true;
}

std::optional<State> apply(const StripsActionModel& m, const State& s, std::size_t a) {
    if (!m.executable(s, a)) return std::nullopt;
    State out = s;
    for (lit_t l : m.effects(a)) out[lit_atom(l)] = !lit_negated(l);
    return out;
}

bool apply_in_place(const StripsActionModel& m, State& s, std::size_t a) {
    if (!m.executable(s, a)) return false;
    for (lit_t l : m.effects(a)) s[lit_atom(l)] = !lit_negated(l);
    return true;
}

StripsActionModel from_description(const GroundDomain& d, const std::vector<EffectRule>& rules) {
    StripsActionModel m(d.num_fluents(), d.num_actions());
    std::vector<std::uint8_t> seen(d.num_fluents() * d.num_actions(), 0);
    for (const auto& r : rules) {
        auto& s = seen[r.action * d.num_fluents() + r.fluent];
        if (s) throw Error("two rules for " + d.actions[r.action] + " on " + d.fluents[r.fluent]);
        s = 1;
        m.set_effect(r.action, r.fluent, r.effect);
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (!seen[i])
            throw Error("incomplete description: no rule for " + d.actions[i / d.num_fluents()] + " on " +
                        d.fluents[i % d.num_fluents()]);
    return m;
}

std::vector<EffectRule> to_description(const StripsActionModel& m) {
    std::vector<EffectRule> out;
    for (std::size_t a = 0; a < m.num_actions(); ++a)
        for (std::size_t f = 0; f < m.num_fluents(); ++f) out.push_back({a, f, m.effect(a, f)});
    return out;
}

std::vector<bool> encode_pair(const Vocabulary& v, const State& s, const StripsActionModel& m, bool with_needs) {
    std::vector<bool> out(v.base_size(), false);
    for (std::size_t f = 0; f < s.size(); ++f) out[v.fluent(f)] = s[f];
    for (std::size_t a = 0; a < m.num_actions(); ++a) {
        for (std::size_t f = 0; f < m.num_fluents(); ++f) {
            switch (m.effect(a, f)) {
                case Effect::CausesTrue: out[v.causes(a, f, true)] = true; break;
                case Effect::CausesFalse: out[v.causes(a, f, false)] = true; break;
                case Effect::Keeps: out[v.keeps(a, f)] = true; break;
            }
            if (with_needs) {
                const int n = m.needs(a, f);
                if (n > 0) out[v.needs(a, f, true)] = true;
                if (n < 0) out[v.needs(a, f, false)] = true;
            }
        }
    }
    return out;
}

}  // namespace slaf

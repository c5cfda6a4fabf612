#include "slaf/engines/pre.hpp"

#include <algorithm>

#include "slaf/errors.hpp"

namespace slaf {

namespace {

// A factor that fixes its fluent's value keeps the surviving explanation in
// ctx, as an observation would; otherwise the next progression overwrites
// action knowledge that only lived in that explanation.
FluentFactor settle(NnfStore& s, FluentFactor x) {
    if (x.expl_pos == NnfStore::kFalse && x.expl_neg != NnfStore::kFalse) return as_observe(s, x, false);
    if (x.expl_neg == NnfStore::kFalse && x.expl_pos != NnfStore::kFalse) return as_observe(s, x, true);
    return x;
}

// The resolvent on f of the two factors' clauses must live in ctx before
// progression can overwrite the explanations it came from.
FluentFactor conjoin(NnfStore& s, const FluentFactor& x, const FluentFactor& y) {
    FluentFactor out{s.mk_and(x.expl_pos, y.expl_pos), s.mk_and(x.expl_neg, y.expl_neg), s.mk_and(x.ctx, y.ctx)};
    out.ctx = s.mk_and(out.ctx, s.mk_or(out.expl_pos, out.expl_neg));
    return settle(s, out);
}

// Adds the cross resolvents between a branch factor and the top factor of
// the same fluent, which the branch only implicitly shares.
void close_against(NnfStore& s, FluentFactor& b, const FluentFactor& top) {
    b.ctx = s.mk_and({b.ctx, s.mk_or(top.expl_pos, b.expl_neg), s.mk_or(b.expl_pos, top.expl_neg)});
}

void observe_branch(NnfStore& s, PreBranch& br, const std::vector<lit_t>& obs) {
    for (lit_t l : obs) {
        auto it = std::lower_bound(br.comps.begin(), br.comps.end(), lit_atom(l),
                                   [](const auto& c, std::uint32_t f) { return c.first < f; });
        if (it != br.comps.end() && it->first == lit_atom(l)) it->second = as_observe(s, it->second, !lit_negated(l));
    }
}

void check_obs(const std::vector<lit_t>& obs) {
    std::vector<lit_t> sorted = obs;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (lit_atom(sorted[i]) == lit_atom(sorted[i - 1]) && sorted[i] != sorted[i - 1])
            throw InconsistentObservation("observation holds both signs of a fluent");
}

}  // namespace

bool PreBranch::is_false() const {
    return std::any_of(comps.begin(), comps.end(), [](const auto& c) { return c.second.is_false(); });
}

PreBelief pre_step(NnfStore& s, const Vocabulary& v, const PreBelief& b, std::size_t a, bool ok,
                   const std::vector<lit_t>& obs, const std::vector<lit_t>& pre_a) {
    check_obs(obs);
    PreBelief out = b;
    if (!ok) {
        std::vector<PreBranch> group;
        for (lit_t l : pre_a) {
            // F(not l): the fluent of l had the opposite value.
            const bool value = lit_negated(l);
            FluentFactor x;
            x.expl_pos = value ? NnfStore::kTrue : NnfStore::kFalse;
            x.expl_neg = value ? NnfStore::kFalse : NnfStore::kTrue;
            group.push_back(PreBranch{{{lit_atom(l), x}}});
        }
        out.groups.push_back(std::move(group));
        out.top = as_observe(s, out.top, obs);
        for (auto& g : out.groups)
            for (auto& br : g) observe_branch(s, br, obs);
    } else {
        out.top = as_observe(s, out.top, pre_a);
        for (auto& g : out.groups)
            for (auto& br : g) {
                observe_branch(s, br, pre_a);
                for (auto& [f, x] : br.comps) {
                    close_against(s, x, out.top.fluents[f]);
                    x = as_effect_update(s, v, x, a, f, false);
                }
                observe_branch(s, br, obs);
            }
        out.top = as_effect_update(s, v, out.top, a, false);
        out.top = as_observe(s, out.top, obs);
    }
    merge_common(s, out);
    return out;
}

bool merge_common(NnfStore& s, PreBelief& b) {
    bool consistent = true;
    std::vector<std::vector<PreBranch>> kept;
    for (auto& group : b.groups) {
        std::erase_if(group, [](const PreBranch& br) { return br.is_false(); });
        if (group.empty()) {
            consistent = false;
            kept.push_back(std::move(group));
            continue;
        }
        if (group.size() == 1) {
            for (auto& [f, x] : group[0].comps) b.top.fluents[f] = conjoin(s, b.top.fluents[f], x);
            continue;
        }
        // Fluents explicit in every branch are the only candidates for a
        // common factor; an implicit entry is trivial and would differ.
        std::vector<std::uint32_t> candidates;
        for (const auto& [f, x] : group[0].comps) {
            bool everywhere = true;
            for (std::size_t j = 1; j < group.size() && everywhere; ++j)
                everywhere = std::any_of(group[j].comps.begin(), group[j].comps.end(),
                                         [f = f](const auto& c) { return c.first == f; });
            if (everywhere) candidates.push_back(f);
        }
        for (std::uint32_t f : candidates) {
            auto comp = [&](std::size_t j) -> FluentFactor& {
                return std::lower_bound(group[j].comps.begin(), group[j].comps.end(), f,
                                        [](const auto& c, std::uint32_t x) { return c.first < x; })
                    ->second;
            };
            const FluentFactor first = comp(0);
            bool same = true, same_expl = true;
            for (std::size_t j = 1; j < group.size(); ++j) {
                const FluentFactor& x = comp(j);
                same = same && x == first;
                same_expl = same_expl && x.expl_pos == first.expl_pos && x.expl_neg == first.expl_neg;
            }
            if (same) {
                b.top.fluents[f] = conjoin(s, b.top.fluents[f], first);
                for (auto& br : group) std::erase_if(br.comps, [f](const auto& c) { return c.first == f; });
            } else if (same_expl && !(first.expl_pos == NnfStore::kTrue && first.expl_neg == NnfStore::kTrue)) {
                b.top.fluents[f] = conjoin(s, b.top.fluents[f], {first.expl_pos, first.expl_neg, NnfStore::kTrue});
                for (std::size_t j = 0; j < group.size(); ++j) {
                    FluentFactor& x = comp(j);
                    x.expl_pos = x.expl_neg = NnfStore::kTrue;
                }
            }
        }
        for (auto& br : group) std::erase_if(br.comps, [](const auto& c) { return c.second.trivial(); });
        if (std::any_of(group.begin(), group.end(), [](const PreBranch& br) { return br.comps.empty(); })) continue;
        const bool action_only = std::all_of(group.begin(), group.end(), [](const PreBranch& br) {
            return std::all_of(br.comps.begin(), br.comps.end(), [](const auto& c) {
                return c.second.expl_pos == NnfStore::kTrue && c.second.expl_neg == NnfStore::kTrue;
            });
        });
        if (action_only) {
            std::vector<NodeRef> alts;
            for (const auto& br : group) {
                std::vector<NodeRef> ctx;
                for (const auto& [f, x] : br.comps) ctx.push_back(x.ctx);
                alts.push_back(s.mk_and(std::move(ctx)));
            }
            const NodeRef r = s.mk_or(std::move(alts));
            if (r != NnfStore::kTrue) b.frozen.push_back(r);
            if (r == NnfStore::kFalse) consistent = false;
            continue;
        }
        kept.push_back(std::move(group));
    }
    b.groups = std::move(kept);
    return consistent;
}

NodeRef branch_denotation(NnfStore& s, const Vocabulary& v, const PreBranch& br) {
    std::vector<NodeRef> parts;
    for (const auto& [f, x] : br.comps) parts.push_back(factor_denotation(s, v, f, x));
    return s.mk_and(std::move(parts));
}

NodeRef denotation(NnfStore& s, const Vocabulary& v, const PreBelief& b) {
    std::vector<NodeRef> parts{denotation(s, v, b.top)};
    for (const auto& g : b.groups) {
        std::vector<NodeRef> alts;
        for (const auto& br : g) alts.push_back(branch_denotation(s, v, br));
        parts.push_back(s.mk_or(std::move(alts)));
    }
    for (NodeRef r : b.frozen) parts.push_back(r);
    return s.mk_and(std::move(parts));
}

PreEngine::PreEngine(const Vocabulary& v, std::vector<std::vector<lit_t>> known_pre)
    : v_(v), pre_(std::move(known_pre)), belief_(PreBelief::unknown(v.num_fluents())) {
    if (pre_.size() != v.num_actions()) throw Error("known preconditions must cover every action");
}

std::size_t PreEngine::max_precondition() const {
    std::size_t m = 0;
    for (const auto& p : pre_) m = std::max(m, p.size());
    return m;
}

void PreEngine::observe(const std::vector<lit_t>& obs) {
    check_obs(obs);
    belief_.top = as_observe(store_, belief_.top, obs);
    for (auto& g : belief_.groups)
        for (auto& br : g) observe_branch(store_, br, obs);
    const bool ok = merge_common(store_, belief_);
    for (const auto& x : belief_.top.fluents)
        if (!ok || x.is_false()) throw InconsistentBelief("belief became unsatisfiable", steps_);
}

void PreEngine::step(std::size_t a, bool ok, const std::vector<lit_t>& obs) {
    ++steps_;
    if (!ok && pre_[a].empty())
        throw InconsistentBelief("action " + v_.action_name(a) + " failed but has no precondition", steps_);
    belief_ = pre_step(store_, v_, belief_, a, ok, obs, pre_[a]);
    bool consistent = true;
    for (const auto& g : belief_.groups)
        if (g.empty()) consistent = false;
    for (NodeRef r : belief_.frozen)
        if (r == NnfStore::kFalse) consistent = false;
    for (const auto& x : belief_.top.fluents)
        if (x.is_false()) consistent = false;
    if (!consistent) throw InconsistentBelief("belief became unsatisfiable", steps_);
}

}  // namespace slaf

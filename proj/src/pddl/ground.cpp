#include <algorithm>
#include <functional>
#include <set>
#include <unordered_map>

#include "slaf/errors.hpp"
#include "slaf/pddl/pddl.hpp"

namespace slaf::pddl {

namespace {

std::vector<std::vector<std::size_t>> objects_by_param(const DomainSchema& d, const ProblemInstance& p,
                                                       const std::vector<TypedName>& params) {
    std::vector<std::vector<std::size_t>> out;
    for (const auto& x : params) {
        std::vector<std::size_t> objs;
        for (std::size_t o = 0; o < p.objects.size(); ++o)
            if (d.is_subtype(p.objects[o].type, x.type)) objs.push_back(o);
        out.push_back(std::move(objs));
    }
    return out;
}

// Calls fn for every tuple of the cartesian product, first position outermost.
void for_each_tuple(const std::vector<std::vector<std::size_t>>& choices,
                    const std::function<void(const std::vector<std::size_t>&)>& fn) {
    for (const auto& c : choices)
        if (c.empty()) return;
    std::vector<std::size_t> idx(choices.size(), 0), tuple(choices.size());
    while (true) {
        for (std::size_t i = 0; i < choices.size(); ++i) tuple[i] = choices[i][idx[i]];
        fn(tuple);
        std::size_t i = choices.size();
        while (i > 0) {
            --i;
            if (++idx[i] < choices[i].size()) break;
            idx[i] = 0;
            if (i == 0) return;
        }
        if (choices.empty()) return;
    }
}

std::string ground_name(const std::string& head, const std::vector<std::size_t>& args,
                        const std::vector<std::string>& objects) {
    std::string s = "(" + head;
    for (std::size_t a : args) s += " " + objects[a];
    return s + ")";
}

std::uint64_t fluent_key(std::size_t pred, const std::vector<std::size_t>& args) {
    std::uint64_t k = pred + 1;
    for (std::size_t a : args) k = k * 1'000'003ull + a + 1;
    return k;
}

}  // namespace

Grounding ground(const DomainSchema& d, const ProblemInstance& p) {
    Grounding g;
    g.domain.name = d.name;
    for (const auto& o : p.objects) g.objects.push_back(o.name);
    for (std::size_t pi = 0; pi < d.predicates.size(); ++pi) {
        for_each_tuple(objects_by_param(d, p, d.predicates[pi].params), [&](const std::vector<std::size_t>& t) {
            g.domain.fluents.push_back(ground_name(d.predicates[pi].name, t, g.objects));
            g.domain.fluent_refs.push_back({pi, t});
        });
    }
    for (std::size_t ai = 0; ai < d.actions.size(); ++ai) {
        for_each_tuple(objects_by_param(d, p, d.actions[ai].params), [&](const std::vector<std::size_t>& t) {
            g.domain.actions.push_back(ground_name(d.actions[ai].name, t, g.objects));
            g.domain.action_refs.push_back({ai, t});
        });
    }
    g.domain.reindex();
    g.init.assign(g.domain.num_fluents(), false);
    for (const Literal& l : p.init) {
        std::string name = "(" + l.pred;
        for (const auto& a : l.args) name += " " + a;
        name += ")";
        auto f = g.domain.fluent_index(name);
        if (!f) throw TypeError("initial atom " + name + " is not a well-typed fluent");
        g.init[*f] = true;
    }
    return g;
}

StripsActionModel ground_model(const DomainSchema& d, const Grounding& g) {
    const GroundDomain& gd = g.domain;
    std::unordered_map<std::uint64_t, std::size_t> by_key;
    for (std::size_t f = 0; f < gd.num_fluents(); ++f)
        by_key.emplace(fluent_key(gd.fluent_refs[f].schema, gd.fluent_refs[f].args), f);
    StripsActionModel m(gd.num_fluents(), gd.num_actions());
    for (std::size_t a = 0; a < gd.num_actions(); ++a) {
        const ActionSchema& s = d.actions[gd.action_refs[a].schema];
        const auto& args = gd.action_refs[a].args;
        auto resolve = [&](const Literal& l) {
            std::vector<std::size_t> objs;
            for (const auto& v : l.args) {
                const auto it = std::find_if(s.params.begin(), s.params.end(),
                                             [&](const TypedName& t) { return t.name == v; });
                objs.push_back(args[static_cast<std::size_t>(it - s.params.begin())]);
            }
            auto f = by_key.find(fluent_key(d.predicate_index(l.pred), objs));
            if (f == by_key.end()) throw TypeError("ground literal outside the fluent set in " + gd.actions[a]);
            return f->second;
        };
        std::vector<lit_t> pre;
        for (const Literal& l : s.pre) pre.push_back(fluent_lit(resolve(l), l.positive));
        std::sort(pre.begin(), pre.end());
        pre.erase(std::unique(pre.begin(), pre.end()), pre.end());
        m.set_pre(a, pre);
        for (const Literal& l : s.eff)
            if (!l.positive) m.set_effect(a, resolve(l), Effect::CausesFalse);
        for (const Literal& l : s.eff)
            if (l.positive) m.set_effect(a, resolve(l), Effect::CausesTrue);
    }
    return m;
}

std::size_t expected_actions(const DomainSchema& d, const ProblemInstance& p, std::size_t schema) {
    std::size_t n = 1;
    for (const auto& objs : objects_by_param(d, p, d.actions[schema].params)) n *= objs.size();
    return n;
}

SchemaMap::SchemaMap(const DomainSchema& d, const GroundDomain& g) : d_(&d), g_(&g) {
    fluents_by_pred_.assign(d.predicates.size(), {});
    for (std::size_t f = 0; f < g.num_fluents(); ++f) fluents_by_pred_[g.fluent_refs[f].schema].push_back(f);
    std::vector<std::set<Pattern>> found(d.actions.size());
    for (std::size_t a = 0; a < g.num_actions(); ++a) {
        const auto& ref = g.action_refs[a];
        for (std::size_t pi = 0; pi < d.predicates.size(); ++pi) {
            for (std::size_t f : fluents_by_pred_[pi]) {
                const auto& fargs = g.fluent_refs[f].args;
                std::vector<std::vector<std::size_t>> choices;
                for (std::size_t x : fargs) {
                    std::vector<std::size_t> js;
                    for (std::size_t j = 0; j < ref.args.size(); ++j)
                        if (ref.args[j] == x) js.push_back(j);
                    if (js.empty()) break;
                    choices.push_back(std::move(js));
                }
                if (choices.size() != fargs.size()) continue;
                if (choices.empty()) {
                    found[ref.schema].insert(Pattern{static_cast<std::uint32_t>(pi), {}});
                    continue;
                }
                for_each_tuple(choices, [&](const std::vector<std::size_t>& t) {
                    found[ref.schema].insert(
                        Pattern{static_cast<std::uint32_t>(pi), std::vector<std::uint32_t>(t.begin(), t.end())});
                });
            }
        }
    }
    for (auto& s : found) patterns_.emplace_back(s.begin(), s.end());
}

std::size_t SchemaMap::pattern_index(std::size_t schema, const Pattern& p) const {
    const auto& ps = patterns_[schema];
    auto it = std::lower_bound(ps.begin(), ps.end(), p);
    return it != ps.end() && *it == p ? static_cast<std::size_t>(it - ps.begin()) : SIZE_MAX;
}

std::string SchemaMap::action_head(std::size_t schema) const {
    const ActionSchema& a = d_->actions[schema];
    std::string s = "(" + a.name;
    for (const auto& x : a.params) s += " " + x.name;
    return s + ")";
}

std::string SchemaMap::pattern_name(std::size_t schema, std::size_t pattern) const {
    const Pattern& p = patterns_[schema][pattern];
    std::string s = "(" + d_->predicates[p.pred].name;
    for (auto j : p.params) s += " " + d_->actions[schema].params[j].name;
    return s + ")";
}

bool SchemaMap::in_scope(std::size_t action, std::size_t fluent) const {
    const auto& args = g_->action_refs[action].args;
    for (std::size_t x : g_->fluent_refs[fluent].args)
        if (std::find(args.begin(), args.end(), x) == args.end()) return false;
    return true;
}

std::vector<std::size_t> SchemaMap::matches(std::size_t action, std::size_t fluent) const {
    if (!in_scope(action, fluent))
        throw OffParameterFluent(g_->fluents[fluent] + " is not over the arguments of " + g_->actions[action]);
    const auto& ref = g_->action_refs[action];
    const auto& fref = g_->fluent_refs[fluent];
    std::vector<std::size_t> out;
    const auto& ps = patterns_[ref.schema];
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (ps[i].pred != fref.schema) continue;
        bool ok = true;
        for (std::size_t k = 0; k < ps[i].params.size() && ok; ++k) ok = ref.args[ps[i].params[k]] == fref.args[k];
        if (ok) out.push_back(i);
    }
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> SchemaMap::instances(std::size_t schema, std::size_t pattern) const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const Pattern& p = patterns_[schema][pattern];
    for (std::size_t a = 0; a < g_->num_actions(); ++a) {
        const auto& ref = g_->action_refs[a];
        if (ref.schema != schema) continue;
        for (std::size_t f : fluents_by_pred_[p.pred]) {
            const auto& fargs = g_->fluent_refs[f].args;
            bool ok = true;
            for (std::size_t k = 0; k < fargs.size() && ok; ++k) ok = ref.args[p.params[k]] == fargs[k];
            if (ok) out.emplace_back(a, f);
        }
    }
    return out;
}

std::vector<std::string> golden_effect_rows(const SchemaMap& m) {
    const DomainSchema& d = m.domain();
    std::vector<std::string> rows;
    for (std::size_t s = 0; s < m.num_schemas(); ++s) {
        const ActionSchema& a = d.actions[s];
        auto matches = [&](const Literal& l, const Pattern& p) {
            if (d.predicate_index(l.pred) != p.pred) return false;
            for (std::size_t k = 0; k < l.args.size(); ++k)
                if (a.params[p.params[k]].name != l.args[k]) return false;
            return true;
        };
        for (std::size_t i = 0; i < m.patterns(s).size(); ++i) {
            const Pattern& p = m.patterns(s)[i];
            const bool add = std::any_of(a.eff.begin(), a.eff.end(), [&](const Literal& l) { return l.positive && matches(l, p); });
            const bool del = std::any_of(a.eff.begin(), a.eff.end(), [&](const Literal& l) { return !l.positive && matches(l, p); });
            const std::string f = m.pattern_name(s, i);
            if (add) rows.push_back("(" + a.name + " CAUSES " + f + ")");
            else if (del) rows.push_back("(" + a.name + " CAUSES (NOT " + f + "))");
            else rows.push_back("(" + a.name + " KEEPS " + f + ")");
        }
    }
    std::sort(rows.begin(), rows.end());
    return rows;
}

}  // namespace slaf::pddl

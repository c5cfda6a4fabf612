#include <algorithm>
#include <numeric>
#include <ostream>

#include "slaf/errors.hpp"
#include "slaf/extract/extract.hpp"

namespace slaf {

namespace {

std::string row(const std::string& a, const char* word, const std::string& p, bool neg) {
    return "(" + a + " " + word + " " + (neg ? "(NOT " + p + ")" : p) + ")";
}

pddl::Literal pattern_literal(const pddl::SchemaMap& m, std::size_t s, std::size_t i, bool positive) {
    const pddl::Pattern& pt = m.patterns(s)[i];
    pddl::Literal l;
    l.positive = positive;
    l.pred = m.domain().predicates[pt.pred].name;
    for (auto k : pt.params) l.args.push_back(m.domain().actions[s].params[k].name);
    return l;
}

}  // namespace

std::string prop_row(const PropTable& t, std::size_t a, std::size_t p, PropKind k) {
    static const char* const words[kPropKinds] = {"CAUSES", "CAUSES", "KEEPS", "NEEDS", "NEEDS"};
    return row(t.actions[a], words[static_cast<int>(k)], t.patterns[a][p], k == PropKind::CausesNeg || k == PropKind::NeedsNeg);
}

SchemaActionModel needs_from_domain(const pddl::SchemaMap& m, const PropTable& t) {
    SchemaActionModel out = SchemaActionModel::shaped_like(t);
    const pddl::DomainSchema& d = m.domain();
    for (std::size_t s = 0; s < m.num_schemas(); ++s) {
        const pddl::ActionSchema& a = d.actions[s];
        for (const auto& l : a.pre) {
            pddl::Pattern pt;
            pt.pred = static_cast<std::uint32_t>(d.predicate_index(l.pred));
            for (const auto& arg : l.args) {
                const auto it = std::find_if(a.params.begin(), a.params.end(), [&](const auto& p) { return p.name == arg; });
                pt.params.push_back(static_cast<std::uint32_t>(it - a.params.begin()));
            }
            const std::size_t i = m.pattern_index(s, pt);
            if (i == SIZE_MAX) continue;
            (l.positive ? out.rows[s][i].needs_pos : out.rows[s][i].needs_neg) = true;
        }
    }
    return out;
}

SchemaActionModel needs_from_preconditions(const PropTable& t, const std::vector<std::vector<lit_t>>& pre) {
    SchemaActionModel out = SchemaActionModel::shaped_like(t);
    for (std::size_t a = 0; a < pre.size() && a < out.rows.size(); ++a)
        for (lit_t l : pre[a]) (lit_negated(l) ? out.rows[a].at(lit_atom(l)).needs_neg : out.rows[a].at(lit_atom(l)).needs_pos) = true;
    return out;
}

SchemaActionModel generating_model(const pddl::SchemaMap& m, const PropTable& t, bool with_needs) {
    SchemaActionModel out = with_needs ? needs_from_domain(m, t) : SchemaActionModel::shaped_like(t);
    const pddl::DomainSchema& d = m.domain();
    for (std::size_t s = 0; s < m.num_schemas(); ++s) {
        for (std::size_t i = 0; i < m.patterns(s).size(); ++i) {
            const pddl::Literal pos = pattern_literal(m, s, i, true);
            bool add = false, del = false;
            for (const auto& e : d.actions[s].eff) {
                if (e.pred != pos.pred || e.args != pos.args) continue;
                (e.positive ? add : del) = true;
            }
            out.rows[s][i].effect = add ? EffectTag::CausesPos : del ? EffectTag::CausesNeg : EffectTag::Keeps;
        }
    }
    return out;
}

std::vector<std::string> model_rows(const SchemaActionModel& m) {
    std::vector<std::size_t> order(m.actions.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return m.actions[x] < m.actions[y]; });
    std::vector<std::string> out;
    for (std::size_t a : order) {
        std::vector<std::string> needs, causes, keeps;
        for (std::size_t p = 0; p < m.patterns[a].size(); ++p) {
            const ModelRow& r = m.rows[a][p];
            const std::string& f = m.patterns[a][p];
            if (r.needs_pos) needs.push_back(row(m.actions[a], "NEEDS", f, false));
            if (r.needs_neg) needs.push_back(row(m.actions[a], "NEEDS", f, true));
            if (r.effect == EffectTag::Keeps) keeps.push_back(row(m.actions[a], "KEEPS", f, false));
            else causes.push_back(row(m.actions[a], "CAUSES", f, r.effect == EffectTag::CausesNeg));
        }
        for (auto* block : {&needs, &causes, &keeps}) {
            std::sort(block->begin(), block->end());
            out.insert(out.end(), block->begin(), block->end());
        }
    }
    return out;
}

void emit_model(const SchemaActionModel& m, std::ostream& out) {
    for (const auto& r : model_rows(m)) out << r << '\n';
    if (!out) throw Error("I/O error while writing the model");
}

std::vector<std::string> effect_rows(const SchemaActionModel& m) {
    std::vector<std::string> out;
    for (const auto& r : model_rows(m))
        if (r.find(" NEEDS ") == std::string::npos) out.push_back(r);
    std::sort(out.begin(), out.end());
    return out;
}

void emit_pddl(const SchemaActionModel& m, const pddl::SchemaMap& map, std::ostream& out) {
    if (m.actions.size() != map.num_schemas()) throw Error("model does not belong to this schema map");
    pddl::DomainSchema d = map.domain();
    bool negative_pre = false;
    for (std::size_t s = 0; s < map.num_schemas(); ++s) {
        auto& a = d.actions[s];
        a.pre.clear();
        a.eff.clear();
        for (std::size_t i = 0; i < map.patterns(s).size(); ++i) {
            const ModelRow& r = m.rows[s][i];
            if (r.needs_pos) a.pre.push_back(pattern_literal(map, s, i, true));
            if (r.needs_neg) {
                a.pre.push_back(pattern_literal(map, s, i, false));
                negative_pre = true;
            }
            if (r.effect != EffectTag::Keeps)
                a.eff.push_back(pattern_literal(map, s, i, r.effect == EffectTag::CausesPos));
        }
    }
    if (negative_pre && std::find(d.requirements.begin(), d.requirements.end(), ":NEGATIVE-PRECONDITIONS") == d.requirements.end())
        d.requirements.push_back(":NEGATIVE-PRECONDITIONS");
    out << pddl::print_domain(d);
    if (!out) throw Error("I/O error while writing the model");
}

}  // namespace slaf

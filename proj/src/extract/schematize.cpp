#include <algorithm>

#include "slaf/errors.hpp"
#include "slaf/extract/extract.hpp"
#include "slaf/model/axioms.hpp"

namespace slaf {

namespace {

const char* const kWords[kPropKinds] = {"CAUSES", "CAUSES", "KEEPS", "NEEDS", "NEEDS"};

std::string prop_text(const std::string& action, PropKind k, const std::string& pattern) {
    const bool neg = k == PropKind::CausesNeg || k == PropKind::NeedsNeg;
    return "(" + action + " " + kWords[static_cast<int>(k)] + " " + (neg ? "(NOT " + pattern + ")" : pattern) + ")";
}

}  // namespace

std::size_t PropTable::num_rows() const {
    std::size_t n = 0;
    for (const auto& p : patterns) n += p.size();
    return n;
}

PropTable ground_props(const Vocabulary& v) {
    PropTable t;
    t.actions = v.action_names();
    t.patterns.assign(v.num_actions(), v.fluent_names());
    t.atoms.resize(v.num_actions());
    for (std::size_t a = 0; a < v.num_actions(); ++a) {
        t.atoms[a].resize(v.num_fluents());
        for (std::size_t f = 0; f < v.num_fluents(); ++f)
            for (int k = 0; k < kPropKinds; ++k) t.atoms[a][f][k] = v.prop(a, static_cast<PropKind>(k), f);
    }
    return t;
}

PropTable schema_props(Vocabulary& v, const pddl::SchemaMap& m) {
    PropTable t;
    for (std::size_t s = 0; s < m.num_schemas(); ++s) {
        t.actions.push_back(m.schema_name(s));
        const std::string head = m.action_head(s);
        auto& names = t.patterns.emplace_back();
        auto& atoms = t.atoms.emplace_back();
        for (std::size_t i = 0; i < m.patterns(s).size(); ++i) {
            names.push_back(m.pattern_name(s, i));
            auto& row = atoms.emplace_back();
            for (int k = 0; k < kPropKinds; ++k) row[k] = v.intern(prop_text(head, static_cast<PropKind>(k), names.back()));
        }
    }
    return t;
}

SchemaActionModel SchemaActionModel::shaped_like(const PropTable& t) {
    SchemaActionModel m;
    m.actions = t.actions;
    m.patterns = t.patterns;
    for (const auto& p : t.patterns) m.rows.emplace_back(p.size());
    return m;
}

Cnf table_axioms(const PropTable& t, bool with_needs) {
    Cnf out;
    for (std::size_t a = 0; a < t.actions.size(); ++a) {
        for (std::size_t p = 0; p < t.patterns[a].size(); ++p) {
            const atom_t cp = t.atom(a, p, PropKind::CausesPos), cn = t.atom(a, p, PropKind::CausesNeg),
                         k = t.atom(a, p, PropKind::Keeps);
            for (Clause c : {Clause{mk_lit(cp), mk_lit(cn), mk_lit(k)}, Clause{mk_lit(cp, true), mk_lit(cn, true)},
                             Clause{mk_lit(cp, true), mk_lit(k, true)}, Clause{mk_lit(cn, true), mk_lit(k, true)}})
                out.add(*make_clause(c));
            if (with_needs)
                out.add(*make_clause({mk_lit(t.atom(a, p, PropKind::NeedsPos), true),
                                      mk_lit(t.atom(a, p, PropKind::NeedsNeg), true)}));
        }
    }
    return out;
}

Cnf bias_axioms(const PropTable& t) {
    Cnf out;
    for (std::size_t a = 0; a < t.actions.size(); ++a) {
        for (std::size_t p = 0; p < t.patterns[a].size(); ++p) {
            out.add(*make_clause({mk_lit(t.atom(a, p, PropKind::CausesPos), true), mk_lit(t.atom(a, p, PropKind::NeedsNeg))}));
            out.add(*make_clause({mk_lit(t.atom(a, p, PropKind::CausesNeg), true), mk_lit(t.atom(a, p, PropKind::NeedsPos))}));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

Schematizer::Schematizer(const Vocabulary& v, const pddl::SchemaMap& m, const PropTable& t, OffParamPolicy policy)
    : v_(v), m_(m), t_(t), policy_(policy) {
    if (t.actions.size() != m.num_schemas()) throw Error("proposition table does not belong to this schema map");
}

NodeRef Schematizer::map_literal(NnfStore& s, lit_t l) {
    const atom_t x = lit_atom(l);
    if (!v_.is_action_prop(x)) return NnfStore::lit(l);
    if (memo_store_ != &s) {
        memo_.clear();
        memo_store_ = &s;
    }
    NodeRef pos = NnfStore::kTrue;
    if (auto it = memo_.find(x); it != memo_.end()) {
        pos = it->second;
    } else {
        const AtomInfo in = v_.info(x);
        const std::size_t schema = m_.schema_of(in.action);
        std::vector<std::size_t> ps;
        if (m_.in_scope(in.action, in.fluent)) ps = m_.matches(in.action, in.fluent);
        if (ps.empty()) {
            if (policy_ == OffParamPolicy::AssumeKeeps) {
                pos = in.prop == PropKind::Keeps ? NnfStore::kTrue : NnfStore::kFalse;
            } else {
                kept_ground_.emplace_back(in.action, in.fluent);
                pos = NnfStore::atom(x);
            }
        } else {
            if (ps.size() > 1) shared_needs_.emplace_back(schema, ps);
            auto lits = [&](PropKind k, bool neg) {
                std::vector<NodeRef> out;
                for (std::size_t p : ps) out.push_back(NnfStore::atom(t_.atom(schema, p, k), neg));
                return out;
            };
            switch (in.prop) {
                case PropKind::CausesPos:
                case PropKind::NeedsPos:
                case PropKind::NeedsNeg:
                    pos = s.mk_or(lits(in.prop, false));
                    break;
                case PropKind::CausesNeg:
                    pos = s.mk_and(s.mk_or(lits(PropKind::CausesNeg, false)), s.mk_and(lits(PropKind::CausesPos, true)));
                    break;
                case PropKind::Keeps:
                    pos = s.mk_and(lits(PropKind::Keeps, false));
                    break;
            }
        }
        memo_.emplace(x, pos);
    }
    return lit_negated(l) ? s.negate(pos) : pos;
}

NodeRef Schematizer::apply(NnfStore& s, NodeRef root) {
    return s.substitute(root, [&](lit_t l) { return map_literal(s, l); });
}

AsBelief Schematizer::apply(NnfStore& s, const AsBelief& b) {
    AsBelief out = b;
    for (auto& x : out.fluents) {
        x.expl_pos = apply(s, x.expl_pos);
        x.expl_neg = apply(s, x.expl_neg);
        x.ctx = apply(s, x.ctx);
    }
    return out;
}

PreBelief Schematizer::apply(NnfStore& s, const PreBelief& b) {
    PreBelief out;
    out.top = apply(s, b.top);
    for (const auto& g : b.groups) {
        auto& og = out.groups.emplace_back();
        for (const auto& br : g) {
            auto& obr = og.emplace_back();
            for (const auto& [f, x] : br.comps) obr.comps.emplace_back(f, FluentFactor{apply(s, x.expl_pos), apply(s, x.expl_neg), apply(s, x.ctx)});
        }
    }
    for (NodeRef r : b.frozen) out.frozen.push_back(apply(s, r));
    return out;
}

Cnf Schematizer::apply(const Cnf& f) {
    NnfStore s;
    const NodeRef r = apply(s, s.from_cnf(f));
    Cnf out = to_cnf(s, r);
    memo_.clear();
    memo_store_ = nullptr;
    return out;
}

Cnf Schematizer::side_axioms(bool with_needs) const {
    Cnf out;
    auto ground = kept_ground_;
    std::sort(ground.begin(), ground.end());
    ground.erase(std::unique(ground.begin(), ground.end()), ground.end());
    for (auto [a, f] : ground) out.append(vocab_axioms_for(v_, a, f, with_needs));
    if (with_needs) {
        for (const auto& [schema, ps] : shared_needs_)
            for (std::size_t i : ps)
                for (std::size_t j : ps)
                    if (i != j)
                        out.add(*make_clause({mk_lit(t_.atom(schema, i, PropKind::NeedsPos), true),
                                              mk_lit(t_.atom(schema, j, PropKind::NeedsNeg), true)}));
    }
    simplify(out);
    return out;
}

// ---------------------------------------------------------------------------

Cnf belief_to_cnf(const Cnf& belief, const Vocabulary& v, bool with_needs) {
    return conjoin(belief, vocab_axioms(v, with_needs));
}

Cnf belief_to_cnf(const NnfStore& s, const Vocabulary& v, const AsBelief& b, bool with_needs, const RenderOptions& opts) {
    Cnf out = render_belief(s, v, b, opts);
    out.append(vocab_axioms(v, with_needs));
    simplify(out);
    return out;
}

Cnf belief_to_cnf(NnfStore& s, const Vocabulary& v, const PreBelief& b, const RenderOptions& opts) {
    Cnf out = render_belief(s, v, b, opts);
    out.append(vocab_axioms(v, false));
    simplify(out);
    return out;
}

}  // namespace slaf

#include "slaf/model/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "slaf/errors.hpp"

namespace slaf {

namespace {

// All consistent precondition terms over n fluents (3^n of them).
std::vector<std::vector<lit_t>> all_pre_terms(std::size_t n) {
    std::vector<std::vector<lit_t>> out{{}};
    for (std::size_t f = 0; f < n; ++f) {
        std::vector<std::vector<lit_t>> next;
        for (const auto& t : out) {
            next.push_back(t);
            auto p = t;
            p.push_back(fluent_lit(f, true));
            next.push_back(p);
            auto q = t;
            q.push_back(fluent_lit(f, false));
            next.push_back(q);
        }
        out = std::move(next);
    }
    return out;
}

}  // namespace

std::vector<StripsActionModel> enumerate_models_for(const GroundDomain& d, const ModelConstraints& c,
                                                    std::size_t cap) {
    const std::size_t nf = d.num_fluents(), na = d.num_actions();
    // Per-action choices: effect vectors x precondition terms.
    std::vector<std::vector<std::vector<Effect>>> effect_choices(na);
    double total = 1;
    for (std::size_t a = 0; a < na; ++a) {
        std::vector<std::vector<Effect>> opts{{}};
        for (std::size_t f = 0; f < nf; ++f) {
            std::vector<Effect> allowed{Effect::CausesTrue, Effect::CausesFalse, Effect::Keeps};
            if (!c.fixed_effects.empty() && c.fixed_effects[a * nf + f]) allowed = {*c.fixed_effects[a * nf + f]};
            std::vector<std::vector<Effect>> next;
            for (const auto& o : opts)
                for (Effect e : allowed) {
                    auto x = o;
                    x.push_back(e);
                    next.push_back(std::move(x));
                }
            opts = std::move(next);
        }
        effect_choices[a] = std::move(opts);
        total *= static_cast<double>(effect_choices[a].size());
    }
    const auto pre_terms = all_pre_terms(nf);
    if (!c.known_pre) total *= std::pow(static_cast<double>(pre_terms.size()), static_cast<double>(na));
    if (total > static_cast<double>(cap))
        throw BeliefTooLarge("model enumeration would produce " + std::to_string(total) + " models");

    std::vector<StripsActionModel> out;
    StripsActionModel cur(nf, na);
    // Odometer over (effect choice, precondition choice) per action.
    std::vector<std::size_t> ei(na, 0), pi(na, 0);
    const std::size_t np = c.known_pre ? 1 : pre_terms.size();
    for (;;) {
        for (std::size_t a = 0; a < na; ++a) {
            for (std::size_t f = 0; f < nf; ++f) cur.set_effect(a, f, effect_choices[a][ei[a]][f]);
            cur.set_pre(a, c.known_pre ? (*c.known_pre)[a] : pre_terms[pi[a]]);
        }
        out.push_back(cur);
        std::size_t a = 0;
        for (; a < na; ++a) {
            if (++pi[a] < np) break;
            pi[a] = 0;
            if (++ei[a] < effect_choices[a].size()) break;
            ei[a] = 0;
        }
        if (a == na) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

OracleBelief::OracleBelief(std::size_t fluents, std::shared_ptr<const std::vector<StripsActionModel>> models,
                           std::vector<Pair> pairs)
    : nf_(fluents), models_(std::move(models)), pairs_(std::move(pairs)) {
    if (nf_ > 64) throw VocabularyTooLarge("oracle supports at most 64 fluents");
    std::sort(pairs_.begin(), pairs_.end());
    pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
    compile();
}

void OracleBelief::compile() {
    na_ = models_->empty() ? 0 : models_->front().num_actions();
    auto table = std::make_shared<std::vector<Compiled>>();
    table->reserve(models_->size() * na_);
    for (const auto& m : *models_) {
        for (std::size_t a = 0; a < na_; ++a) {
            Compiled c{0, 0, 0, 0};
            for (lit_t l : m.pre(a)) (lit_negated(l) ? c.pre_neg : c.pre_pos) |= 1ull << lit_atom(l);
            for (lit_t l : m.effects(a)) (lit_negated(l) ? c.clear : c.set) |= 1ull << lit_atom(l);
            table->push_back(c);
        }
    }
    compiled_ = std::move(table);
}

OracleBelief OracleBelief::all(std::size_t fluents, std::vector<StripsActionModel> models,
                               const std::vector<lit_t>& init, std::size_t cap) {
    if (fluents > 24) throw VocabularyTooLarge("oracle state enumeration over more than 24 fluents");
    const double total = static_cast<double>(models.size()) * static_cast<double>(1ull << fluents);
    if (total > static_cast<double>(cap)) throw BeliefTooLarge("initial oracle belief exceeds the pair cap");
    std::vector<Pair> pairs;
    for (std::uint64_t s = 0; s < (1ull << fluents); ++s) {
        bool ok = true;
        for (lit_t l : init)
            if ((((s >> lit_atom(l)) & 1u) != 0) == lit_negated(l)) ok = false;
        if (!ok) continue;
        for (std::uint32_t m = 0; m < models.size(); ++m) pairs.emplace_back(s, m);
    }
    return OracleBelief(fluents, std::make_shared<const std::vector<StripsActionModel>>(std::move(models)),
                        std::move(pairs));
}

bool OracleBelief::contains(std::uint64_t s, std::uint32_t m) const {
    return std::binary_search(pairs_.begin(), pairs_.end(), Pair{s, m});
}

OracleBelief OracleBelief::progress(std::size_t a) const {
    OracleBelief out = *this;
    out.pairs_.clear();
    for (auto [s, m] : pairs_) {
        const Compiled& c = (*compiled_)[m * na_ + a];
        if ((s & c.pre_pos) != c.pre_pos || (s & c.pre_neg) != 0) continue;
        out.pairs_.emplace_back((s | c.set) & ~c.clear, m);
    }
    std::sort(out.pairs_.begin(), out.pairs_.end());
    out.pairs_.erase(std::unique(out.pairs_.begin(), out.pairs_.end()), out.pairs_.end());
    return out;
}

OracleBelief OracleBelief::fail(std::size_t a) const {
    OracleBelief out = *this;
    out.pairs_.clear();
    for (auto [s, m] : pairs_) {
        const Compiled& c = (*compiled_)[m * na_ + a];
        if ((s & c.pre_pos) != c.pre_pos || (s & c.pre_neg) != 0) out.pairs_.emplace_back(s, m);
    }
    return out;
}

OracleBelief OracleBelief::filter(const std::vector<lit_t>& obs) const {
    std::uint64_t pos = 0, neg = 0;
    for (lit_t l : obs) (lit_negated(l) ? neg : pos) |= 1ull << lit_atom(l);
    if (pos & neg) throw InconsistentObservation("observation contains complementary literals");
    OracleBelief out = *this;
    out.pairs_.clear();
    for (auto p : pairs_)
        if ((p.first & pos) == pos && (p.first & neg) == 0) out.pairs_.push_back(p);
    return out;
}

OracleBelief oracle_slaf(const OracleBelief& b, const std::vector<OracleStep>& steps, std::size_t cap) {
    if (b.size() > cap) throw BeliefTooLarge("oracle belief exceeds " + std::to_string(cap) + " pairs");
    OracleBelief cur = b;
    for (const auto& st : steps) {
        cur = st.ok ? cur.progress(st.action) : cur.fail(st.action);
        cur = cur.filter(st.obs);
    }
    return cur;
}

}  // namespace slaf

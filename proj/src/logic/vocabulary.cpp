#include "slaf/logic/vocabulary.hpp"

#include <mutex>

#include "slaf/errors.hpp"

namespace slaf {

namespace {

const char* kind_word(PropKind k) {
    switch (k) {
        case PropKind::CausesPos:
        case PropKind::CausesNeg:
            return "CAUSES";
        case PropKind::Keeps:
            return "KEEPS";
        default:
            return "NEEDS";
    }
}

// Splits "(X KW Y)" into X, KW, Y where X and Y may be parenthesised.
bool split_prop(std::string_view s, std::string_view& x, std::string_view& kw, std::string_view& y) {
    if (s.size() < 5 || s.front() != '(' || s.back() != ')') return false;
    std::string_view body = s.substr(1, s.size() - 2);
    auto take = [](std::string_view in, std::size_t& pos) -> std::string_view {
        while (pos < in.size() && in[pos] == ' ') ++pos;
        const std::size_t start = pos;
        if (pos < in.size() && in[pos] == '(') {
            int depth = 0;
            for (; pos < in.size(); ++pos) {
                if (in[pos] == '(') ++depth;
                if (in[pos] == ')' && --depth == 0) {
                    ++pos;
                    break;
                }
            }
        } else {
            while (pos < in.size() && in[pos] != ' ') ++pos;
        }
        return in.substr(start, pos - start);
    };
    std::size_t pos = 0;
    x = take(body, pos);
    kw = take(body, pos);
    while (pos < body.size() && body[pos] == ' ') ++pos;
    y = body.substr(pos);
    return !x.empty() && !kw.empty() && !y.empty();
}

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> fluents, std::vector<std::string> actions)
    : fluents_(std::move(fluents)), actions_(std::move(actions)) {
    const std::size_t total = fluents_.size() * (2 + kPropKinds * actions_.size());
    if (total >= (1ull << 30)) throw VocabularyTooLarge("ground vocabulary exceeds 2^30 atoms");
    base_ = static_cast<atom_t>(total);
    for (std::uint32_t i = 0; i < fluents_.size(); ++i) {
        if (!fluent_index_.emplace(fluents_[i], i).second) throw Error("duplicate fluent name " + fluents_[i]);
    }
    for (std::uint32_t i = 0; i < actions_.size(); ++i) {
        if (!action_index_.emplace(actions_[i], i).second) throw Error("duplicate action name " + actions_[i]);
    }
}

Vocabulary::Vocabulary(const Vocabulary& other) { *this = other; }

Vocabulary& Vocabulary::operator=(const Vocabulary& other) {
    if (this == &other) return *this;
    std::shared_lock lock(other.mu_);
    fluents_ = other.fluents_;
    actions_ = other.actions_;
    fluent_index_ = other.fluent_index_;
    action_index_ = other.action_index_;
    base_ = other.base_;
    extras_ = other.extras_;
    extra_index_ = other.extra_index_;
    return *this;
}

std::size_t Vocabulary::size() const {
    std::shared_lock lock(mu_);
    return base_ + extras_.size();
}

AtomInfo Vocabulary::info(atom_t a) const {
    const std::size_t p = num_fluents();
    if (a < p) return {AtomKind::Fluent, a, 0, PropKind::Keeps};
    if (a < 2 * p) return {AtomKind::Primed, static_cast<std::uint32_t>(a - p), 0, PropKind::Keeps};
    if (a < base_) {
        const std::size_t rel = a - 2 * p;
        const std::size_t f = rel % p;
        const std::size_t ak = rel / p;
        return {AtomKind::ActionProp, static_cast<std::uint32_t>(f), static_cast<std::uint32_t>(ak / kPropKinds),
                static_cast<PropKind>(ak % kPropKinds)};
    }
    return {AtomKind::Extra, 0, 0, PropKind::Keeps};
}

std::string Vocabulary::name(atom_t a) const {
    const AtomInfo in = info(a);
    switch (in.kind) {
        case AtomKind::Fluent:
            return fluents_[in.fluent];
        case AtomKind::Primed:
            return fluents_[in.fluent] + "'";
        case AtomKind::ActionProp: {
            const std::string& f = fluents_[in.fluent];
            const bool negative = in.prop == PropKind::CausesNeg || in.prop == PropKind::NeedsNeg;
            return "(" + actions_[in.action] + " " + kind_word(in.prop) + " " + (negative ? "(NOT " + f + ")" : f) +
                   ")";
        }
        case AtomKind::Extra: {
            std::shared_lock lock(mu_);
            const std::size_t i = a - base_;
            if (i >= extras_.size()) throw Error("unknown atom id " + std::to_string(a));
            return extras_[i];
        }
    }
    return {};
}

std::optional<std::size_t> Vocabulary::find_fluent(std::string_view n) const {
    auto it = fluent_index_.find(std::string(n));
    if (it == fluent_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> Vocabulary::find_action(std::string_view n) const {
    auto it = action_index_.find(std::string(n));
    if (it == action_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<atom_t> Vocabulary::find(std::string_view n) const {
    {
        std::shared_lock lock(mu_);
        auto it = extra_index_.find(std::string(n));
        if (it != extra_index_.end()) return it->second;
    }
    if (auto f = find_fluent(n)) return fluent(*f);
    if (!n.empty() && n.back() == '\'') {
        if (auto f = find_fluent(n.substr(0, n.size() - 1))) return primed(*f);
    }
    std::string_view x, kw, y;
    if (!split_prop(n, x, kw, y)) return std::nullopt;
    auto a = find_action(x);
    if (!a) return std::nullopt;
    bool negative = false;
    if (y.size() > 6 && y.substr(0, 5) == "(NOT " && y.back() == ')') {
        negative = true;
        y = y.substr(5, y.size() - 6);
    }
    auto f = find_fluent(y);
    if (!f) return std::nullopt;
    if (kw == "CAUSES") return causes(*a, *f, !negative);
    if (kw == "NEEDS") return needs(*a, *f, !negative);
    if (kw == "KEEPS" && !negative) return keeps(*a, *f);
    return std::nullopt;
}

atom_t Vocabulary::intern(const std::string& n) {
    {
        std::shared_lock lock(mu_);
        auto it = extra_index_.find(n);
        if (it != extra_index_.end()) return it->second;
    }
    std::unique_lock lock(mu_);
    auto it = extra_index_.find(n);
    if (it != extra_index_.end()) return it->second;
    const atom_t id = base_ + static_cast<atom_t>(extras_.size());
    if (id >= (1u << 30)) throw VocabularyTooLarge("atom table exhausted");
    extras_.push_back(n);
    extra_index_.emplace(n, id);
    return id;
}

std::string literal_name(const Vocabulary& v, lit_t l) {
    return lit_negated(l) ? "(NOT " + v.name(lit_atom(l)) + ")" : v.name(lit_atom(l));
}

}  // namespace slaf

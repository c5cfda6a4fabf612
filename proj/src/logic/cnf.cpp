#include "slaf/logic/cnf.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_map>

namespace slaf {

std::optional<Clause> make_clause(std::vector<lit_t> lits) {
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (std::size_t i = 1; i < lits.size(); ++i) {
        if (lit_atom(lits[i]) == lit_atom(lits[i - 1])) return std::nullopt;
    }
    return lits;
}

std::optional<Clause> merge_clauses(const Clause& a, const Clause& b) {
    Clause out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        lit_t next;
        if (j == b.size() || (i < a.size() && a[i] < b[j])) {
            next = a[i++];
        } else if (i == a.size() || b[j] < a[i]) {
            next = b[j++];
        } else {
            next = a[i++];
            ++j;
        }
        if (!out.empty() && lit_atom(out.back()) == lit_atom(next)) return std::nullopt;
        out.push_back(next);
    }
    return out;
}

bool clause_subset(const Clause& a, const Clause& b) {
    if (a.size() > b.size()) return false;
    std::size_t j = 0;
    for (lit_t l : a) {
        while (j < b.size() && b[j] < l) ++j;
        if (j == b.size() || b[j] != l) return false;
        ++j;
    }
    return true;
}

bool Cnf::is_false() const {
    return std::any_of(clauses.begin(), clauses.end(), [](const Clause& c) { return c.empty(); });
}

std::size_t Cnf::max_clause_length() const {
    std::size_t m = 0;
    for (const auto& c : clauses) m = std::max(m, c.size());
    return m;
}

std::size_t Cnf::literal_count() const {
    std::size_t n = 0;
    for (const auto& c : clauses) n += c.size();
    return n;
}

std::vector<atom_t> Cnf::atoms() const {
    std::vector<atom_t> out;
    for (const auto& c : clauses)
        for (lit_t l : c) out.push_back(lit_atom(l));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void Cnf::append(const Cnf& other) { clauses.insert(clauses.end(), other.clauses.begin(), other.clauses.end()); }

namespace {

std::uint64_t signature(const Clause& c) {
    std::uint64_t s = 0;
    for (lit_t l : c) s |= 1ull << ((l * 0x9E3779B1u) >> 26);
    return s;
}

}  // namespace

void simplify(Cnf& f) {
    auto& cs = f.clauses;
    if (cs.empty()) return;
    for (const auto& c : cs) {
        if (c.empty()) {
            cs.assign(1, Clause{});
            return;
        }
    }
    std::sort(cs.begin(), cs.end(), [](const Clause& a, const Clause& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());

    // Kept clauses are indexed under their smallest literal. A kept clause D
    // subsumes C only if D's smallest literal is in C, so scanning the index
    // buckets of C's literals visits every candidate exactly once.
    std::unordered_map<lit_t, std::vector<std::uint32_t>> index;
    std::vector<std::uint64_t> sigs;
    std::vector<Clause> kept;
    kept.reserve(cs.size());
    for (auto& c : cs) {
        const std::uint64_t sc = signature(c);
        bool subsumed = false;
        for (lit_t l : c) {
            auto it = index.find(l);
            if (it == index.end()) continue;
            for (std::uint32_t k : it->second) {
                if ((sigs[k] & ~sc) != 0) continue;
                if (clause_subset(kept[k], c)) {
                    subsumed = true;
                    break;
                }
            }
            if (subsumed) break;
        }
        if (subsumed) continue;
        index[c.front()].push_back(static_cast<std::uint32_t>(kept.size()));
        sigs.push_back(sc);
        kept.push_back(std::move(c));
    }
    std::sort(kept.begin(), kept.end());
    cs = std::move(kept);
}

Cnf simplified(Cnf f) {
    simplify(f);
    return f;
}

Cnf conjoin(const Cnf& a, const Cnf& b) {
    Cnf out = a;
    out.append(b);
    simplify(out);
    return out;
}

bool evaluate(const Cnf& f, const std::vector<bool>& assignment_by_atom) {
    for (const auto& c : f.clauses) {
        bool sat = false;
        for (lit_t l : c) {
            if (assignment_by_atom[lit_atom(l)] != lit_negated(l)) {
                sat = true;
                break;
            }
        }
        if (!sat) return false;
    }
    return true;
}

}  // namespace slaf

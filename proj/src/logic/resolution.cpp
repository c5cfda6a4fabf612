#include "slaf/logic/resolution.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "slaf/errors.hpp"

namespace slaf {

Cnf resolve_out(const Cnf& f, atom_t x, std::size_t clause_limit) {
    const lit_t pos = mk_lit(x, false);
    const lit_t neg = mk_lit(x, true);
    std::vector<const Clause*> with_pos, with_neg;
    Cnf out;
    for (const auto& c : f.clauses) {
        if (std::binary_search(c.begin(), c.end(), pos)) with_pos.push_back(&c);
        else if (std::binary_search(c.begin(), c.end(), neg)) with_neg.push_back(&c);
        else out.add(c);
    }
    for (const Clause* a : with_pos) {
        Clause alpha;
        for (lit_t l : *a)
            if (l != pos) alpha.push_back(l);
        for (const Clause* b : with_neg) {
            Clause beta;
            for (lit_t l : *b)
                if (l != neg) beta.push_back(l);
            if (auto r = merge_clauses(alpha, beta)) {
                out.add(std::move(*r));
                if (out.clauses.size() > clause_limit)
                    throw ClauseExplosion("resolution exceeded " + std::to_string(clause_limit) + " clauses");
            }
        }
    }
    simplify(out);
    return out;
}

Cnf eliminate_vars(const Cnf& f, const std::vector<atom_t>& xs, std::size_t clause_limit) {
    Cnf cur = f;
    std::unordered_set<atom_t> todo(xs.begin(), xs.end());
    while (!todo.empty()) {
        if (cur.is_false()) return Cnf::falsity();
        std::unordered_map<atom_t, std::size_t> occ;
        for (atom_t a : todo) occ[a] = 0;
        for (const auto& c : cur.clauses)
            for (lit_t l : c)
                if (auto it = occ.find(lit_atom(l)); it != occ.end()) ++it->second;
        atom_t best = *todo.begin();
        std::size_t best_n = SIZE_MAX;
        for (auto [a, n] : occ) {
            if (n < best_n || (n == best_n && a < best)) {
                best = a;
                best_n = n;
            }
        }
        todo.erase(best);
        if (best_n == 0) continue;
        cur = resolve_out(cur, best, clause_limit);
    }
    return cur;
}

Cnf rename_primed(const Cnf& f, const Vocabulary& v) {
    Cnf out;
    out.clauses.reserve(f.clauses.size());
    for (const auto& c : f.clauses) {
        std::vector<lit_t> lits;
        lits.reserve(c.size());
        for (lit_t l : c) {
            const atom_t a = lit_atom(l);
            if (v.is_fluent(a)) throw MixedVocabulary("unprimed fluent " + v.name(a) + " present during renaming");
            if (v.is_primed(a)) lits.push_back(mk_lit(v.fluent(a - v.num_fluents()), lit_negated(l)));
            else lits.push_back(l);
        }
        if (auto cl = make_clause(std::move(lits))) out.add(std::move(*cl));
    }
    simplify(out);
    return out;
}

std::vector<std::uint64_t> enumerate_models(const NnfStore& store, NodeRef root, const std::vector<atom_t>& vocab,
                                            std::size_t max_atoms) {
    if (vocab.size() > max_atoms || vocab.size() > 63)
        throw VocabularyTooLarge("enumeration over " + std::to_string(vocab.size()) + " atoms exceeds the cap of " +
                                 std::to_string(max_atoms));
    NnfEvaluator ev(store, root, vocab);
    std::vector<std::uint64_t> out;
    const std::uint64_t n = 1ull << vocab.size();
    for (std::uint64_t m = 0; m < n; ++m)
        if (ev.eval_mask(m)) out.push_back(m);
    return out;
}

std::vector<std::uint64_t> enumerate_models(const Cnf& f, const std::vector<atom_t>& vocab, std::size_t max_atoms) {
    NnfStore store;
    const NodeRef root = store.from_cnf(f);
    return enumerate_models(store, root, vocab, max_atoms);
}

std::vector<std::uint64_t> project_models(const std::vector<std::uint64_t>& models, const std::vector<atom_t>& vocab,
                                          const std::vector<atom_t>& onto) {
    std::vector<int> src(onto.size(), -1);
    for (std::size_t i = 0; i < onto.size(); ++i) {
        auto it = std::find(vocab.begin(), vocab.end(), onto[i]);
        if (it == vocab.end()) throw Error("projection target outside vocabulary");
        src[i] = static_cast<int>(it - vocab.begin());
    }
    std::vector<std::uint64_t> out;
    out.reserve(models.size());
    for (std::uint64_t m : models) {
        std::uint64_t p = 0;
        for (std::size_t i = 0; i < onto.size(); ++i)
            if ((m >> src[i]) & 1u) p |= 1ull << i;
        out.push_back(p);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

DimacsMap dimacs_map_for(const Cnf& f) {
    DimacsMap m;
    m.index_to_atom.push_back(0);
    for (atom_t a : f.atoms()) {
        m.atom_to_index.emplace(a, static_cast<int>(m.index_to_atom.size()));
        m.index_to_atom.push_back(a);
    }
    return m;
}

DimacsMap write_dimacs(const Cnf& f, std::ostream& out, const Vocabulary& v) {
    DimacsMap m = dimacs_map_for(f);
    for (std::size_t i = 1; i < m.index_to_atom.size(); ++i)
        out << "c var " << i << " = " << v.name(m.index_to_atom[i]) << '\n';
    out << "p cnf " << (m.index_to_atom.size() - 1) << ' ' << f.clauses.size() << '\n';
    for (const auto& c : f.clauses) {
        for (lit_t l : c) out << (lit_negated(l) ? "-" : "") << m.atom_to_index.at(lit_atom(l)) << ' ';
        out << "0\n";
    }
    if (!out) throw Error("I/O error while writing DIMACS");
    return m;
}

Cnf read_dimacs(std::istream& in, Vocabulary& v, DimacsMap* map_out) {
    std::unordered_map<long, atom_t> named;
    std::string line;
    long declared_vars = -1, declared_clauses = -1;
    Cnf out;
    std::vector<lit_t> cur;
    auto atom_for = [&](long idx) -> atom_t {
        if (auto it = named.find(idx); it != named.end()) return it->second;
        const atom_t a = v.intern("v" + std::to_string(idx));
        named.emplace(idx, a);
        return a;
    };
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == 'c') {
            // "c var <i> = <name>"
            if (line.rfind("c var ", 0) == 0) {
                const auto eq = line.find(" = ");
                if (eq != std::string::npos) {
                    const long idx = std::stol(line.substr(6, eq - 6));
                    const std::string name = line.substr(eq + 3);
                    auto found = v.find(name);
                    named[idx] = found ? *found : v.intern(name);
                }
            }
            continue;
        }
        if (line[0] == 'p') {
            std::istringstream ps(line);
            std::string p, fmt;
            ps >> p >> fmt >> declared_vars >> declared_clauses;
            if (fmt != "cnf" || !ps) throw ParseError("bad DIMACS problem line", line_no, 1);
            continue;
        }
        std::istringstream ls(line);
        long x;
        while (ls >> x) {
            if (x == 0) {
                if (auto c = make_clause(cur)) out.add(std::move(*c));
                cur.clear();
            } else {
                cur.push_back(mk_lit(atom_for(x < 0 ? -x : x), x < 0));
            }
        }
    }
    if (!cur.empty()) throw ParseError("unterminated DIMACS clause", line_no, 1);
    if (declared_clauses >= 0 && static_cast<long>(out.clauses.size()) > declared_clauses)
        throw ParseError("more clauses than declared in DIMACS header");
    std::sort(out.clauses.begin(), out.clauses.end());
    if (map_out) {
        map_out->index_to_atom.assign(1, 0);
        map_out->atom_to_index.clear();
        for (long i = 1; i <= std::max<long>(declared_vars, 0); ++i) {
            const atom_t a = atom_for(i);
            map_out->index_to_atom.push_back(a);
            map_out->atom_to_index[a] = static_cast<int>(i);
        }
    }
    return out;
}

}  // namespace slaf

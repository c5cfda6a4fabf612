#include "slaf/logic/nnf.hpp"

#include <algorithm>
#include <sstream>

#include "slaf/errors.hpp"

namespace slaf {

namespace {

std::uint64_t mix(std::uint64_t h) {
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdull;
    h ^= h >> 33;
    h *= 0xc4ceb9fe1a85ec53ull;
    h ^= h >> 33;
    return h;
}

// Shared normalisation for And/Or: drop the neutral constant, short-circuit
// on the absorbing one, sort, dedupe, detect complementary literal pairs.
// Returns the folded result or kLitBit to signal "build a node".
NodeRef fold(std::vector<NodeRef>& kids, NodeRef neutral, NodeRef absorbing) {
    std::size_t w = 0;
    for (NodeRef k : kids) {
        if (k == neutral) continue;
        if (k == absorbing) return absorbing;
        kids[w++] = k;
    }
    kids.resize(w);
    std::sort(kids.begin(), kids.end());
    kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
    for (std::size_t i = 1; i < kids.size(); ++i) {
        if (NnfStore::is_lit(kids[i]) && NnfStore::is_lit(kids[i - 1]) &&
            lit_atom(NnfStore::lit_of(kids[i])) == lit_atom(NnfStore::lit_of(kids[i - 1])))
            return absorbing;
    }
    if (kids.empty()) return neutral;
    if (kids.size() == 1) return kids[0];
    return NnfStore::kLitBit;
}

}  // namespace

NnfStore::NnfStore() {
    nodes_.push_back({NodeKind::True, 0, 0});
    nodes_.push_back({NodeKind::False, 0, 0});
    table_.assign(1024, 0);
}

NodeKind NnfStore::kind(NodeRef n) const {
    if (is_lit(n)) return NodeKind::Lit;
    return nodes_[n].kind;
}

std::span<const NodeRef> NnfStore::children(NodeRef n) const {
    if (is_lit(n)) return {};
    const Node& nd = nodes_[n];
    return {pool_.data() + nd.first, nd.count};
}

std::uint64_t NnfStore::hash_node(NodeKind k, const NodeRef* kids, std::uint32_t n) const {
    std::uint64_t h = static_cast<std::uint64_t>(k) * 0x9E3779B97F4A7C15ull + n;
    for (std::uint32_t i = 0; i < n; ++i) h = mix(h ^ (kids[i] + 0x9E3779B97F4A7C15ull + (h << 6)));
    return mix(h);
}

void NnfStore::grow_table() {
    std::vector<std::uint32_t> fresh(table_.size() * 2, 0);
    const std::size_t mask = fresh.size() - 1;
    for (std::uint32_t slot : table_) {
        if (slot == 0) continue;
        const Node& nd = nodes_[slot];
        std::size_t pos = hash_node(nd.kind, pool_.data() + nd.first, nd.count) & mask;
        while (fresh[pos] != 0) pos = (pos + 1) & mask;
        fresh[pos] = slot;
    }
    table_.swap(fresh);
}

NodeRef NnfStore::intern(NodeKind k, std::vector<NodeRef>& kids) {
    const auto n = static_cast<std::uint32_t>(kids.size());
    const std::size_t mask = table_.size() - 1;
    std::size_t pos = hash_node(k, kids.data(), n) & mask;
    while (table_[pos] != 0) {
        const Node& nd = nodes_[table_[pos]];
        if (nd.kind == k && nd.count == n && std::equal(kids.begin(), kids.end(), pool_.begin() + nd.first))
            return table_[pos];
        pos = (pos + 1) & mask;
    }
    if (nodes_.size() >= kLitBit - 1) throw Error("NNF store exhausted");
    const auto id = static_cast<NodeRef>(nodes_.size());
    nodes_.push_back({k, static_cast<std::uint32_t>(pool_.size()), n});
    pool_.insert(pool_.end(), kids.begin(), kids.end());
    table_[pos] = id;
    if (++table_used_ * 2 > table_.size()) grow_table();
    return id;
}

NodeRef NnfStore::mk_and(std::vector<NodeRef> kids) {
    const NodeRef r = fold(kids, kTrue, kFalse);
    return r == kLitBit ? intern(NodeKind::And, kids) : r;
}

NodeRef NnfStore::mk_or(std::vector<NodeRef> kids) {
    const NodeRef r = fold(kids, kFalse, kTrue);
    return r == kLitBit ? intern(NodeKind::Or, kids) : r;
}

NodeRef NnfStore::mk_term(const std::vector<lit_t>& lits) {
    std::vector<NodeRef> kids;
    kids.reserve(lits.size());
    for (lit_t l : lits) kids.push_back(lit(l));
    return mk_and(std::move(kids));
}

NodeRef NnfStore::mk_clause(const Clause& c) {
    std::vector<NodeRef> kids;
    kids.reserve(c.size());
    for (lit_t l : c) kids.push_back(lit(l));
    return mk_or(std::move(kids));
}

NodeRef NnfStore::from_cnf(const Cnf& f) {
    std::vector<NodeRef> kids;
    kids.reserve(f.clauses.size());
    for (const auto& c : f.clauses) kids.push_back(mk_clause(c));
    return mk_and(std::move(kids));
}

std::vector<NodeRef> NnfStore::topo_order(std::span<const NodeRef> roots) const {
    std::vector<NodeRef> order;
    std::vector<std::uint8_t> seen(nodes_.size(), 0);
    std::vector<std::pair<NodeRef, std::uint32_t>> stack;
    for (NodeRef r : roots) {
        if (is_lit(r) || is_const(r) || seen[r]) continue;
        seen[r] = 1;
        stack.emplace_back(r, 0);
        while (!stack.empty()) {
            auto& [n, i] = stack.back();
            const Node& nd = nodes_[n];
            if (i < nd.count) {
                const NodeRef c = pool_[nd.first + i];
                ++i;
                if (!is_lit(c) && !is_const(c) && !seen[c]) {
                    seen[c] = 1;
                    stack.emplace_back(c, 0);
                }
                continue;
            }
            order.push_back(n);
            stack.pop_back();
        }
    }
    return order;
}

std::size_t NnfStore::reachable(std::span<const NodeRef> roots) const { return topo_order(roots).size(); }

std::vector<atom_t> NnfStore::atoms(NodeRef root) const {
    std::vector<atom_t> out;
    if (is_lit(root)) return {lit_atom(lit_of(root))};
    for (NodeRef n : topo_order(std::span<const NodeRef>(&root, 1)))
        for (NodeRef c : children(n))
            if (is_lit(c)) out.push_back(lit_atom(lit_of(c)));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

NodeRef NnfStore::negate(NodeRef root) {
    return [&] {
        if (root == kTrue) return kFalse;
        if (root == kFalse) return kTrue;
        if (is_lit(root)) return lit(lit_not(lit_of(root)));
        std::unordered_map<NodeRef, NodeRef> memo;
        for (NodeRef n : topo_order(std::span<const NodeRef>(&root, 1))) {
            const auto kids_view = children(n);
            std::vector<NodeRef> kids(kids_view.begin(), kids_view.end());
            for (auto& c : kids) {
                if (c == kTrue) c = kFalse;
                else if (c == kFalse) c = kTrue;
                else if (is_lit(c)) c = lit(lit_not(lit_of(c)));
                else c = memo.at(c);
            }
            memo[n] = nodes_[n].kind == NodeKind::And ? mk_or(std::move(kids)) : mk_and(std::move(kids));
        }
        return memo.at(root);
    }();
}

NodeRef NnfStore::substitute(NodeRef root, const std::function<NodeRef(lit_t)>& fn) {
    if (is_const(root)) return root;
    if (is_lit(root)) return fn(lit_of(root));
    std::unordered_map<NodeRef, NodeRef> memo;
    for (NodeRef n : topo_order(std::span<const NodeRef>(&root, 1))) {
        const auto kids_view = children(n);
        std::vector<NodeRef> kids(kids_view.begin(), kids_view.end());
        for (auto& c : kids) {
            if (is_const(c)) continue;
            c = is_lit(c) ? fn(lit_of(c)) : memo.at(c);
        }
        memo[n] = nodes_[n].kind == NodeKind::And ? mk_and(std::move(kids)) : mk_or(std::move(kids));
    }
    return memo.at(root);
}

// ---------------------------------------------------------------------------
// CNF rendering

namespace {

void guard(std::size_t n, const CnfOptions& opts) {
    if (n > opts.clause_limit)
        throw ClauseExplosion("CNF conversion exceeded " + std::to_string(opts.clause_limit) + " clauses");
}

void apply_rewrite(std::vector<Clause>& cs, const CnfOptions& opts) {
    if (!opts.rewrite) return;
    std::size_t w = 0;
    for (auto& c : cs) {
        if (!opts.rewrite(c)) continue;
        auto canon = make_clause(std::move(c));
        if (!canon) continue;
        cs[w++] = std::move(*canon);
    }
    cs.resize(w);
}

void tidy(std::vector<Clause>& cs, const CnfOptions& opts) {
    apply_rewrite(cs, opts);
    Cnf tmp{std::move(cs)};
    simplify(tmp);
    cs = std::move(tmp.clauses);
}

}  // namespace

const std::vector<Clause>& CnfRenderer::clauses_of(NodeRef root) {
    if (auto it = memo_.find(root); it != memo_.end()) return it->second;
    static const std::vector<Clause> kEmpty;
    // Post-order over the part of the sub-DAG not yet memoised.
    std::vector<std::pair<NodeRef, std::uint32_t>> stack{{root, 0}};
    while (!stack.empty()) {
        auto& [n, i] = stack.back();
        const auto kids = store_.children(n);
        if (i < kids.size()) {
            const NodeRef c = kids[i++];
            if (!NnfStore::is_lit(c) && !NnfStore::is_const(c) && !memo_.count(c)) stack.emplace_back(c, 0);
            continue;
        }
        const NodeRef node = n;
        stack.pop_back();
        if (memo_.count(node)) continue;
        std::vector<Clause> out;
        if (store_.kind(node) == NodeKind::And) {
            for (NodeRef c : store_.children(node)) {
                if (c == NnfStore::kTrue) continue;
                if (c == NnfStore::kFalse) {
                    out.assign(1, Clause{});
                    break;
                }
                if (NnfStore::is_lit(c)) {
                    out.push_back(Clause{NnfStore::lit_of(c)});
                } else {
                    const auto& sub = memo_.at(c);
                    out.insert(out.end(), sub.begin(), sub.end());
                }
                guard(out.size(), opts_);
            }
        } else {
            out.assign(1, Clause{});
            for (NodeRef c : store_.children(node)) {
                std::vector<Clause> single;
                const std::vector<Clause>* sub = &single;
                if (c == NnfStore::kFalse) continue;
                if (c == NnfStore::kTrue) {
                    out.clear();
                    break;
                }
                if (NnfStore::is_lit(c)) single.push_back(Clause{NnfStore::lit_of(c)});
                else sub = &memo_.at(c);
                std::vector<Clause> next;
                guard(out.size() * sub->size(), opts_);
                next.reserve(out.size() * sub->size());
                for (const auto& a : out)
                    for (const auto& b : *sub)
                        if (auto m = merge_clauses(a, b)) next.push_back(std::move(*m));
                out = std::move(next);
                tidy(out, opts_);
                if (out.empty()) break;
            }
        }
        tidy(out, opts_);
        memo_.emplace(node, std::move(out));
    }
    auto it = memo_.find(root);
    return it == memo_.end() ? kEmpty : it->second;
}

Cnf CnfRenderer::render(NodeRef root) { return render(std::span<const NodeRef>(&root, 1)); }

Cnf CnfRenderer::render(std::span<const NodeRef> roots) {
    Cnf out;
    std::unordered_map<NodeRef, bool> seen;
    std::vector<NodeRef> stack(roots.begin(), roots.end());
    while (!stack.empty()) {
        const NodeRef n = stack.back();
        stack.pop_back();
        if (n == NnfStore::kTrue) continue;
        if (n == NnfStore::kFalse) return Cnf::falsity();
        if (NnfStore::is_lit(n)) {
            out.add(Clause{NnfStore::lit_of(n)});
            continue;
        }
        if (!seen.emplace(n, true).second) continue;
        if (store_.kind(n) == NodeKind::And) {
            for (NodeRef c : store_.children(n)) stack.push_back(c);
            continue;
        }
        const auto& cs = clauses_of(n);
        out.clauses.insert(out.clauses.end(), cs.begin(), cs.end());
        guard(out.clauses.size(), opts_);
    }
    apply_rewrite(out.clauses, opts_);
    simplify(out);
    return out;
}

Cnf to_cnf(const NnfStore& store, NodeRef root, const CnfOptions& opts) {
    CnfRenderer r(store, opts);
    return r.render(root);
}

// ---------------------------------------------------------------------------
// Evaluation

NnfEvaluator::NnfEvaluator(const NnfStore& store, NodeRef root, const std::vector<atom_t>& vocab) {
    std::unordered_map<atom_t, std::uint32_t> pos;
    for (std::uint32_t i = 0; i < vocab.size(); ++i) pos.emplace(vocab[i], i);
    std::unordered_map<NodeRef, std::uint32_t> slot;
    auto operand = [&](NodeRef c) -> std::uint32_t {
        if (c == NnfStore::kTrue) return 0;
        if (c == NnfStore::kFalse) return 1;
        if (NnfStore::is_lit(c)) {
            const lit_t l = NnfStore::lit_of(c);
            auto it = pos.find(lit_atom(l));
            if (it == pos.end()) throw Error("formula atom outside the enumeration vocabulary");
            return 0x80000000u | (it->second * 2 + (lit_negated(l) ? 1u : 0u));
        }
        return slot.at(c);
    };
    for (NodeRef n : store.topo_order(std::span<const NodeRef>(&root, 1))) {
        Op op{store.kind(n) == NodeKind::And, static_cast<std::uint32_t>(operands_.size()), 0};
        for (NodeRef c : store.children(n)) {
            operands_.push_back(operand(c));
            ++op.count;
        }
        slot.emplace(n, static_cast<std::uint32_t>(ops_.size() + 2));
        ops_.push_back(op);
    }
    root_operand_ = operand(root);
    values_.assign(ops_.size() + 2, 0);
    values_[0] = 1;
    values_[1] = 0;
}

bool NnfEvaluator::operator()(const std::vector<bool>& by_position) const {
    auto get = [&](std::uint32_t o) -> bool {
        if (o & 0x80000000u) {
            const std::uint32_t p = (o & 0x7fffffffu);
            return by_position[p >> 1] != ((p & 1u) != 0);
        }
        return values_[o] != 0;
    };
    for (std::size_t i = 0; i < ops_.size(); ++i) {
        const Op& op = ops_[i];
        bool v = op.is_and;
        for (std::uint32_t k = 0; k < op.count; ++k) {
            if (get(operands_[op.first + k]) != op.is_and) {
                v = !op.is_and;
                break;
            }
        }
        values_[i + 2] = v ? 1 : 0;
    }
    return get(root_operand_);
}

bool NnfEvaluator::eval_mask(std::uint64_t mask) const {
    auto get = [&](std::uint32_t o) -> bool {
        if (o & 0x80000000u) {
            const std::uint32_t p = (o & 0x7fffffffu);
            return (((mask >> (p >> 1)) & 1u) != 0) != ((p & 1u) != 0);
        }
        return values_[o] != 0;
    };
    for (std::size_t i = 0; i < ops_.size(); ++i) {
        const Op& op = ops_[i];
        bool v = op.is_and;
        for (std::uint32_t k = 0; k < op.count; ++k) {
            if (get(operands_[op.first + k]) != op.is_and) {
                v = !op.is_and;
                break;
            }
        }
        values_[i + 2] = v ? 1 : 0;
    }
    return get(root_operand_);
}

std::string to_sexp(const NnfStore& store, NodeRef root, const Vocabulary& v) {
    // Tree expansion; meant for small formulas in diagnostics and tests.
    std::ostringstream os;
    std::vector<std::pair<NodeRef, std::uint32_t>> stack{{root, 0}};
    while (!stack.empty()) {
        auto& [n, i] = stack.back();
        if (n == NnfStore::kTrue) {
            os << "TRUE";
        } else if (n == NnfStore::kFalse) {
            os << "FALSE";
        } else if (NnfStore::is_lit(n)) {
            os << literal_name(v, NnfStore::lit_of(n));
        } else {
            const auto kids = store.children(n);
            if (i == 0) os << (store.kind(n) == NodeKind::And ? "(AND" : "(OR");
            if (i < kids.size()) {
                os << ' ';
                const NodeRef c = kids[i++];
                stack.emplace_back(c, 0);
                continue;
            }
            os << ')';
        }
        stack.pop_back();
    }
    return os.str();
}

}  // namespace slaf

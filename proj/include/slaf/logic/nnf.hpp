#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "slaf/logic/cnf.hpp"

namespace slaf {

// Reference into an NnfStore. 0 is TRUE, 1 is FALSE, references with the top
// bit set are literals (literal code in the low bits), anything else indexes
// an interior And/Or node.
using NodeRef = std::uint32_t;

enum class NodeKind : std::uint8_t { True, False, Lit, And, Or };

// Hash-consed NNF DAG arena. Nodes are immutable once created; structurally
// equal nodes share one reference, so equality of references decides
// structural equality. Constant folding happens at construction.
class NnfStore {
public:
    static constexpr NodeRef kTrue = 0;
    static constexpr NodeRef kFalse = 1;
    static constexpr NodeRef kLitBit = 0x80000000u;

    NnfStore();

    static NodeRef lit(lit_t l) { return kLitBit | l; }
    static NodeRef atom(atom_t a, bool negated = false) { return lit(mk_lit(a, negated)); }
    static bool is_lit(NodeRef n) { return (n & kLitBit) != 0; }
    static lit_t lit_of(NodeRef n) { return n & ~kLitBit; }
    static bool is_const(NodeRef n) { return n <= kFalse; }

    NodeKind kind(NodeRef n) const;
    std::span<const NodeRef> children(NodeRef n) const;

    NodeRef mk_and(std::vector<NodeRef> kids);
    NodeRef mk_or(std::vector<NodeRef> kids);
    NodeRef mk_and(NodeRef a, NodeRef b) { return mk_and(std::vector<NodeRef>{a, b}); }
    NodeRef mk_or(NodeRef a, NodeRef b) { return mk_or(std::vector<NodeRef>{a, b}); }
    NodeRef mk_term(const std::vector<lit_t>& lits);
    NodeRef mk_clause(const Clause& c);
    NodeRef from_cnf(const Cnf& f);

    // NNF negation by De Morgan, memoized per call.
    NodeRef negate(NodeRef n);

    // Replaces literal leaves according to fn (which receives a literal and
    // returns the replacement node); results are rebuilt with folding.
    NodeRef substitute(NodeRef root, const std::function<NodeRef(lit_t)>& fn);

    // Number of interior nodes ever created.
    std::size_t size() const { return nodes_.size() - 2; }
    // Interior nodes reachable from the given roots.
    std::size_t reachable(std::span<const NodeRef> roots) const;

    // Interior nodes in children-before-parents order, restricted to those
    // reachable from the roots.
    std::vector<NodeRef> topo_order(std::span<const NodeRef> roots) const;

    std::vector<atom_t> atoms(NodeRef root) const;

private:
    struct Node {
        NodeKind kind;
        std::uint32_t first;
        std::uint32_t count;
    };

    NodeRef intern(NodeKind k, std::vector<NodeRef>& kids);
    std::uint64_t hash_node(NodeKind k, const NodeRef* kids, std::uint32_t n) const;
    void grow_table();

    std::vector<Node> nodes_;
    std::vector<NodeRef> pool_;
    std::vector<std::uint32_t> table_;
    std::size_t table_used_ = 0;
};

// Formula handle: a root inside a store.
struct Nnf {
    NnfStore* store;
    NodeRef root;
};

struct CnfOptions {
    std::size_t clause_limit = 10'000'000;
    // Optional rewrite applied to every produced clause. Must preserve
    // equivalence under whatever background axioms the caller assumes.
    // Returns false to drop the clause (it became a tautology).
    std::function<bool(Clause&)> rewrite;
};

// Distributive CNF conversion with tautology removal and subsumption. Top-level
// conjunction chains are walked iteratively, so deep belief DAGs are fine.
Cnf to_cnf(const NnfStore& store, NodeRef root, const CnfOptions& opts = {});

// Memoizing renderer that keeps clause sets of disjunctive subformulas between
// calls; useful when successive renderings share most of their DAG.
class CnfRenderer {
public:
    explicit CnfRenderer(const NnfStore& store, CnfOptions opts = {}) : store_(store), opts_(std::move(opts)) {}
    Cnf render(NodeRef root);
    Cnf render(std::span<const NodeRef> roots);
    void clear() { memo_.clear(); }

private:
    const std::vector<Clause>& clauses_of(NodeRef n);
    const NnfStore& store_;
    CnfOptions opts_;
    std::unordered_map<NodeRef, std::vector<Clause>> memo_;
};

// Evaluates a formula under many assignments. Atoms are mapped to positions of
// a caller-provided vocabulary; atoms outside it raise an error.
class NnfEvaluator {
public:
    NnfEvaluator(const NnfStore& store, NodeRef root, const std::vector<atom_t>& vocab);
    bool operator()(const std::vector<bool>& by_position) const;
    bool eval_mask(std::uint64_t mask) const;

private:
    struct Op {
        bool is_and;
        std::uint32_t first;
        std::uint32_t count;
    };
    // Operand encoding: value slot index, or literal (position*2+neg) | bit31.
    std::vector<Op> ops_;
    std::vector<std::uint32_t> operands_;
    std::uint32_t root_operand_ = 0;
    mutable std::vector<std::uint8_t> values_;
};

std::string to_sexp(const NnfStore& store, NodeRef root, const Vocabulary& v);

}  // namespace slaf

#include "slaf/logic/snapshot.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>
#include <unordered_map>

#include "slaf/errors.hpp"

namespace slaf {

namespace {

void write_quoted(std::ostringstream& out, const std::string& s) {
    out << '"';
    for (char c : s) {
        if (c == '"' || c == '\\') out << '\\';
        out << c;
    }
    out << '"';
}

void write_ref(std::ostringstream& out, NodeRef r, const std::unordered_map<NodeRef, std::size_t>& ids,
               const Vocabulary& v) {
    if (r == NnfStore::kTrue) {
        out << "TRUE";
    } else if (r == NnfStore::kFalse) {
        out << "FALSE";
    } else if (NnfStore::is_lit(r)) {
        const lit_t l = NnfStore::lit_of(r);
        if (lit_negated(l)) {
            out << "(NOT ";
            write_quoted(out, v.name(lit_atom(l)));
            out << ')';
        } else {
            write_quoted(out, v.name(lit_atom(l)));
        }
    } else {
        out << 'n' << ids.at(r);
    }
}

class Reader {
public:
    Reader(std::string_view s, NnfStore& store, Vocabulary& v) : s_(s), store_(store), v_(v) {}

    std::vector<NodeRef> run() {
        expect('(');
        if (word() != "dag") fail("expected dag");
        std::vector<NodeRef> roots;
        for (;;) {
            skip();
            expect('(');
            const std::string head = word();
            if (head == "roots") {
                for (;;) {
                    skip();
                    if (peek() == ')') break;
                    roots.push_back(ref());
                }
                expect(')');
                expect(')');
                return roots;
            }
            if (head.size() < 2 || head[0] != 'n') fail("expected node name");
            skip();
            expect('(');
            const std::string kind = word();
            if (kind != "AND" && kind != "OR") fail("expected AND or OR");
            std::vector<NodeRef> kids;
            for (;;) {
                skip();
                if (peek() == ')') break;
                kids.push_back(ref());
            }
            expect(')');
            expect(')');
            const NodeRef n = kind == "AND" ? store_.mk_and(std::move(kids)) : store_.mk_or(std::move(kids));
            nodes_.emplace(head, n);
        }
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("snapshot: " + msg, 1, static_cast<int>(pos_) + 1);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    char peek() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        return s_[pos_];
    }
    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    std::string word() {
        skip();
        const std::size_t b = pos_;
        while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '(' &&
               s_[pos_] != ')' && s_[pos_] != '"')
            ++pos_;
        if (b == pos_) fail("expected symbol");
        return std::string(s_.substr(b, pos_ - b));
    }
    std::string quoted() {
        expect('"');
        std::string out;
        while (pos_ < s_.size() && s_[pos_] != '"') {
            if (s_[pos_] == '\\') ++pos_;
            if (pos_ >= s_.size()) break;
            out += s_[pos_++];
        }
        if (pos_ >= s_.size()) fail("unterminated string");
        ++pos_;
        return out;
    }
    atom_t atom_named(const std::string& name) {
        if (auto a = v_.find(name)) return *a;
        return v_.intern(name);
    }
    NodeRef ref() {
        const char c = peek();
        if (c == '"') return NnfStore::atom(atom_named(quoted()));
        if (c == '(') {
            ++pos_;
            if (word() != "NOT") fail("expected NOT");
            skip();
            const NodeRef r = NnfStore::atom(atom_named(quoted()), true);
            expect(')');
            return r;
        }
        const std::string w = word();
        if (w == "TRUE") return NnfStore::kTrue;
        if (w == "FALSE") return NnfStore::kFalse;
        auto it = nodes_.find(w);
        if (it == nodes_.end()) fail("undefined node " + w);
        return it->second;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    NnfStore& store_;
    Vocabulary& v_;
    std::unordered_map<std::string, NodeRef> nodes_;
};

}  // namespace

std::string write_dag(const NnfStore& store, std::span<const NodeRef> roots, const Vocabulary& v) {
    // Children are ordered by a hash of their content (built from atom names),
    // so the text does not depend on reference numbering inside the store.
    const std::vector<NodeRef> topo = store.topo_order(roots);
    std::unordered_map<NodeRef, std::uint64_t> hashes;
    std::hash<std::string> hs;
    auto key = [&](NodeRef r) -> std::uint64_t {
        if (r == NnfStore::kTrue) return 1;
        if (r == NnfStore::kFalse) return 2;
        if (NnfStore::is_lit(r)) {
            const lit_t l = NnfStore::lit_of(r);
            return hs(v.name(lit_atom(l))) * 2 + (lit_negated(l) ? 1 : 0);
        }
        return hashes.at(r);
    };
    auto sorted_kids = [&](NodeRef n) {
        std::vector<NodeRef> kids(store.children(n).begin(), store.children(n).end());
        std::stable_sort(kids.begin(), kids.end(), [&](NodeRef a, NodeRef b) { return key(a) < key(b); });
        return kids;
    };
    for (NodeRef n : topo) {
        std::uint64_t h = store.kind(n) == NodeKind::And ? 0x51ed27ull : 0xa3b195ull;
        for (NodeRef c : sorted_kids(n)) {
            h ^= key(c) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
            h *= 0xff51afd7ed558ccdull;
        }
        hashes.emplace(n, h);
    }

    // Post-order numbering following the sorted child order.
    std::unordered_map<NodeRef, std::size_t> ids;
    std::ostringstream out;
    out << "(dag\n";
    std::vector<std::pair<NodeRef, std::vector<NodeRef>>> stack;
    for (NodeRef r : roots) {
        if (NnfStore::is_lit(r) || NnfStore::is_const(r) || ids.count(r)) continue;
        stack.emplace_back(r, sorted_kids(r));
        std::vector<std::size_t> next{0};
        while (!stack.empty()) {
            auto& top = stack.back();
            std::size_t& i = next.back();
            if (i < top.second.size()) {
                const NodeRef c = top.second[i++];
                if (!NnfStore::is_lit(c) && !NnfStore::is_const(c) && !ids.count(c)) {
                    auto kids = sorted_kids(c);
                    stack.emplace_back(c, std::move(kids));
                    next.push_back(0);
                }
                continue;
            }
            const NodeRef n = top.first;
            if (!ids.count(n)) {
                const std::size_t id = ids.size();
                out << " (n" << id << " (" << (store.kind(n) == NodeKind::And ? "AND" : "OR");
                for (NodeRef c : top.second) {
                    out << ' ';
                    write_ref(out, c, ids, v);
                }
                out << "))\n";
                ids.emplace(n, id);
            }
            stack.pop_back();
            next.pop_back();
        }
    }
    out << " (roots";
    for (NodeRef r : roots) {
        out << ' ';
        write_ref(out, r, ids, v);
    }
    out << "))\n";
    return out.str();
}

std::vector<NodeRef> read_dag(std::string_view text, NnfStore& store, Vocabulary& v) {
    return Reader(text, store, v).run();
}

}  // namespace slaf

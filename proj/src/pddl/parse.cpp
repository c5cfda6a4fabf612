#include <algorithm>
#include <set>
#include <sstream>

#include "slaf/errors.hpp"
#include "slaf/pddl/pddl.hpp"

namespace slaf::pddl {

namespace {

const std::set<std::string> kUnsupported{"OR",     "WHEN",       "FORALL",    "EXISTS",     "IMPLY",
                                         "=",      "EITHER",     ":CONSTANTS", ":FUNCTIONS", ":DERIVED",
                                         ":DURATIVE-ACTION"};

[[noreturn]] void fail(const std::string& what, const Sexp& at) { throw ParseError(what, at.line, at.col); }

const Sexp& expect_list(const Sexp& s, const std::string& what) {
    if (s.is_atom) fail("expected " + what, s);
    return s;
}

const std::string& expect_atom(const Sexp& s, const std::string& what) {
    if (!s.is_atom) {
        if (!s.items.empty() && s.items[0].is_atom && kUnsupported.count(s.items[0].text))
            fail("unsupported construct " + s.items[0].text, s);
        fail("expected " + what, s);
    }
    return s.text;
}

// "a b - t c - u d" style lists; untyped names default to OBJECT.
std::vector<TypedName> typed_list(const std::vector<Sexp>& xs, std::size_t from) {
    std::vector<TypedName> out;
    std::size_t pending = 0;
    for (std::size_t i = from; i < xs.size(); ++i) {
        if (xs[i].is_atom && xs[i].text == "-") {
            if (i + 1 >= xs.size()) fail("type expected after '-'", xs[i]);
            const std::string& t = expect_atom(xs[i + 1], "type name");
            for (std::size_t j = out.size() - pending; j < out.size(); ++j) out[j].type = t;
            pending = 0;
            ++i;
            continue;
        }
        out.push_back({expect_atom(xs[i], "name"), "OBJECT"});
        ++pending;
    }
    return out;
}

Literal atom_literal(const Sexp& s, bool positive) {
    expect_list(s, "atomic formula");
    if (s.items.empty()) fail("empty atomic formula", s);
    Literal l;
    l.positive = positive;
    l.pred = expect_atom(s.items[0], "predicate name");
    if (kUnsupported.count(l.pred)) fail("unsupported construct " + l.pred, s);
    for (std::size_t i = 1; i < s.items.size(); ++i) l.args.push_back(expect_atom(s.items[i], "argument"));
    return l;
}

Literal literal(const Sexp& s) {
    expect_list(s, "literal");
    if (!s.items.empty() && s.items[0].is_atom && s.items[0].text == "NOT") {
        if (s.items.size() != 2) fail("NOT takes one argument", s);
        return atom_literal(s.items[1], false);
    }
    return atom_literal(s, true);
}

std::vector<Literal> conjunction(const Sexp& s) {
    expect_list(s, "formula");
    if (s.items.empty()) return {};
    if (s.items[0].is_atom && s.items[0].text == "AND") {
        std::vector<Literal> out;
        for (std::size_t i = 1; i < s.items.size(); ++i) {
            const Sexp& x = s.items[i];
            if (!x.is_atom && !x.items.empty() && x.items[0].is_atom && x.items[0].text == "AND") {
                auto inner = conjunction(x);
                out.insert(out.end(), inner.begin(), inner.end());
            } else {
                out.push_back(literal(x));
            }
        }
        return out;
    }
    return {literal(s)};
}

void check_literals(const DomainSchema& d, const ActionSchema& a, const std::vector<Literal>& ls, const Sexp& at) {
    for (const Literal& l : ls) {
        const std::size_t p = d.predicate_index(l.pred);
        if (p == SIZE_MAX) fail("unknown predicate " + l.pred + " in action " + a.name, at);
        const Predicate& pred = d.predicates[p];
        if (pred.params.size() != l.args.size()) fail("wrong arity for " + l.pred + " in action " + a.name, at);
        for (std::size_t i = 0; i < l.args.size(); ++i) {
            auto it = std::find_if(a.params.begin(), a.params.end(),
                                   [&](const TypedName& t) { return t.name == l.args[i]; });
            if (it == a.params.end()) fail("variable " + l.args[i] + " is not a parameter of " + a.name, at);
            if (!d.is_subtype(it->type, pred.params[i].type))
                throw TypeError("parameter " + it->name + " of " + a.name + " has type " + it->type + ", " + l.pred +
                                    " expects " + pred.params[i].type,
                                at.line, at.col);
        }
    }
}

std::string head_symbol(const Sexp& s) {
    if (s.is_atom || s.items.empty() || !s.items[0].is_atom) return {};
    return s.items[0].text;
}

void check_define(const Sexp& top, const std::string& kind) {
    if (head_symbol(top) != "DEFINE" || top.items.size() < 2 || head_symbol(top.items[1]) != kind ||
        top.items[1].items.size() != 2)
        fail("expected (define (" + kind + " name) ...)", top);
}

}  // namespace

bool DomainSchema::has_type(const std::string& t) const {
    return t == "OBJECT" || std::any_of(types.begin(), types.end(), [&](const TypedName& x) { return x.name == t; });
}

bool DomainSchema::is_subtype(const std::string& t, const std::string& ancestor) const {
    std::string cur = t;
    for (std::size_t guard = 0; guard <= types.size() + 1; ++guard) {
        if (cur == ancestor) return true;
        if (cur == "OBJECT") return false;
        auto it = std::find_if(types.begin(), types.end(), [&](const TypedName& x) { return x.name == cur; });
        if (it == types.end()) return false;
        cur = it->type;
    }
    return false;
}

std::size_t DomainSchema::predicate_index(const std::string& name) const {
    for (std::size_t i = 0; i < predicates.size(); ++i)
        if (predicates[i].name == name) return i;
    return SIZE_MAX;
}

std::size_t DomainSchema::action_index(const std::string& name) const {
    for (std::size_t i = 0; i < actions.size(); ++i)
        if (actions[i].name == name) return i;
    return SIZE_MAX;
}

DomainSchema parse_domain(const std::string& text) {
    const auto tops = read_sexps(text);
    if (tops.size() != 1) throw ParseError("expected exactly one domain definition");
    const Sexp& top = tops[0];
    check_define(top, "DOMAIN");
    DomainSchema d;
    std::vector<const Sexp*> action_at;
    d.name = expect_atom(top.items[1].items[1], "domain name");
    for (std::size_t i = 2; i < top.items.size(); ++i) {
        const Sexp& sec = expect_list(top.items[i], "domain section");
        const std::string key = head_symbol(sec);
        if (key == ":REQUIREMENTS") {
            for (std::size_t j = 1; j < sec.items.size(); ++j) {
                const std::string& r = expect_atom(sec.items[j], "requirement");
                if (r != ":STRIPS" && r != ":TYPING") fail("unsupported requirement " + r, sec.items[j]);
                d.requirements.push_back(r);
            }
        } else if (key == ":TYPES") {
            d.types = typed_list(sec.items, 1);
        } else if (key == ":PREDICATES") {
            for (std::size_t j = 1; j < sec.items.size(); ++j) {
                const Sexp& p = expect_list(sec.items[j], "predicate");
                if (p.items.empty()) fail("empty predicate", p);
                Predicate pred{expect_atom(p.items[0], "predicate name"), typed_list(p.items, 1)};
                if (d.predicate_index(pred.name) != SIZE_MAX) fail("duplicate predicate " + pred.name, p);
                d.predicates.push_back(std::move(pred));
            }
        } else if (key == ":ACTION") {
            if (sec.items.size() < 2) fail("action name expected", sec);
            ActionSchema a;
            a.name = expect_atom(sec.items[1], "action name");
            if (d.action_index(a.name) != SIZE_MAX) fail("duplicate action " + a.name, sec);
            for (std::size_t j = 2; j < sec.items.size(); j += 2) {
                const std::string& k = expect_atom(sec.items[j], "action keyword");
                if (j + 1 >= sec.items.size()) fail("value expected after " + k, sec.items[j]);
                const Sexp& val = sec.items[j + 1];
                if (k == ":PARAMETERS") a.params = typed_list(expect_list(val, "parameter list").items, 0);
                else if (k == ":PRECONDITION") a.pre = conjunction(val);
                else if (k == ":EFFECT") a.eff = conjunction(val);
                else fail("unsupported action keyword " + k, sec.items[j]);
            }
            d.actions.push_back(std::move(a));
            action_at.push_back(&sec);
        } else {
            fail(key.empty() ? "malformed domain section" : "unsupported construct " + key, sec);
        }
    }
    // Types are checked once everything is read, so declaration order is free.
    for (const auto& t : d.types)
        if (!d.has_type(t.type)) throw TypeError("unknown type " + t.type);
    for (const auto& p : d.predicates)
        for (const auto& x : p.params)
            if (!d.has_type(x.type)) throw TypeError("unknown type " + x.type + " in predicate " + p.name);
    for (std::size_t i = 0; i < d.actions.size(); ++i) {
        const ActionSchema& a = d.actions[i];
        const Sexp& at = *action_at[i];
        for (const auto& x : a.params)
            if (!d.has_type(x.type)) throw TypeError("unknown type " + x.type + " in action " + a.name);
        check_literals(d, a, a.pre, at);
        check_literals(d, a, a.eff, at);
        for (const auto& x : a.eff)
            for (const auto& y : a.eff)
                if (x.pred == y.pred && x.args == y.args && x.positive != y.positive)
                    throw ParseError("complementary effects on " + x.pred + " in action " + a.name);
    }
    return d;
}

ProblemInstance parse_problem(const std::string& text, const DomainSchema& d) {
    const auto tops = read_sexps(text);
    if (tops.size() != 1) throw ParseError("expected exactly one problem definition");
    const Sexp& top = tops[0];
    check_define(top, "PROBLEM");
    ProblemInstance p;
    p.name = expect_atom(top.items[1].items[1], "problem name");
    for (std::size_t i = 2; i < top.items.size(); ++i) {
        const Sexp& sec = expect_list(top.items[i], "problem section");
        const std::string key = head_symbol(sec);
        if (key == ":DOMAIN") {
            if (sec.items.size() != 2) fail("(:domain name) expected", sec);
            p.domain = expect_atom(sec.items[1], "domain name");
            if (p.domain != d.name) fail("problem is for domain " + p.domain + ", not " + d.name, sec);
        } else if (key == ":OBJECTS") {
            p.objects = typed_list(sec.items, 1);
            for (const auto& o : p.objects)
                if (!d.has_type(o.type)) throw TypeError("unknown type " + o.type + " for object " + o.name, sec.line,
                                                         sec.col);
        } else if (key == ":INIT") {
            for (std::size_t j = 1; j < sec.items.size(); ++j) {
                const Literal l = literal(sec.items[j]);
                if (!l.positive) fail("negative initial atoms are not supported", sec.items[j]);
                p.init.push_back(l);
            }
        } else if (key == ":GOAL") {
            // Learning runs ignore goals.
        } else {
            fail(key.empty() ? "malformed problem section" : "unsupported construct " + key, sec);
        }
    }
    for (const Literal& l : p.init) {
        const std::size_t pi = d.predicate_index(l.pred);
        if (pi == SIZE_MAX) throw ParseError("unknown predicate " + l.pred + " in :init");
        if (d.predicates[pi].params.size() != l.args.size()) throw ParseError("wrong arity for " + l.pred);
        for (std::size_t i = 0; i < l.args.size(); ++i) {
            auto it = std::find_if(p.objects.begin(), p.objects.end(),
                                   [&](const TypedName& o) { return o.name == l.args[i]; });
            if (it == p.objects.end()) throw ParseError("unknown object " + l.args[i] + " in :init");
            if (!d.is_subtype(it->type, d.predicates[pi].params[i].type))
                throw TypeError("object " + it->name + " has the wrong type for " + l.pred);
        }
    }
    return p;
}

namespace {

std::string typed(const std::vector<TypedName>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ' ';
        out += xs[i].name + " - " + xs[i].type;
    }
    return out;
}

std::string lit_text(const Literal& l) {
    std::string a = "(" + l.pred;
    for (const auto& x : l.args) a += " " + x;
    a += ")";
    return l.positive ? a : "(NOT " + a + ")";
}

std::string conj_text(const std::vector<Literal>& ls) {
    std::string out = "(AND";
    for (const auto& l : ls) out += " " + lit_text(l);
    return out + ")";
}

}  // namespace

std::string print_domain(const DomainSchema& d) {
    std::ostringstream o;
    o << "(DEFINE (DOMAIN " << d.name << ")\n";
    if (!d.requirements.empty()) {
        o << "  (:REQUIREMENTS";
        for (const auto& r : d.requirements) o << ' ' << r;
        o << ")\n";
    }
    if (!d.types.empty()) o << "  (:TYPES " << typed(d.types) << ")\n";
    o << "  (:PREDICATES";
    for (const auto& p : d.predicates) {
        o << "\n    (" << p.name;
        if (!p.params.empty()) o << ' ' << typed(p.params);
        o << ')';
    }
    o << ")";
    for (const auto& a : d.actions) {
        o << "\n  (:ACTION " << a.name << "\n    :PARAMETERS (" << typed(a.params) << ")\n    :PRECONDITION "
          << conj_text(a.pre) << "\n    :EFFECT " << conj_text(a.eff) << ")";
    }
    o << ")\n";
    return o.str();
}

std::string print_problem(const ProblemInstance& p) {
    std::ostringstream o;
    o << "(DEFINE (PROBLEM " << p.name << ")\n  (:DOMAIN " << p.domain << ")\n  (:OBJECTS " << typed(p.objects)
      << ")\n  (:INIT";
    for (const auto& l : p.init) o << "\n    " << lit_text(l);
    o << "))\n";
    return o.str();
}

}  // namespace slaf::pddl

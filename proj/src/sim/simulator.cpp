#include "slaf/sim/simulator.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "slaf/errors.hpp"

namespace slaf::sim {

using json = nlohmann::ordered_json;

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw Error("empty range");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = gen_();
    } while (x >= limit);
    return x % n;
}

Trace generate_trace(const GroundDomain& d, const StripsActionModel& hidden, const State& init,
                     const TraceConfig& cfg) {
    const std::size_t nf = d.num_fluents(), na = d.num_actions();
    if (cfg.obs_per_step > nf) throw Error("obs_per_step exceeds the fluent count");
    if (init.size() != nf) throw Error("initial state has the wrong size");
    Trace t{d.name, nf, na, cfg.seed, cfg.obs_per_step, {}};
    t.steps.reserve(cfg.steps);
    Rng rng(cfg.seed);
    State s = init;
    std::vector<std::size_t> executable, pool(nf);
    // Step at which each fluent was last observed; the initial state counts
    // as unobserved at step 0.
    std::vector<std::size_t> last_seen(nf, 0);
    for (std::size_t step = 1; step <= cfg.steps; ++step) {
        std::size_t a;
        if (cfg.policy == Policy::ExecutableOnly) {
            executable.clear();
            for (std::size_t i = 0; i < na; ++i)
                if (hidden.executable(s, i)) executable.push_back(i);
            if (executable.empty()) throw DeadEnd("no executable action at step " + std::to_string(step));
            a = executable[rng.below(executable.size())];
        } else {
            a = rng.below(na);
        }
        TraceStep ts;
        ts.index = step;
        ts.action = a;
        ts.ok = apply_in_place(hidden, s, a);

        std::vector<std::size_t> chosen;
        if (cfg.coverage_k > 0)
            for (std::size_t f = 0; f < nf; ++f)
                if (step - last_seen[f] >= cfg.coverage_k) chosen.push_back(f);
        // Partial Fisher-Yates over the fluents not already forced.
        pool.clear();
        for (std::size_t f = 0; f < nf; ++f)
            if (!(cfg.coverage_k > 0 && step - last_seen[f] >= cfg.coverage_k)) pool.push_back(f);
        for (std::size_t i = 0; chosen.size() < cfg.obs_per_step && i < pool.size(); ++i) {
            const std::size_t j = i + rng.below(pool.size() - i);
            std::swap(pool[i], pool[j]);
            chosen.push_back(pool[i]);
        }
        std::sort(chosen.begin(), chosen.end());
        for (std::size_t f : chosen) {
            ts.obs.push_back(fluent_lit(f, s[f]));
            last_seen[f] = step;
        }
        t.steps.push_back(std::move(ts));
    }
    return t;
}

bool replay_check(const GroundDomain& d, const StripsActionModel& hidden, const State& init, const Trace& t) {
    if (init.size() != d.num_fluents()) return false;
    State s = init;
    for (const auto& st : t.steps) {
        if (st.action >= d.num_actions()) return false;
        const bool ok = apply_in_place(hidden, s, st.action);
        if (st.ok_known && ok != st.ok) return false;
        for (lit_t l : st.obs)
            if (lit_atom(l) >= s.size() || !holds(s, l)) return false;
    }
    return true;
}

std::pair<std::string, std::vector<std::string>> split_action_name(const std::string& name) {
    if (name.empty() || name.front() != '(' || name.back() != ')') return {name, {}};
    std::istringstream in(name.substr(1, name.size() - 2));
    std::string head, x;
    in >> head;
    std::vector<std::string> args;
    while (in >> x) args.push_back(x);
    return {head, args};
}

void write_trace(std::ostream& out, const GroundDomain& d, const Trace& t) {
    json header;
    header["domain"] = t.domain;
    header["fluents"] = t.fluents;
    header["actions"] = t.actions;
    header["seed"] = t.seed;
    header["obs_per_step"] = t.obs_per_step;
    out << header.dump() << '\n';
    for (const auto& st : t.steps) {
        auto [head, args] = split_action_name(d.actions[st.action]);
        json j;
        j["t"] = st.index;
        j["action"] = head;
        j["args"] = args;
        if (st.ok_known) j["ok"] = st.ok;
        json obs = json::object();
        for (lit_t l : st.obs) obs[d.fluents[lit_atom(l)]] = !lit_negated(l);
        j["obs"] = obs;
        out << j.dump() << '\n';
    }
    if (!out) throw Error("I/O error while writing trace");
}

Trace read_trace(std::istream& in, const GroundDomain& d) {
    Trace t;
    std::string line;
    int line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(std::string("bad trace line: ") + e.what(), line_no, 1);
        }
        try {
            if (!have_header) {
                t.domain = j.at("domain").get<std::string>();
                t.fluents = j.at("fluents").get<std::size_t>();
                t.actions = j.at("actions").get<std::size_t>();
                t.seed = j.value("seed", std::uint64_t{0});
                t.obs_per_step = j.value("obs_per_step", std::size_t{0});
                if (t.fluents != d.num_fluents() || t.actions != d.num_actions())
                    throw ParseError("trace header does not match the domain", line_no, 1);
                have_header = true;
                continue;
            }
            TraceStep st;
            st.index = j.at("t").get<std::size_t>();
            const std::string head = j.at("action").get<std::string>();
            const auto args = j.value("args", std::vector<std::string>{});
            std::string name = head;
            if (!args.empty() || !d.action_index(head)) {
                name = "(" + head;
                for (const auto& a : args) name += " " + a;
                name += ")";
            }
            const auto a = d.action_index(name);
            if (!a) throw ParseError("unknown action " + name, line_no, 1);
            st.action = *a;
            st.ok_known = j.contains("ok");
            st.ok = st.ok_known ? j["ok"].get<bool>() : true;
            for (const auto& [k, v] : j.at("obs").items()) {
                const auto f = d.fluent_index(k);
                if (!f) throw ParseError("unknown fluent " + k, line_no, 1);
                st.obs.push_back(fluent_lit(*f, v.get<bool>()));
            }
            std::sort(st.obs.begin(), st.obs.end());
            for (std::size_t i = 1; i < st.obs.size(); ++i)
                if (lit_atom(st.obs[i]) == lit_atom(st.obs[i - 1]))
                    throw InconsistentObservation("fluent observed twice at step " + std::to_string(st.index));
            t.steps.push_back(std::move(st));
        } catch (const json::exception& e) {
            throw ParseError(std::string("bad trace field: ") + e.what(), line_no, 1);
        }
    }
    if (!have_header) throw ParseError("trace has no header line");
    return t;
}

std::vector<std::pair<std::string, std::size_t>> action_distribution(const GroundDomain& d, const Trace& t) {
    std::vector<std::pair<std::string, std::size_t>> out;
    std::vector<std::size_t> slot(d.num_actions());
    for (std::size_t a = 0; a < d.num_actions(); ++a) {
        const std::string head = split_action_name(d.actions[a]).first;
        auto it = std::find_if(out.begin(), out.end(), [&](const auto& p) { return p.first == head; });
        if (it == out.end()) {
            out.emplace_back(head, 0);
            it = out.end() - 1;
        }
        slot[a] = static_cast<std::size_t>(it - out.begin());
    }
    for (const auto& st : t.steps) ++out[slot[st.action]].second;
    return out;
}

}  // namespace slaf::sim

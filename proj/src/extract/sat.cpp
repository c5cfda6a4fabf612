#include "slaf/extract/sat.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "slaf/errors.hpp"

namespace slaf {

namespace {

std::uint64_t splitmix(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double luby(double y, std::uint64_t x) {
    std::uint64_t size = 1, seq = 0;
    while (size < x + 1) {
        ++seq;
        size = 2 * size + 1;
    }
    while (size - 1 != x) {
        size = (size - 1) >> 1;
        --seq;
        x = x % size;
    }
    return std::pow(y, static_cast<double>(seq));
}

}  // namespace

SatSolver::SatSolver(std::uint64_t seed) : seed_(seed), rng_state_(seed) {}

std::uint32_t SatSolver::new_var() {
    const auto v = static_cast<std::uint32_t>(assigns_.size());
    assigns_.push_back(kUndef);
    phase_.push_back(kFalse);
    reason_.push_back(kNoReason);
    level_.push_back(0);
    // Tiny seeded noise decides ties between equally active variables.
    activity_.push_back(static_cast<double>(splitmix(rng_state_) >> 11) * 0x1.0p-53 * 1e-6);
    seen_.push_back(0);
    watches_.emplace_back();
    watches_.emplace_back();
    heap_pos_.push_back(UINT32_MAX);
    heap_insert(v);
    return v;
}

void SatSolver::reserve_vars(std::size_t n) {
    while (assigns_.size() < n) new_var();
}

void SatSolver::set_phase(std::uint32_t var, bool value) { phase_[var] = value ? kTrue : kFalse; }

bool SatSolver::add_clause(std::vector<lit_t> lits) {
    if (!ok_) return false;
    for (lit_t l : lits)
        if (lit_atom(l) >= num_vars()) throw Error("clause mentions an undeclared solver variable");
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    std::size_t w = 0;
    for (std::size_t i = 0; i < lits.size(); ++i) {
        if (i + 1 < lits.size() && lits[i + 1] == lit_not(lits[i])) return true;
        const std::uint8_t val = value(lits[i]);
        if (val == kTrue) return true;
        if (val == kFalse) continue;
        lits[w++] = lits[i];
    }
    lits.resize(w);
    if (lits.empty()) return ok_ = false;
    if (lits.size() == 1) {
        enqueue(lits[0], kNoReason);
        if (propagate() != kNoReason) ok_ = false;
        return ok_;
    }
    clauses_.push_back({std::move(lits), 0, false, false});
    attach(static_cast<std::uint32_t>(clauses_.size() - 1));
    return true;
}

void SatSolver::attach(std::uint32_t cref) {
    const auto& c = clauses_[cref].lits;
    watches_[c[0]].push_back({cref, c[1]});
    watches_[c[1]].push_back({cref, c[0]});
}

void SatSolver::enqueue(lit_t l, std::uint32_t reason) {
    const atom_t v = lit_atom(l);
    assigns_[v] = lit_negated(l) ? kFalse : kTrue;
    level_[v] = level();
    reason_[v] = reason;
    trail_.push_back(l);
}

// Watch lists are indexed by the watched literal and visited when it becomes
// false.
std::uint32_t SatSolver::propagate() {
    std::uint32_t confl = kNoReason;
    while (qhead_ < trail_.size()) {
        const lit_t false_lit = lit_not(trail_[qhead_++]);
        auto& ws = watches_[false_lit];
        std::size_t i = 0, j = 0;
        while (i < ws.size()) {
            const Watcher w = ws[i];
            if (value(w.blocker) == kTrue) {
                ws[j++] = ws[i++];
                continue;
            }
            auto& c = clauses_[w.cref].lits;
            if (c[0] == false_lit) std::swap(c[0], c[1]);
            ++i;
            const lit_t first = c[0];
            const Watcher nw{w.cref, first};
            if (first != w.blocker && value(first) == kTrue) {
                ws[j++] = nw;
                continue;
            }
            bool moved = false;
            for (std::size_t k = 2; k < c.size(); ++k) {
                if (value(c[k]) != kFalse) {
                    std::swap(c[1], c[k]);
                    watches_[c[1]].push_back(nw);
                    moved = true;
                    break;
                }
            }
            if (moved) continue;
            ws[j++] = nw;
            if (value(first) == kFalse) {
                confl = w.cref;
                qhead_ = trail_.size();
                while (i < ws.size()) ws[j++] = ws[i++];
            } else {
                enqueue(first, w.cref);
            }
        }
        ws.resize(j);
        if (confl != kNoReason) break;
    }
    return confl;
}

void SatSolver::bump_var(std::uint32_t v) {
    if ((activity_[v] += var_inc_) > 1e100) {
        for (auto& a : activity_) a *= 1e-100;
        var_inc_ *= 1e-100;
    }
    if (heap_contains(v)) heap_up(heap_pos_[v]);
}

void SatSolver::bump_clause(ClauseRec& c) {
    if ((c.activity += cla_inc_) > 1e20) {
        for (std::uint32_t r : learnts_) clauses_[r].activity *= 1e-20;
        cla_inc_ *= 1e-20;
    }
}

void SatSolver::analyze(std::uint32_t confl, std::vector<lit_t>& learnt, std::uint32_t& bt_level) {
    learnt.assign(1, 0);
    int path = 0;
    bool have_p = false;
    lit_t p = 0;
    std::size_t idx = trail_.size();
    do {
        ClauseRec& c = clauses_[confl];
        if (c.learnt) bump_clause(c);
        for (lit_t q : c.lits) {
            if (have_p && q == p) continue;
            const atom_t v = lit_atom(q);
            if (seen_[v] || level_[v] == 0) continue;
            bump_var(v);
            seen_[v] = 1;
            if (level_[v] >= level()) ++path;
            else learnt.push_back(q);
        }
        while (!seen_[lit_atom(trail_[--idx])]) {}
        p = trail_[idx];
        have_p = true;
        confl = reason_[lit_atom(p)];
        seen_[lit_atom(p)] = 0;
        --path;
    } while (path > 0);
    learnt[0] = lit_not(p);

    // Local minimization: a literal whose reason is covered by the clause is redundant.
    const std::vector<lit_t> original = learnt;
    std::size_t w = 1;
    for (std::size_t i = 1; i < learnt.size(); ++i) {
        const std::uint32_t r = reason_[lit_atom(learnt[i])];
        bool keep = r == kNoReason;
        if (!keep) {
            for (lit_t q : clauses_[r].lits) {
                const atom_t v = lit_atom(q);
                if (v == lit_atom(learnt[i])) continue;
                if (!seen_[v] && level_[v] > 0) {
                    keep = true;
                    break;
                }
            }
        }
        if (keep) learnt[w++] = learnt[i];
    }
    learnt.resize(w);
    for (lit_t l : original) seen_[lit_atom(l)] = 0;

    bt_level = 0;
    if (learnt.size() > 1) {
        std::size_t best = 1;
        for (std::size_t i = 2; i < learnt.size(); ++i)
            if (level_[lit_atom(learnt[i])] > level_[lit_atom(learnt[best])]) best = i;
        std::swap(learnt[1], learnt[best]);
        bt_level = level_[lit_atom(learnt[1])];
    }
}

void SatSolver::analyze_final(lit_t p) {
    final_conflict_.assign(1, p);
    if (level() == 0) return;
    seen_[lit_atom(p)] = 1;
    for (std::size_t i = trail_.size(); i-- > trail_lim_[0];) {
        const atom_t x = lit_atom(trail_[i]);
        if (!seen_[x]) continue;
        if (reason_[x] == kNoReason) {
            final_conflict_.push_back(trail_[i]);
        } else {
            for (lit_t q : clauses_[reason_[x]].lits)
                if (lit_atom(q) != x && level_[lit_atom(q)] > 0) seen_[lit_atom(q)] = 1;
        }
        seen_[x] = 0;
    }
    seen_[lit_atom(p)] = 0;
}

void SatSolver::cancel_until(std::uint32_t lvl) {
    if (level() <= lvl) return;
    for (std::size_t i = trail_.size(); i-- > trail_lim_[lvl];) {
        const atom_t v = lit_atom(trail_[i]);
        phase_[v] = assigns_[v];
        assigns_[v] = kUndef;
        reason_[v] = kNoReason;
        if (!heap_contains(v)) heap_insert(v);
    }
    trail_.resize(trail_lim_[lvl]);
    trail_lim_.resize(lvl);
    qhead_ = trail_.size();
}

std::optional<lit_t> SatSolver::pick_branch() {
    while (!heap_.empty()) {
        const std::uint32_t v = heap_pop();
        if (assigns_[v] == kUndef) return mk_lit(v, phase_[v] != kTrue);
    }
    return std::nullopt;
}

bool SatSolver::locked(std::uint32_t cref) const {
    const auto& c = clauses_[cref].lits;
    return value(c[0]) == kTrue && reason_[lit_atom(c[0])] == cref;
}

void SatSolver::reduce_db() {
    std::sort(learnts_.begin(), learnts_.end(),
              [&](std::uint32_t a, std::uint32_t b) { return clauses_[a].activity < clauses_[b].activity; });
    std::vector<std::uint32_t> kept;
    const std::size_t half = learnts_.size() / 2;
    for (std::size_t i = 0; i < learnts_.size(); ++i) {
        auto& c = clauses_[learnts_[i]];
        if (i < half && c.lits.size() > 2 && !locked(learnts_[i])) {
            c.deleted = true;
            c.lits.clear();
            c.lits.shrink_to_fit();
        } else {
            kept.push_back(learnts_[i]);
        }
    }
    learnts_ = std::move(kept);
    for (auto& ws : watches_)
        ws.erase(std::remove_if(ws.begin(), ws.end(), [&](const Watcher& w) { return clauses_[w.cref].deleted; }),
                 ws.end());
}

SatResult SatSolver::search(std::uint64_t max_conflicts, const std::vector<lit_t>& assumptions) {
    std::uint64_t local = 0;
    std::vector<lit_t> learnt;
    for (;;) {
        const std::uint32_t confl = propagate();
        if (confl != kNoReason) {
            ++conflicts_;
            ++local;
            if (level() == 0) {
                ok_ = false;
                return SatResult::Unsat;
            }
            std::uint32_t bt = 0;
            analyze(confl, learnt, bt);
            cancel_until(bt);
            if (learnt.size() == 1) {
                enqueue(learnt[0], kNoReason);
            } else {
                clauses_.push_back({learnt, 0, true, false});
                const auto cref = static_cast<std::uint32_t>(clauses_.size() - 1);
                learnts_.push_back(cref);
                attach(cref);
                bump_clause(clauses_[cref]);
                enqueue(learnt[0], cref);
            }
            var_inc_ /= 0.95;
            cla_inc_ /= 0.999;
            continue;
        }
        if (local >= max_conflicts) {
            cancel_until(0);
            return SatResult::Unknown;
        }
        if (static_cast<double>(learnts_.size()) - static_cast<double>(trail_.size()) >= max_learnts_) {
            reduce_db();
            max_learnts_ *= 1.1;
        }
        std::optional<lit_t> next;
        while (level() < assumptions.size()) {
            const lit_t p = assumptions[level()];
            const std::uint8_t val = value(p);
            if (val == kTrue) {
                trail_lim_.push_back(static_cast<std::uint32_t>(trail_.size()));
            } else if (val == kFalse) {
                analyze_final(p);
                return SatResult::Unsat;
            } else {
                next = p;
                break;
            }
        }
        if (!next) {
            next = pick_branch();
            if (!next) {
                model_ = assigns_;
                return SatResult::Sat;
            }
            ++decisions_;
        }
        trail_lim_.push_back(static_cast<std::uint32_t>(trail_.size()));
        enqueue(*next, kNoReason);
    }
}

SatResult SatSolver::solve(const std::vector<lit_t>& assumptions) {
    final_conflict_.clear();
    model_.clear();
    if (!ok_) return SatResult::Unsat;
    for (lit_t a : assumptions)
        if (lit_atom(a) >= num_vars()) throw Error("assumption mentions an undeclared solver variable");
    max_learnts_ = std::max(static_cast<double>(clauses_.size()) / 3.0, 2000.0);
    const std::uint64_t start = conflicts_;
    SatResult status = SatResult::Unknown;
    for (std::uint64_t restarts = 0; status == SatResult::Unknown; ++restarts) {
        status = search(static_cast<std::uint64_t>(luby(2, restarts) * 100), assumptions);
        if (status == SatResult::Unknown && budget_ > 0 && conflicts_ - start >= budget_) break;
    }
    cancel_until(0);
    return status;
}

void SatSolver::heap_insert(std::uint32_t v) {
    heap_pos_[v] = static_cast<std::uint32_t>(heap_.size());
    heap_.push_back(v);
    heap_up(heap_.size() - 1);
}

void SatSolver::heap_up(std::size_t i) {
    const std::uint32_t v = heap_[i];
    while (i > 0) {
        const std::size_t parent = (i - 1) / 2;
        if (activity_[heap_[parent]] >= activity_[v]) break;
        heap_[i] = heap_[parent];
        heap_pos_[heap_[i]] = static_cast<std::uint32_t>(i);
        i = parent;
    }
    heap_[i] = v;
    heap_pos_[v] = static_cast<std::uint32_t>(i);
}

void SatSolver::heap_down(std::size_t i) {
    const std::uint32_t v = heap_[i];
    for (;;) {
        std::size_t child = 2 * i + 1;
        if (child >= heap_.size()) break;
        if (child + 1 < heap_.size() && activity_[heap_[child + 1]] > activity_[heap_[child]]) ++child;
        if (activity_[heap_[child]] <= activity_[v]) break;
        heap_[i] = heap_[child];
        heap_pos_[heap_[i]] = static_cast<std::uint32_t>(i);
        i = child;
    }
    heap_[i] = v;
    heap_pos_[v] = static_cast<std::uint32_t>(i);
}

std::uint32_t SatSolver::heap_pop() {
    const std::uint32_t top = heap_[0];
    heap_pos_[top] = UINT32_MAX;
    const std::uint32_t last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
        heap_[0] = last;
        heap_pos_[last] = 0;
        heap_down(0);
    }
    return top;
}

// ---------------------------------------------------------------------------

ExternalResult solve_external(const ExternalSolver& cfg, std::size_t num_vars, const std::vector<Clause>& clauses,
                              const std::vector<lit_t>& assumptions) {
    namespace fs = std::filesystem;
    std::string path = (fs::temp_directory_path() / "slaf-XXXXXX.cnf").string();
    const int fd = mkstemps(path.data(), 4);
    if (fd < 0) throw SolverFailure("cannot create a temporary DIMACS file");
    close(fd);
    {
        std::ofstream out(path);
        out << "p cnf " << num_vars << ' ' << clauses.size() + assumptions.size() << '\n';
        auto put = [&](lit_t l) { out << (lit_negated(l) ? "-" : "") << lit_atom(l) + 1 << ' '; };
        for (const auto& c : clauses) {
            for (lit_t l : c) put(l);
            out << "0\n";
        }
        for (lit_t a : assumptions) {
            put(a);
            out << "0\n";
        }
        if (!out) {
            fs::remove(path);
            throw SolverFailure("cannot write the DIMACS file");
        }
    }
    const std::string cmd = "timeout " + std::to_string(cfg.timeout.count()) + " " + cfg.command + " '" + path + "'";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        fs::remove(path);
        throw SolverFailure("cannot start external solver: " + cfg.command);
    }
    std::string output;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, n);
    const int status = pclose(pipe);
    fs::remove(path);
    if (WIFEXITED(status) && WEXITSTATUS(status) == 124) throw SolverFailure("external solver timed out");

    ExternalResult r;
    bool have_status = false;
    r.model.assign(num_vars, 0);
    std::istringstream in(output);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("s ", 0) == 0) {
            have_status = true;
            if (line.find("UNSATISFIABLE") != std::string::npos) r.result = SatResult::Unsat;
            else if (line.find("SATISFIABLE") != std::string::npos) r.result = SatResult::Sat;
            else r.result = SatResult::Unknown;
        } else if (line.rfind("v ", 0) == 0) {
            std::istringstream ls(line.substr(2));
            long x;
            while (ls >> x) {
                if (x == 0) break;
                const std::size_t idx = static_cast<std::size_t>(x < 0 ? -x : x) - 1;
                if (idx >= num_vars) throw SolverFailure("external solver reported an unknown variable");
                r.model[idx] = x > 0 ? 1 : 0;
            }
        }
    }
    if (!have_status) throw SolverFailure("external solver produced no status line: " + cfg.command);
    if (r.result != SatResult::Sat) r.model.clear();
    return r;
}

std::string format_solution(SatResult r, const std::vector<std::uint8_t>& model) {
    std::ostringstream out;
    if (r == SatResult::Unsat) return "s UNSATISFIABLE\n";
    if (r == SatResult::Unknown) return "s UNKNOWN\n";
    out << "s SATISFIABLE\nv";
    for (std::size_t i = 0; i < model.size(); ++i) out << ' ' << (model[i] == 1 ? "" : "-") << i + 1;
    out << " 0\n";
    return out.str();
}

}  // namespace slaf

#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "slaf/model/strips.hpp"

namespace slaf::sim {

// mt19937_64 with a bounded draw that does not depend on the standard
// library's distribution implementations, so traces match across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    std::uint64_t next() { return gen_(); }
    // Uniform in [0, n), by rejection.
    std::uint64_t below(std::uint64_t n);

private:
    std::mt19937_64 gen_;
};

enum class Policy { ExecutableOnly, AnyAction };

struct TraceConfig {
    std::size_t steps = 1000;
    std::size_t obs_per_step = 10;
    Policy policy = Policy::ExecutableOnly;
    std::uint64_t seed = 1;
    std::size_t record_every = 200;
    // When nonzero, every fluent is observed at least once in every window
    // of this many consecutive steps (extra observations if needed).
    std::size_t coverage_k = 0;
};

struct TraceStep {
    std::size_t index = 0;  // 1-based
    std::size_t action = 0;
    bool ok = true;
    bool ok_known = true;  // false when a read trace lacked the field
    std::vector<lit_t> obs;
};

struct Trace {
    std::string domain;
    std::size_t fluents = 0;
    std::size_t actions = 0;
    std::uint64_t seed = 0;
    std::size_t obs_per_step = 0;
    std::vector<TraceStep> steps;
};

Trace generate_trace(const GroundDomain& d, const StripsActionModel& hidden, const State& init,
                     const TraceConfig& cfg);

bool replay_check(const GroundDomain& d, const StripsActionModel& hidden, const State& init, const Trace& t);

// JSON Lines: a header object, then one object per step.
void write_trace(std::ostream& out, const GroundDomain& d, const Trace& t);
Trace read_trace(std::istream& in, const GroundDomain& d);

// Step counts per action schema (the head symbol of ground action names),
// in order of first appearance in the domain's action list.
std::vector<std::pair<std::string, std::size_t>> action_distribution(const GroundDomain& d, const Trace& t);

// "(STACK A B)" -> {"STACK", {"A", "B"}}; a bare name has no arguments.
std::pair<std::string, std::vector<std::string>> split_action_name(const std::string& name);

}  // namespace slaf::sim

#pragma once

#include <fstream>
#include <sstream>
#include <string>

#ifndef SLAF_FIXTURE_DIR
#error "SLAF_FIXTURE_DIR must point at the fixtures directory"
#endif

inline std::string fixture_path(const std::string& rel) { return std::string(SLAF_FIXTURE_DIR) + "/" + rel; }

inline std::string read_fixture(const std::string& rel) {
    std::ifstream in(fixture_path(rel));
    if (!in) throw std::runtime_error("missing fixture " + rel);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

#include <memory>

#include "slaf/pddl/pddl.hpp"

// A parsed and grounded fixture. Held by pointer because schema maps keep
// references into it.
struct World {
    slaf::pddl::DomainSchema d;
    slaf::pddl::Grounding g;
    slaf::StripsActionModel m;
};

inline std::unique_ptr<World> load_world(const std::string& name) {
    auto w = std::make_unique<World>();
    w->d = slaf::pddl::parse_domain(read_fixture(name + "/domain.pddl"));
    w->g = slaf::pddl::ground(w->d, slaf::pddl::parse_problem(read_fixture(name + "/problem.pddl"), w->d));
    w->m = slaf::pddl::ground_model(w->d, w->g);
    return w;
}

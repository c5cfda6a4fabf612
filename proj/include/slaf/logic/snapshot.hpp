#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "slaf/logic/nnf.hpp"

namespace slaf {

// Text form of a set of DAG roots:
//   (dag
//    (n0 (AND "p" (NOT "q")))
//    (n1 (OR n0 "r"))
//    (roots n1 TRUE))
// Nodes are numbered in children-first order, so reading back into any store
// and writing again reproduces the text exactly.
std::string write_dag(const NnfStore& store, std::span<const NodeRef> roots, const Vocabulary& v);

// Parses the form above. Unknown atom names are interned.
std::vector<NodeRef> read_dag(std::string_view text, NnfStore& store, Vocabulary& v);

}  // namespace slaf

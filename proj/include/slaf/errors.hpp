#pragma once

#include <stdexcept>
#include <string>

namespace slaf {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ClauseExplosion : Error {
    using Error::Error;
};

struct VocabularyTooLarge : Error {
    using Error::Error;
};

struct MixedVocabulary : Error {
    using Error::Error;
};

struct BeliefTooLarge : Error {
    using Error::Error;
};

struct InconsistentObservation : Error {
    using Error::Error;
};

// Raised when a belief collapses to FALSE; carries the 1-based step index.
struct InconsistentBelief : Error {
    InconsistentBelief(const std::string& what, std::size_t step_index)
        : Error(what + " (step " + std::to_string(step_index) + ")"), step(step_index) {}
    std::size_t step;
};

struct ParseError : Error {
    ParseError(const std::string& what, int line_no = 0, int col_no = 0)
        : Error(line_no > 0 ? what + " at " + std::to_string(line_no) + ":" + std::to_string(col_no)
                            : what),
          line(line_no), col(col_no) {}
    int line;
    int col;
};

struct TypeError : ParseError {
    using ParseError::ParseError;
};

struct OffParameterFluent : Error {
    using Error::Error;
};

struct DeadEnd : Error {
    using Error::Error;
};

struct SolverFailure : Error {
    using Error::Error;
};

}  // namespace slaf

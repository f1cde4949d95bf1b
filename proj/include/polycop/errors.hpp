#pragma once

#include <stdexcept>
#include <string>

namespace polycop {

// Invalid argument values (out-of-range probabilities, bad bounds, ...).
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Dimension mismatches between vectors/matrices.
struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Matrix factorization failures (non-PD input, singular design, ...).
struct DecompositionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input files, schema problems, failed validation.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid or inconsistent run configuration.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Model specification problems (failed exclusion restriction, separation,
// degenerate predictions).
struct SpecificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A computed quantity violated an internal identity beyond tolerance.
struct InternalConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace polycop

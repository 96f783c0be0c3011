#pragma once

#include <stdexcept>
#include <string>

namespace gpe {

/// Sum of two surds with distinct canonical radicand classes; callers that
/// need the value anyway must drop to floating evaluation.
struct IncompatibleSurd : std::domain_error {
    using std::domain_error::domain_error;
};

/// Point/vector block layout does not match the signature it is used with.
struct ShapeMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Evaluation at the excluded Cayley pole (z = -i upstairs, z = -1 downstairs).
struct PoleError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Frame operation at a point with a vanishing block norm (off the strongly
/// pseudoconvex part, where the W fields are undefined).
struct DegenerateBasePoint : std::domain_error {
    using std::domain_error::domain_error;
};

/// Vector handed to frame_decompose whose dx coefficient is inconsistent with
/// its dw coefficients (not a (1,0) boundary tangent).
struct NotTangent : std::domain_error {
    using std::domain_error::domain_error;
};

/// Pushforward requested at a point whose image misses the target boundary.
struct NotBoundaryPreserving : std::domain_error {
    using std::domain_error::domain_error;
};

/// Source and target do not have the same number of blocks.
struct StructureMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A classification hypothesis is violated (e.g. a source block of dimension 1).
struct HypothesisViolation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Automorphism data fails validation (non-unitary matrix, a1 <= 0, wrong model).
struct InvalidAutomorphism : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Malformed configuration or map file.
struct ParseError : std::runtime_error {
    ParseError(int line_number, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_number) + ": " + what),
          line(line_number) {}
    int line;
};

} // namespace gpe

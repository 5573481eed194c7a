#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rwre {

// Domain-specific failure conditions. Plain std exceptions (std::domain_error,
// std::out_of_range, std::invalid_argument) are used for argument violations;
// the types below mark conditions a caller is expected to react to.

// The depth-h valley does not close inside the profile window.
struct ValleyNotClosedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The walk tried to step past the sampled environment window.
struct EnvironmentExhaustedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Rejection sampler hit its attempt cap.
struct SamplerExhaustedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A moment equation has no admissible root (AE estimator, w < 1/2).
struct NoSolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A family constraint (recurrence) is violated beyond tolerance.
struct ConstraintError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A criterion is undefined on this input (e.g. empty range).
struct UndefinedCriterionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An objective returned a non-finite value; carries the offending point.
struct EvaluationError : std::runtime_error {
    explicit EvaluationError(const std::string& what, std::vector<double> at = {})
        : std::runtime_error(what), point(std::move(at)) {}
    std::vector<double> point;
};

// A supplied trajectory is not a nearest-neighbour path from 0.
struct MalformedPathError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace rwre

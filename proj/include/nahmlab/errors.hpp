#pragma once

#include <stdexcept>
#include <string>

namespace nahmlab {

// Thrown for malformed or inconsistent configuration; CLI maps it to exit 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a computation fails numerically; CLI maps it to exit 1.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PoleAtLattice : NumericalError {
    explicit PoleAtLattice(const std::string& what) : NumericalError(what) {}
};

struct NearPuncture : NumericalError {
    explicit NearPuncture(const std::string& what) : NumericalError(what) {}
};

struct DegenerateLeadingCoefficient : NumericalError {
    explicit DegenerateLeadingCoefficient(const std::string& what) : NumericalError(what) {}
};

struct RootFindFailure : NumericalError {
    explicit RootFindFailure(const std::string& what) : NumericalError(what) {}
};

struct CountMismatch : NumericalError {
    explicit CountMismatch(const std::string& what) : NumericalError(what) {}
};

struct ConvergenceFailure : NumericalError {
    explicit ConvergenceFailure(const std::string& what) : NumericalError(what) {}
};

struct RankAmbiguity : NumericalError {
    explicit RankAmbiguity(const std::string& what) : NumericalError(what) {}
};

struct BranchTooClose : NumericalError {
    explicit BranchTooClose(const std::string& what) : NumericalError(what) {}
};

struct FrameCorrelationLoss : NumericalError {
    explicit FrameCorrelationLoss(const std::string& what) : NumericalError(what) {}
};

struct CutConfigInvalid : ConfigError {
    explicit CutConfigInvalid(const std::string& what) : ConfigError(what) {}
};

struct DimensionMismatch : NumericalError {
    explicit DimensionMismatch(const std::string& what) : NumericalError(what) {}
};

struct EigenvalueNotSimple : NumericalError {
    explicit EigenvalueNotSimple(const std::string& what) : NumericalError(what) {}
};

struct ProbeTooShort : NumericalError {
    explicit ProbeTooShort(const std::string& what) : NumericalError(what) {}
};

struct EmptyCloud : NumericalError {
    explicit EmptyCloud(const std::string& what) : NumericalError(what) {}
};

} // namespace nahmlab

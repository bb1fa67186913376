#pragma once

#include <stdexcept>

namespace sphmono {

/// Invalid problem setup (bad parameters, singular configuration, bad config
/// file). The CLI maps these to exit code 2.
struct InvalidInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numerical failure (tolerance not met, non-convergent sequence, stalled
/// integrator). The CLI maps these to exit code 3.
struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PoleSingularity : InvalidInput { using InvalidInput::InvalidInput; };
struct CriticalValue : InvalidInput { using InvalidInput::InvalidInput; };
struct NoOrbit : InvalidInput { using InvalidInput::InvalidInput; };
struct TooManySignChanges : InvalidInput { using InvalidInput::InvalidInput; };
struct BranchLost : InvalidInput { using InvalidInput::InvalidInput; };
struct ConfigError : InvalidInput { using InvalidInput::InvalidInput; };

struct ToleranceNotMet : NumericalFailure { using NumericalFailure::NumericalFailure; };
struct NonConvergent : NumericalFailure { using NumericalFailure::NumericalFailure; };
struct IntegrationFailure : NumericalFailure { using NumericalFailure::NumericalFailure; };
struct SectionNotFound : NumericalFailure { using NumericalFailure::NumericalFailure; };
struct TrackingLost : NumericalFailure { using NumericalFailure::NumericalFailure; };

/// A monodromy circuit failed validation (non-regular points on the path).
/// The CLI maps this to exit code 4.
struct InvalidCircuit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace sphmono

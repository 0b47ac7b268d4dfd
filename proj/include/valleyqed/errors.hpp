#pragma once

#include <stdexcept>
#include <string>

namespace vq {

// Invalid user input: lattice/atom specs, config files, CLI flags.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Anything that goes wrong while computing: propagator budget, fits, triggers.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TriggerMissError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class FitWindowError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Requested quantity is undefined for the given parameters (gapless spectrum,
// curvature singularity, frequency outside a formula's validity window).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class UnsupportedGeometry : public ConfigError {
public:
    using ConfigError::ConfigError;
};

}  // namespace vq

#pragma once

#include <stdexcept>
#include <string>

namespace lzsm {

// Caller supplied something outside the documented contract.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Inputs were valid but the numerics could not deliver the promised accuracy.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public InputError {
public:
    using InputError::InputError;
};

class DomainError : public InputError {
public:
    using InputError::InputError;
};

class PoleError : public DomainError {
public:
    using DomainError::DomainError;
};

class OffResonanceError : public InputError {
public:
    using InputError::InputError;
};

class UnsupportedConfigurationError : public InputError {
public:
    using InputError::InputError;
};

class UnsupportedRegionError : public NumericError {
public:
    using NumericError::NumericError;
};

class AccuracyError : public NumericError {
public:
    using NumericError::NumericError;
};

class IntegrationFailure : public NumericError {
public:
    IntegrationFailure(const std::string& what, double tau)
        : NumericError(what + " at tau=" + std::to_string(tau)), tau_(tau) {}
    double tau() const noexcept { return tau_; }

private:
    double tau_;
};

}  // namespace lzsm

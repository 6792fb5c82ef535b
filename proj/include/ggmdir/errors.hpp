#pragma once

#include <stdexcept>
#include <string>

namespace ggmdir {

// Input problems: malformed shapes, bad indices, invalid graphs or files.
// The CLI maps these to exit status 2.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ShapeError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class IndexError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NotChordalError : public ValidationError {
public:
    NotChordalError(const std::string& what, int certificate)
        : ValidationError(what), certificate_(certificate) {}
    int certificate() const noexcept { return certificate_; }

private:
    int certificate_;
};

class NotNestedError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Failures of the numerics on otherwise valid input. Exit status 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotPositiveDefiniteError : public NumericalError {
public:
    NotPositiveDefiniteError(const std::string& what, long pivot)
        : NumericalError(what), pivot_(pivot) {}
    /// Zero-based index of the first non-positive pivot.
    long pivot() const noexcept { return pivot_; }

private:
    long pivot_;
};

class ConvergenceError : public NumericalError {
public:
    ConvergenceError(const std::string& what, double residual)
        : NumericalError(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class DegenerateTestError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DomainError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class QuadratureError : public NumericalError {
public:
    QuadratureError(const std::string& what, double achieved)
        : NumericalError(what), achieved_(achieved) {}
    double achieved_tolerance() const noexcept { return achieved_; }

private:
    double achieved_;
};

}  // namespace ggmdir

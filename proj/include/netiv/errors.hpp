#pragma once

#include <stdexcept>
#include <string>

namespace netiv {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid argument to an operation (bad probability, bad regime parameter, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

// Malformed input file; carries the 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string& what, long line = -1) : Error(what), line_(line) {}
    long line() const { return line_; }
private:
    long line_;
};

// Problem size exceeds a configured cap (dense eigendecomposition, ...).
class CapacityError : public Error {
public:
    using Error::Error;
};

// Linear system (I - beta*G) is numerically singular.
class SolveError : public Error {
public:
    SolveError(const std::string& what, int pivot_index = -1)
        : Error(what), pivot_index_(pivot_index) {}
    int pivot_index() const { return pivot_index_; }
private:
    int pivot_index_;
};

// Neumann series diverges (|beta| * lambda1 >= 1) or the iteration cap was hit.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

// Regressor matrix is rank deficient; names the dependent column.
class CollinearityError : public Error {
public:
    CollinearityError(const std::string& what, std::string column)
        : Error(what), column_(std::move(column)) {}
    const std::string& column() const { return column_; }
private:
    std::string column_;
};

// Instrument column has no variation (G^(2) identically zero and similar).
class DegenerateInstrumentError : public Error {
public:
    using Error::Error;
};

// Requested variance is zero or otherwise unusable.
class DegenerateVarianceError : public Error {
public:
    using Error::Error;
};

// Some beta * lambda_j sits numerically on the stability boundary.
class SingularBoundaryError : public Error {
public:
    SingularBoundaryError(const std::string& what, int eigen_index)
        : Error(what), eigen_index_(eigen_index) {}
    int eigen_index() const { return eigen_index_; }
private:
    int eigen_index_;
};

} // namespace netiv

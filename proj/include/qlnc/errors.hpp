#pragma once

#include <stdexcept>
#include <string>

namespace qlnc {

/// Base class for all library errors. CLI maps these to exit code 2.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct LevelMismatch : Error {
    using Error::Error;
};

struct DivisionByZero : Error {
    using Error::Error;
};

struct FieldTooLarge : Error {
    using Error::Error;
};

struct LengthNotDivisible : Error {
    using Error::Error;
};

/// Thrown when an exact inverse is required and the matrix has none.
struct SingularMatrix : Error {
    int rank;
    SingularMatrix(const std::string& what, int r) : Error(what), rank(r) {}
};

struct IndexOutOfRange : Error {
    using Error::Error;
};

struct InvalidBlocks : Error {
    using Error::Error;
};

struct SingularNode : Error {
    using Error::Error;
};

struct ConfigInvalid : Error {
    using Error::Error;
};

struct InfeasibleConfig : Error {
    using Error::Error;
};

struct NTooSmall : Error {
    using Error::Error;
};

struct CapExceeded : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

}  // namespace qlnc

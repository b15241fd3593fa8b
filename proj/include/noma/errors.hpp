#pragma once

#include <stdexcept>
#include <string>

namespace noma {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Inner matrix of an MMSE filter is numerically singular.
struct SingularModel : Error {
    explicit SingularModel(const std::string& what, double condition_estimate = 0.0)
        : Error(what), condition(condition_estimate) {}
    double condition;
};

struct BlockSizeError : Error {
    using Error::Error;
};

struct FrameAssemblyError : Error {
    using Error::Error;
};

// Gram-Schmidt breakdown while orthonormalizing steering vectors.
struct DegenerateBeams : Error {
    using Error::Error;
};

struct EmptyGroup : Error {
    using Error::Error;
};

struct MetricError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

}  // namespace noma

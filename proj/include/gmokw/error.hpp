#pragma once

#include <stdexcept>
#include <string>

namespace gmokw {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : Error { using Error::Error; };
struct ParameterError : Error { using Error::Error; };
struct ArgumentError : Error { using Error::Error; };
struct ConvergenceError : Error { using Error::Error; };
struct BranchError : Error { using Error::Error; };
struct RegimeError : Error { using Error::Error; };
struct RankError : Error { using Error::Error; };
struct NumericalError : Error { using Error::Error; };
struct SingularInformationError : Error { using Error::Error; };
struct InsufficientEquationsError : Error { using Error::Error; };
struct NonNestedError : Error { using Error::Error; };
struct DataError : Error { using Error::Error; };

// Integration that failed to meet its tolerance; the best estimate is kept.
struct QuadratureError : Error {
    double estimate;
    double bound;
    QuadratureError(const std::string& what, double est, double err)
        : Error(what + " (estimate " + std::to_string(est) + ", error bound " +
                std::to_string(err) + ")"),
          estimate(est), bound(err) {}
};

}  // namespace gmokw

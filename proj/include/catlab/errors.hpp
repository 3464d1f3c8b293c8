#pragma once

#include <stdexcept>

namespace catlab {

struct InvalidDimension : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct DivergentIntegral : std::domain_error {
    using std::domain_error::domain_error;
};
struct SuperluminalBoost : std::domain_error {
    using std::domain_error::domain_error;
};
struct EigenFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct GridError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct HistoryError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct TruncationLoss : std::domain_error {
    using std::domain_error::domain_error;
};
struct ModulationSingular : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoBracket : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericalBlowup : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SupportError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FitWindowTooFar : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BadBracket : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BudgetExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace catlab

#pragma once

#include <stdexcept>
#include <string>

namespace stripgram {

// Numerical failure modes carry enough context to act on them (retry with a
// larger budget, raise the precision, ...). All of them map to CLI exit
// code 3.

struct QuadratureNonConvergence : std::runtime_error {
    QuadratureNonConvergence(double requested, double achieved)
        : std::runtime_error("adaptive quadrature could not reach tolerance " +
                             std::to_string(requested) + " (best error estimate " +
                             std::to_string(achieved) + ")"),
          requested_tol(requested), achieved_estimate(achieved) {}
    double requested_tol;
    double achieved_estimate;
};

struct PoleAtOne : std::runtime_error {
    PoleAtOne() : std::runtime_error("zeta evaluation requested at the pole s = 1") {}
};

struct EvaluationFailure : std::runtime_error {
    explicit EvaluationFailure(const std::string& what) : std::runtime_error(what) {}
};

// Cholesky pivot <= 0 at working precision. `pivot` is 1-based; the usual
// remedy is to double the precision.
struct NotPositiveDefinite : std::runtime_error {
    explicit NotPositiveDefinite(int pivot_index)
        : std::runtime_error("Cholesky pivot " + std::to_string(pivot_index) +
                             " is not positive at working precision"),
          pivot(pivot_index) {}
    int pivot;
};

struct SupportExceedsOrder : std::runtime_error {
    SupportExceedsOrder(int index, int order)
        : std::runtime_error("sequence index " + std::to_string(index) +
                             " exceeds factor order " + std::to_string(order)),
          index(index), order(order) {}
    int index;
    int order;
};

struct StabilizationFailure : std::runtime_error {
    StabilizationFailure(double last_value, double previous_value, int n_reached)
        : std::runtime_error("truncation order doubling reached N = " +
                             std::to_string(n_reached) + " without stabilizing (last " +
                             std::to_string(last_value) + ", previous " +
                             std::to_string(previous_value) + ")"),
          last(last_value), previous(previous_value), n_reached(n_reached) {}
    double last;
    double previous;
    int n_reached;
};

}  // namespace stripgram

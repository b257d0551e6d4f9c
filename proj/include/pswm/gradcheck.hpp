#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pswm/neural.hpp"

namespace pswm {

/// Central finite differences of E with respect to every weight:
/// (E(W_ij + h) - E(W_ij - h)) / 2h. Uses forward() and error() only.
std::vector<Matrix> numeric_weight_gradients(const Network& net, std::span<const double> input,
                                             std::span<const double> desired, double h = 1e-4);

/// |a - n| / max(|a|, |n|, 1e-8)
double relative_error(double analytic, double numeric);

struct GradCheckReport {
    std::size_t networks = 0;
    std::size_t weights_checked = 0;
    double max_relative_error = 0.0;
};

struct GradCheckOptions {
    std::size_t networks = 24;
    double h = 1e-4;
    /// Test hook: added to the first analytic EW entry of every network.
    double corrupt_analytic = 0.0;
};

/// Random networks with 2 or 3 layers of 1-5 units, weights and inputs on
/// [-1, 1], targets on [0, 1]; compares backprop() against finite differences.
GradCheckReport run_gradient_check(std::uint64_t seed, const GradCheckOptions& options = {});

inline constexpr double kGradCheckTolerance = 1e-5;

}  // namespace pswm

#pragma once

#include "speclearn/features.hpp"

namespace speclearn {

struct TrainConfig {
    double tau = 1000.0;      // l1 budget
    int max_epochs = 2000;
    double tolerance = 1e-6;  // relative improvement of the best objective per check window
    double step_scale = 1.0;
    std::uint64_t seed = 0;   // kept for interface stability; the solver is deterministic
};

struct TrainResult {
    std::vector<double> weights;
    double objective = 0.0;
    int epochs_used = 0;
    bool converged = false;
};

/// sum_i max(0, 1 - label_i * (design z)_i) over a row-major +-1 design.
double hinge_objective(std::span<const double> weights, std::span<const std::int8_t> design,
                       std::size_t rows, std::span<const std::int8_t> labels);
double hinge_objective(std::span<const double> weights, const SelectedFeatures& features,
                       std::span<const std::int8_t> labels);

/// Euclidean projection onto the l1 ball of radius tau (exact pivot
/// soft-threshold). Identity whenever the input is already feasible.
std::vector<double> project_l1(std::span<const double> v, double tau);

/// Projected subgradient descent on the hinge sum with step_scale/sqrt(t)
/// steps, projecting onto the tau-ball each epoch and returning the best
/// iterate seen. The subgradient is averaged over rows so step_scale is
/// independent of the sample size.
TrainResult train(const SelectedFeatures& features, std::span<const std::int8_t> labels,
                  const TrainConfig& config);

}  // namespace speclearn

#include "speclearn/svm.hpp"

#include <algorithm>
#include <cmath>

namespace speclearn {

double hinge_objective(std::span<const double> weights, std::span<const std::int8_t> design,
                       std::size_t rows, std::span<const std::int8_t> labels) {
    const std::size_t k = weights.size();
    if (k == 0 || rows == 0 || design.size() != rows * k || labels.size() != rows)
        throw std::invalid_argument("hinge_objective: shape mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
        const std::int8_t* row = design.data() + i * k;
        double score = 0.0;
        for (std::size_t c = 0; c < k; ++c) score += row[c] * weights[c];
        const double slack = 1.0 - labels[i] * score;
        if (slack > 0.0) total += slack;
    }
    return total;
}

double hinge_objective(std::span<const double> weights, const SelectedFeatures& features,
                       std::span<const std::int8_t> labels) {
    return hinge_objective(weights, features.design, features.rows, labels);
}

std::vector<double> project_l1(std::span<const double> v, double tau) {
    if (!(tau > 0.0))
        throw std::invalid_argument("project_l1: tau must be positive");
    std::vector<double> w(v.begin(), v.end());
    double norm1 = 0.0;
    for (double x : w) norm1 += std::fabs(x);
    if (norm1 <= tau) return w;

    std::vector<double> mag(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) mag[i] = std::fabs(w[i]);
    std::sort(mag.begin(), mag.end(), std::greater<double>());
    double cumulative = 0.0, theta = 0.0;
    for (std::size_t j = 0; j < mag.size(); ++j) {
        cumulative += mag[j];
        const double candidate = (cumulative - tau) / static_cast<double>(j + 1);
        if (mag[j] > candidate) theta = candidate;
    }
    for (double& x : w) {
        const double shrunk = std::fabs(x) - theta;
        x = shrunk > 0.0 ? std::copysign(shrunk, x) : 0.0;
    }
    return w;
}

TrainResult train(const SelectedFeatures& features, std::span<const std::int8_t> labels,
                  const TrainConfig& config) {
    const std::size_t rows = features.rows;
    const std::size_t k = features.count();
    if (rows == 0 || k == 0)
        throw std::invalid_argument("train: empty design");
    if (labels.size() != rows)
        throw std::invalid_argument("train: labels length does not match design rows");
    if (!(config.tau > 0.0) || config.max_epochs < 1 || !(config.tolerance > 0.0))
        throw std::invalid_argument("train: invalid config");

    constexpr int kCheckInterval = 50;
    const std::int8_t* design = features.design.data();
    const double inv_rows = 1.0 / static_cast<double>(rows);

    std::vector<double> z(k, 0.0);
    std::vector<double> best_z = z;
    double best_obj = static_cast<double>(rows);  // z = 0: every hinge term is 1
    double window_obj = best_obj;
    std::vector<double> margins(rows);
    std::vector<long long> grad(k);
    bool converged = false;
    int epochs = 0;

    for (int t = 1; t <= config.max_epochs; ++t) {
        epochs = t;
        double obj = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
            const std::int8_t* row = design + i * k;
            double score = 0.0;
            for (std::size_t c = 0; c < k; ++c) score += row[c] * z[c];
            const double margin = labels[i] * score;
            margins[i] = margin;
            if (margin < 1.0) obj += 1.0 - margin;
        }
        if (!std::isfinite(obj))
            throw numeric_error("train: objective became non-finite at epoch " + std::to_string(t));
        if (obj < best_obj) {
            best_obj = obj;
            best_z = z;
        }
        if (best_obj == 0.0) {
            converged = true;
            break;
        }
        if (t % kCheckInterval == 0) {
            if (window_obj - best_obj <= config.tolerance * std::max(1.0, window_obj)) {
                converged = true;
                break;
            }
            window_obj = best_obj;
        }

        std::fill(grad.begin(), grad.end(), 0ll);
        for (std::size_t i = 0; i < rows; ++i) {
            if (margins[i] >= 1.0) continue;
            const std::int8_t* row = design + i * k;
            const long long y = labels[i];
            for (std::size_t c = 0; c < k; ++c) grad[c] -= y * row[c];
        }
        const double step = config.step_scale / std::sqrt(static_cast<double>(t));
        for (std::size_t c = 0; c < k; ++c)
            z[c] -= step * inv_rows * static_cast<double>(grad[c]);
        z = project_l1(z, config.tau);
    }

    // the last projected iterate was never scored inside the loop
    const double last_obj = hinge_objective(z, features.design, rows, labels);
    if (last_obj < best_obj) {
        best_obj = last_obj;
        best_z = std::move(z);
    }
    return {std::move(best_z), best_obj, epochs, converged};
}

}  // namespace speclearn

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "blendids/errors.hpp"

namespace blendids {

struct AdamConfig {
    double alpha = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

// Exponential moment estimates for one parameter tensor. Moments are
// allocated lazily on the first step.
struct AdamState {
    AdamConfig config;
    std::vector<double> m;
    std::vector<double> v;
    std::uint64_t t = 0;
};

// One bias-corrected update: m and v track the gradient and its square,
// params move by -alpha * m_hat / (sqrt(v_hat) + epsilon).
inline void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state) {
    if (params.size() != grads.size()) {
        throw ShapeError("adam: parameter and gradient sizes differ");
    }
    if (state.m.empty()) {
        state.m.assign(params.size(), 0.0);
        state.v.assign(params.size(), 0.0);
    } else if (state.m.size() != params.size()) {
        throw ShapeError("adam: state was sized for a different tensor");
    }

    ++state.t;
    const auto& [alpha, beta1, beta2, epsilon] = state.config;
    const double corr1 = 1.0 - std::pow(beta1, static_cast<double>(state.t));
    const double corr2 = 1.0 - std::pow(beta2, static_cast<double>(state.t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        state.m[i] = beta1 * state.m[i] + (1.0 - beta1) * g;
        state.v[i] = beta2 * state.v[i] + (1.0 - beta2) * g * g;
        const double m_hat = state.m[i] / corr1;
        const double v_hat = state.v[i] / corr2;
        params[i] -= alpha * m_hat / (std::sqrt(v_hat) + epsilon);
    }
}

} // namespace blendids

#pragma once

// Gradient-check and regression fixtures for the network tests.

#include <algorithm>
#include <cmath>
#include <vector>

#include "fracdec/mlp.hpp"
#include "fracdec/rng.hpp"

namespace mlp_checks {

using namespace fracdec;

inline Dataset linear_target(std::size_t n, std::uint64_t seed, double noise) {
    Rng rng(seed);
    Dataset d;
    d.features = 2;
    for (std::size_t i = 0; i < n; ++i) {
        const double x1 = rng.uniform(-1, 1), x2 = rng.uniform(-1, 1);
        d.x.push_back(x1);
        d.x.push_back(x2);
        d.y.push_back(2 * x1 - x2 + noise * rng.normal());
    }
    return d;
}

// Worst relative error between analytic and central-difference gradients.
inline double gradient_check(MlpRegressor model, const Dataset& data) {
    std::vector<double> grad(model.parameter_count());
    mse_gradient(model, data, {}, grad);
    const double h = 1e-5;
    double worst = 0.0;
    auto params = model.parameters();
    for (std::size_t k = 0; k < params.size(); ++k) {
        const double keep = params[k];
        params[k] = keep + h;
        const double up = mse(model, data);
        params[k] = keep - h;
        const double down = mse(model, data);
        params[k] = keep;
        const double fd = (up - down) / (2 * h);
        const double err = std::abs(fd - grad[k]) / std::max({std::abs(fd), std::abs(grad[k]), 1e-6});
        worst = std::max(worst, err);
    }
    return worst;
}

// Worst gradient-check error over `nets` random networks and datasets.
inline double gradient_check_suite(int nets, std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (int net = 0; net < nets; ++net) {
        const std::size_t inputs = 1 + rng.below(5), hidden = 1 + rng.below(10);
        auto m = MlpRegressor::random(inputs, hidden, rng);
        for (auto& p : m.parameters()) p += 0.1 * rng.normal();
        Dataset d;
        d.features = inputs;
        for (int i = 0; i < 20; ++i) {
            for (std::size_t j = 0; j < inputs; ++j) d.x.push_back(rng.uniform(-2, 2));
            d.y.push_back(rng.uniform(-1, 1));
        }
        worst = std::max(worst, gradient_check(m, d));
    }
    return worst;
}

}  // namespace mlp_checks

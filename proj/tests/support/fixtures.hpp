#pragma once

// Synthetic inputs shared by unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "fracdec/frontier.hpp"
#include "fracdec/market_data.hpp"
#include "fracdec/rng.hpp"

namespace fixtures {

using namespace fracdec;

// 15 stocks with factors spread over their valid ranges and normalized so
// that max |NEU| = max NV = 1.
inline StockRiskFactors synthetic_factors(std::uint64_t seed = 2024, std::size_t n = 15) {
    Rng rng(seed);
    StockRiskFactors f;
    for (std::size_t i = 0; i < n; ++i) {
        f.stocks.push_back("S" + std::to_string(i + 1));
        f.neu.push_back(rng.uniform(-1, 1));
        f.nv.push_back(rng.uniform(0.1, 1));
        f.h_alpha.push_back(rng.uniform(0.9, 1.3));
    }
    double me = 0, mv = 0;
    for (std::size_t i = 0; i < n; ++i) {
        me = std::max(me, std::abs(f.neu[i]));
        mv = std::max(mv, f.nv[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        f.neu[i] /= me;
        f.nv[i] /= mv;
    }
    return f;
}

// Random mean vector and positive-definite covariance for n assets.
inline AssetMoments random_moments(Rng& rng, std::size_t n) {
    std::vector<double> b(n * n), mu(n), cov(n * n, 0.0);
    for (auto& x : b) x = rng.normal(0.0, 0.1);
    for (auto& m : mu) m = rng.uniform(-0.02, 0.05);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0;
            for (std::size_t k = 0; k < n; ++k) s += b[i * n + k] * b[j * n + k];
            cov[i * n + j] = s + (i == j ? 1e-3 : 0.0);
        }
    return make_moments(std::move(mu), std::move(cov));
}

// 15 assets: seven carry the high expected returns and moderate variance,
// the other eight have lower returns, so efficient high-return portfolios
// concentrate on the first seven.
inline AssetMoments concentrated_universe(std::uint64_t seed = 77) {
    Rng rng(seed);
    const std::size_t n = 15;
    std::vector<double> mu(n), sd(n), cov(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        const bool top = i < 7;
        mu[i] = top ? rng.uniform(0.08, 0.12) : rng.uniform(0.01, 0.05);
        sd[i] = top ? rng.uniform(0.15, 0.25) : rng.uniform(0.10, 0.30);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) cov[i * n + j] = (i == j ? 1.0 : 0.2) * sd[i] * sd[j];
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("M" + std::to_string(i + 1));
    return make_moments(std::move(mu), std::move(cov), std::move(labels));
}

inline std::vector<std::string> top_seven(const AssetMoments& m) {
    return {m.labels.begin(), m.labels.begin() + 7};
}

}  // namespace fixtures

namespace fixtures {

struct GridMin {
    double strict = INFINITY;   // min variance over grid points with return >= target
    double relaxed = INFINITY;  // same with the target lowered by `slack`
};

// Exhaustive search over the weight simplex at the given step (n <= 4).
inline GridMin simplex_grid_min(const AssetMoments& m, double target, double slack, int steps = 100) {
    const std::size_t n = m.size();
    GridMin g;
    std::vector<int> k(n, 0);
    std::vector<double> w(n);
    auto visit = [&]() {
        double ret = 0, var = 0;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = static_cast<double>(k[i]) / steps;
            ret += w[i] * m.mean[i];
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) var += w[i] * w[j] * m.covariance(i, j);
        if (ret >= target - 1e-15) g.strict = std::min(g.strict, var);
        if (ret >= target - slack) g.relaxed = std::min(g.relaxed, var);
    };
    // enumerate compositions of `steps` into n parts
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
        if (i + 1 == n) {
            k[i] = left;
            visit();
            return;
        }
        for (int v = 0; v <= left; ++v) {
            k[i] = v;
            rec(i + 1, left - v);
        }
    };
    rec(0, steps);
    return g;
}

}  // namespace fixtures

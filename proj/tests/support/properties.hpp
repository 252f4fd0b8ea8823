#pragma once

// Randomized property suites for the entropy order monotonicity, the Shannon
// reduction and the translation / scaling behaviour of the risk measures.
// Each returns the number of violated instances.

#include <cmath>
#include <string>
#include <vector>

#include "fracdec/decision.hpp"
#include "fracdec/entropy.hpp"
#include "fracdec/rng.hpp"

namespace properties {

using namespace fracdec;

inline ActionSpec random_action(Rng& rng, std::string label) {
    const std::size_t n = 2 + rng.below(5);
    std::vector<double> x(n), w(n);
    for (auto& v : x) v = rng.uniform(1.5, 100.0);
    for (auto& v : w) v = rng.uniform() + 0.01;
    return ActionSpec(std::move(label), std::move(x), ProbVector::normalize(std::move(w)));
}

// Increasing and positive on [1.5, inf).
inline UtilityFunction random_utility(Rng& rng) {
    switch (rng.below(4)) {
        case 0: return UtilityFunction::linear(rng.uniform(0.5, 2.0), rng.uniform(0.0, 1.0));
        case 1: return UtilityFunction::logarithm();
        case 2: return UtilityFunction::square_root();
        default: return UtilityFunction::square();
    }
}

inline std::size_t order_monotonicity(std::size_t instances, std::uint64_t seed) {
    Rng rng(seed);
    std::size_t bad = 0;
    for (std::size_t k = 0; k < instances; ++k) {
        const LogBase base = rng.below(2) ? LogBase::natural : LogBase::ten;
        const double ps = crossing_threshold(base);
        double a1 = rng.uniform(0.01, 1.0), a2 = rng.uniform(0.01, 1.0);
        if (a1 > a2) std::swap(a1, a2);
        if (a1 == a2) continue;
        const FractionalOrder lo(a1), hi(a2);
        for (int g = 1; g < 50; ++g) {
            const double below = ps * g / 50.0;
            const double above = ps + (1.0 - ps) * g / 50.0;
            if (entropy_term(below, lo, base) > entropy_term(below, hi, base)) { ++bad; break; }
            if (entropy_term(above, lo, base) < entropy_term(above, hi, base)) { ++bad; break; }
        }
    }
    return bad;
}

inline std::size_t shannon_reduction(std::size_t instances, std::uint64_t seed) {
    Rng rng(seed);
    std::size_t bad = 0;
    for (std::size_t k = 0; k < instances; ++k) {
        std::vector<double> w(1 + rng.below(30));
        for (auto& v : w) v = rng.uniform();
        w[0] += 1e-3;
        const auto p = ProbVector::normalize(std::move(w));
        const LogBase base = rng.below(2) ? LogBase::natural : LogBase::ten;
        if (std::abs(ubriaco_entropy(p, FractionalOrder(1.0), base) - shannon_entropy(p, base)) > 1e-12) ++bad;
    }
    return bad;
}

// {y, y + k}: strictly lower risk for y + k on [0, 1), equal at lambda = 1
// where only the shift-invariant spread terms remain.
inline std::size_t translation(std::size_t instances, std::uint64_t seed) {
    Rng rng(seed);
    std::size_t bad = 0;
    for (std::size_t k = 0; k < instances; ++k) {
        const auto y = random_action(rng, "y");
        const DecisionProblem p({y, shifted_action(y, rng.uniform(0.1, 50.0), "y+k")}, random_utility(rng));
        const FractionalOrder alpha(rng.uniform(0.01, 1.0));
        bool ok = true;
        for (auto m : {RiskMeasure::eu_fe, RiskMeasure::eu_fev}) {
            for (int g = 0; g < 20; ++g) {
                const RiskParams rp(alpha, g / 20.0, m);
                ok &= risk_value(p, 1, rp) < risk_value(p, 0, rp);
            }
            const RiskParams rp(alpha, rng.uniform(), m);
            ok &= risk_value(p, 1, rp) < risk_value(p, 0, rp);
            const RiskParams one(alpha, 1.0, m);
            ok &= std::abs(risk_value(p, 1, one) - risk_value(p, 0, one)) <= 1e-12;
        }
        if (!ok) ++bad;
    }
    return bad;
}

// {y, t y} under EU-FE, same lambda ranges as translation.
inline std::size_t scaling_fe(std::size_t instances, std::uint64_t seed) {
    Rng rng(seed);
    std::size_t bad = 0;
    for (std::size_t k = 0; k < instances; ++k) {
        const auto y = random_action(rng, "y");
        const DecisionProblem p({y, scaled_action(y, rng.uniform(1.05, 10.0), "ty")}, random_utility(rng));
        const FractionalOrder alpha(rng.uniform(0.01, 1.0));
        bool ok = true;
        for (int g = 0; g < 20; ++g) {
            const RiskParams rp(alpha, g / 20.0, RiskMeasure::eu_fe);
            ok &= risk_value(p, 1, rp) < risk_value(p, 0, rp);
        }
        const RiskParams one(alpha, 1.0, RiskMeasure::eu_fe);
        ok &= std::abs(risk_value(p, 1, one) - risk_value(p, 0, one)) <= 1e-12;
        if (!ok) ++bad;
    }
    return bad;
}

// {y, t y} under EU-FEV: the solver's crossing equals the closed-form bound.
inline std::size_t scaling_fev_bound(std::size_t instances, std::uint64_t seed, double* worst = nullptr) {
    Rng rng(seed);
    std::size_t bad = 0;
    for (std::size_t k = 0; k < instances; ++k) {
        const auto y = random_action(rng, "y");
        const double t = rng.uniform(1.05, 10.0);
        const DecisionProblem p({y, scaled_action(y, t, "ty")}, random_utility(rng));
        const FractionalOrder alpha(rng.uniform(0.01, 1.0));
        const double bound = scaling_lambda_bound(y, t, p.utility());
        const auto part = lambda_preference_intervals(p, 1, 0, alpha, RiskMeasure::eu_fev);
        const auto first = part.where(Preference::first);
        const bool ok = part.crossing && std::abs(*part.crossing - bound) <= 1e-6 && first.size() == 1 &&
                        first[0].lo == 0.0 && std::abs(first[0].hi - bound) <= 1e-6 && !first[0].hi_closed;
        if (worst && part.crossing) *worst = std::max(*worst, std::abs(*part.crossing - bound));
        if (!ok) ++bad;
    }
    return bad;
}

}  // namespace properties

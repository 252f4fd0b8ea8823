#include "fracdec/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <fmt/format.h>

#include "fracdec/errors.hpp"
#include "fracdec/kernels.hpp"

namespace fracdec {

std::string_view to_string(LogBase base) {
    return base == LogBase::natural ? "natural" : "ten";
}

LogBase parse_log_base(std::string_view text) {
    if (text == "natural" || text == "e" || text == "ln") return LogBase::natural;
    if (text == "ten" || text == "10" || text == "log10") return LogBase::ten;
    throw DomainError(fmt::format("unknown log base '{}' (expected natural or ten)", text));
}

FractionalOrder::FractionalOrder(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw DomainError(fmt::format("fractional order must lie in (0, 1], got {}", alpha));
}

ProbVector::ProbVector(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw ValidationError("pmf must have at least one entry");
    double total = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        const double p = probs_[i];
        if (!std::isfinite(p) || p < 0.0 || p > 1.0)
            throw ValidationError(fmt::format("pmf entry {} = {} is outside [0, 1]", i, p));
        total += p;
    }
    if (std::abs(total - 1.0) > sum_tolerance)
        throw ValidationError(fmt::format("pmf entries sum to {:.12g}, expected 1", total));
}

ProbVector ProbVector::normalize(std::vector<double> weights) {
    double total = 0.0;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0)
            throw ValidationError(fmt::format("cannot normalize weight {}", w));
        total += w;
    }
    if (!(total > 0.0)) throw ValidationError("cannot normalize weights with zero total");
    for (double& w : weights) w /= total;
    return ProbVector(std::move(weights));
}

double surprisal(double p, LogBase base) {
    if (!(p > 0.0 && p <= 1.0))
        throw DomainError(fmt::format("probability must lie in (0, 1], got {}", p));
    if (p == 1.0) return 0.0;
    return base == LogBase::natural ? -std::log(p) : -std::log10(p);
}

double info_gain(double p, FractionalOrder alpha, LogBase base) {
    const double s = surprisal(p, base);
    if (s == 0.0) return 0.0;
    return alpha.is_shannon() ? s : std::pow(s, alpha.value());
}

double elasticity(double p, FractionalOrder alpha, LogBase base) {
    if (!(p > 0.0 && p < 1.0))
        throw DomainError(fmt::format("elasticity requires 0 < p < 1, got {}", p));
    return alpha.value() / surprisal(p, base);
}

double entropy_term(double p, FractionalOrder alpha, LogBase base) {
    if (!(p >= 0.0 && p <= 1.0))
        throw DomainError(fmt::format("probability must lie in [0, 1], got {}", p));
    if (p == 0.0) return 0.0;
    return p * info_gain(p, alpha, base);
}

double ubriaco_entropy(const ProbVector& pmf, FractionalOrder alpha, LogBase base) {
    std::vector<double> terms;
    terms.reserve(pmf.size());
    for (double p : pmf.probs()) terms.push_back(entropy_term(p, alpha, base));
    std::sort(terms.begin(), terms.end());
    return kernels::sum(terms);
}

double shannon_entropy(const ProbVector& pmf, LogBase base) {
    return ubriaco_entropy(pmf, FractionalOrder(1.0), base);
}

double binomial_entropy(double p, FractionalOrder alpha, LogBase base) {
    if (!(p >= 0.0 && p <= 1.0))
        throw DomainError(fmt::format("probability must lie in [0, 1], got {}", p));
    return entropy_term(p, alpha, base) + entropy_term(1.0 - p, alpha, base);
}

double crossing_threshold(LogBase base) {
    return base == LogBase::natural ? 1.0 / std::numbers::e : 0.1;
}

}  // namespace fracdec

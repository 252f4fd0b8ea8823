#pragma once

// Fractional-order (Ubriaco) information gain and entropy.
//
//   info gain      I(p)   = (-log p)^alpha
//   elasticity     E(p)   = alpha / (-log p)
//   entropy term   h(p)   = p (-log p)^alpha,   h(0) = h(1) = 0
//   entropy        H(pmf) = sum_x h(p(x))
//
// alpha is restricted to (0, 1]; alpha = 1 recovers Shannon entropy.

#include <span>
#include <string_view>
#include <vector>

namespace fracdec {

enum class LogBase { natural, ten };

std::string_view to_string(LogBase base);
/// Accepts "natural", "e", "ln", "ten", "10", "log10". Throws DomainError.
LogBase parse_log_base(std::string_view text);

/// Order of the fractional entropy, 0 < alpha <= 1.
class FractionalOrder {
public:
    /// Throws DomainError outside (0, 1].
    explicit FractionalOrder(double alpha);

    [[nodiscard]] double value() const noexcept { return alpha_; }
    [[nodiscard]] bool is_shannon() const noexcept { return alpha_ == 1.0; }

    friend bool operator==(const FractionalOrder&, const FractionalOrder&) = default;

private:
    double alpha_;
};

/// A validated finite probability mass function.
class ProbVector {
public:
    static constexpr double sum_tolerance = 1e-9;

    /// Throws ValidationError if empty, any entry outside [0, 1] or non-finite,
    /// or the entries do not sum to 1 within sum_tolerance.
    explicit ProbVector(std::vector<double> probs);

    /// Scales non-negative weights to sum to 1. Throws ValidationError on
    /// negative or non-finite weights, or a zero total.
    static ProbVector normalize(std::vector<double> weights);

    [[nodiscard]] std::span<const double> probs() const noexcept { return probs_; }
    [[nodiscard]] std::size_t size() const noexcept { return probs_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return probs_[i]; }

    friend bool operator==(const ProbVector&, const ProbVector&) = default;

private:
    std::vector<double> probs_;
};

/// -log_base(p) for p in (0, 1].
double surprisal(double p, LogBase base = LogBase::natural);

double info_gain(double p, FractionalOrder alpha, LogBase base = LogBase::natural);
double elasticity(double p, FractionalOrder alpha, LogBase base = LogBase::natural);
double entropy_term(double p, FractionalOrder alpha, LogBase base = LogBase::natural);

/// Permutation-invariant bit for bit: terms are summed in sorted order.
double ubriaco_entropy(const ProbVector& pmf, FractionalOrder alpha,
                       LogBase base = LogBase::natural);
double shannon_entropy(const ProbVector& pmf, LogBase base = LogBase::natural);
double binomial_entropy(double p, FractionalOrder alpha, LogBase base = LogBase::natural);

/// Probability where -log_base p = 1: 1/e (natural) or 0.1 (base ten). Below it
/// the entropy term shrinks as alpha decreases; above it the term grows.
double crossing_threshold(LogBase base);

}  // namespace fracdec

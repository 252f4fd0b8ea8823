#pragma once

// Decision problems under risk and the expected-utility / fractional-entropy
// risk measures built on them.
//
// For an action a with fractional entropy H_a, expected utility E[u(a)] and
// outcome variance Var(a), with normalizers taken over the whole action space:
//
//   NEU(a) = E[u(a)] / max |E[u]|        NV(a) = Var(a) / max Var
//   EU-FE  : R(a) = lambda H_a - (1 - lambda) NEU(a)
//   EU-FEV : R(a) = lambda/2 (H_a + NV(a)) - (1 - lambda) NEU(a)
//
// Both are affine in lambda, so risks are carried as (slope, intercept) pairs
// and preference regions over lambda are solved exactly. Lower risk is better.
// alpha = 1 gives the Shannon-entropy measures (EU-E, EU-EV).

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fracdec/entropy.hpp"

namespace fracdec {

enum class UtilityKind { linear, logarithm, square_root, square, s_shaped };

class UtilityFunction {
public:
    /// u(x) = b x + c, b > 0.
    static UtilityFunction linear(double b = 1.0, double c = 0.0);
    static UtilityFunction logarithm();
    static UtilityFunction square_root();
    static UtilityFunction square();
    /// log(1 + x) for gains, -log(1 - x) for losses.
    static UtilityFunction s_shaped();

    /// Builds from a kind and its coefficient list ({b, c} for linear, empty
    /// otherwise). Throws DomainError on bad coefficients.
    static UtilityFunction from_kind(UtilityKind kind, std::span<const double> params = {});

    [[nodiscard]] UtilityKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::vector<double> params() const;

    /// Throws EvaluationError where the utility is undefined (log of x <= 0,
    /// sqrt of x < 0) or the result is not finite.
    double operator()(double x) const;

    /// "u(x) = sqrt(x)" style label.
    [[nodiscard]] std::string display() const;

    friend bool operator==(const UtilityFunction&, const UtilityFunction&) = default;

private:
    UtilityFunction(UtilityKind kind, double b, double c) : kind_(kind), b_(b), c_(c) {}

    UtilityKind kind_;
    double b_;
    double c_;
};

std::string_view to_string(UtilityKind kind);
/// Accepts the canonical names plus short forms: x, log, sqrt, x2, s.
UtilityKind parse_utility_kind(std::string_view text);

struct ActionSpec {
    /// Throws ValidationError if outcomes and pmf differ in length or an
    /// outcome is not finite.
    ActionSpec(std::string label, std::vector<double> outcomes, ProbVector pmf);

    std::string label;
    std::vector<double> outcomes;
    ProbVector pmf;
};

/// sum_j p_j u(x_j); names the offending outcome on evaluation failure.
double expected_utility(const ActionSpec& action, const UtilityFunction& u);
/// Population variance of the payoff, sum_j p_j (x_j - mean)^2.
double outcome_variance(const ActionSpec& action);

/// Finite action space with a utility function. Expected utilities, variances
/// and the action-space normalizers are computed once at construction.
class DecisionProblem {
public:
    DecisionProblem(std::vector<ActionSpec> actions, UtilityFunction utility);

    [[nodiscard]] const std::vector<ActionSpec>& actions() const noexcept { return actions_; }
    [[nodiscard]] const ActionSpec& action(std::size_t i) const;
    [[nodiscard]] const UtilityFunction& utility() const noexcept { return utility_; }
    [[nodiscard]] std::size_t size() const noexcept { return actions_.size(); }
    /// Throws LookupError for unknown labels.
    [[nodiscard]] std::size_t index_of(std::string_view label) const;

    [[nodiscard]] double expected_utility(std::size_t i) const;
    [[nodiscard]] double variance(std::size_t i) const;
    [[nodiscard]] double max_abs_expected_utility() const noexcept { return max_abs_eu_; }
    [[nodiscard]] double max_variance() const noexcept { return max_var_; }
    /// 0 when every expected utility is 0.
    [[nodiscard]] double normalized_expected_utility(std::size_t i) const;
    /// 0 when every variance is 0.
    [[nodiscard]] double normalized_variance(std::size_t i) const;

    [[nodiscard]] DecisionProblem with_utility(UtilityFunction utility) const;

private:
    void check_index(std::size_t i) const;

    std::vector<ActionSpec> actions_;
    UtilityFunction utility_;
    std::vector<double> eu_;
    std::vector<double> var_;
    double max_abs_eu_ = 0.0;
    double max_var_ = 0.0;
};

enum class RiskMeasure { eu_fe, eu_fev };

std::string_view to_string(RiskMeasure m);
/// Accepts eu-fe / eu_fe / EU-FE and the -fev variants.
RiskMeasure parse_risk_measure(std::string_view text);

struct RiskParams {
    /// Throws DomainError unless 0 <= lambda <= 1.
    RiskParams(FractionalOrder alpha, double lambda, RiskMeasure measure,
               LogBase base = LogBase::natural);

    FractionalOrder alpha;
    double lambda;
    RiskMeasure measure;
    LogBase base;
};

/// Risk as slope * lambda + intercept.
struct AffineRisk {
    double slope = 0.0;
    double intercept = 0.0;

    [[nodiscard]] double at(double lambda) const noexcept { return slope * lambda + intercept; }
    friend bool operator==(const AffineRisk&, const AffineRisk&) = default;
};

AffineRisk risk_affine(const DecisionProblem& problem, std::size_t action, FractionalOrder alpha,
                       RiskMeasure measure, LogBase base = LogBase::natural);
double risk_value(const DecisionProblem& problem, std::size_t action, const RiskParams& params);

enum class Preference { first, second, indifferent };
std::string_view to_string(Preference p);

inline constexpr double preference_tie_eps = 1e-12;
inline constexpr double lambda_boundary_tol = 1e-10;

Preference prefer(const DecisionProblem& problem, std::size_t i, std::size_t j,
                  const RiskParams& params);

/// Action indices by ascending risk; ties keep their original order.
std::vector<std::size_t> rank_actions(const DecisionProblem& problem, const RiskParams& params);

/// A maximal piece of [0, 1] on which one preference holds.
struct LambdaInterval {
    double lo = 0.0;
    double hi = 1.0;
    bool lo_closed = true;
    bool hi_closed = true;
    Preference preferred = Preference::indifferent;

    [[nodiscard]] bool contains(double lambda) const noexcept;
    /// "[0, 0.0789)" style rendering with the given number of decimals.
    [[nodiscard]] std::string format(int decimals = 4) const;
};

struct LambdaPartition {
    std::vector<LambdaInterval> pieces;  // ordered, covering [0, 1]
    std::optional<double> crossing;      // lambda* when it lies in [0, 1]

    /// Preference at a given lambda.
    [[nodiscard]] Preference at(double lambda) const;
    /// Pieces on which `p` holds.
    [[nodiscard]] std::vector<LambdaInterval> where(Preference p) const;
};

/// Partition of [0, 1] by the sign of r_i(lambda) - r_j(lambda).
LambdaPartition solve_lambda_partition(const AffineRisk& ri, const AffineRisk& rj);

LambdaPartition lambda_preference_intervals(const DecisionProblem& problem, std::size_t i,
                                            std::size_t j, FractionalOrder alpha,
                                            RiskMeasure measure, LogBase base = LogBase::natural);

/// For the action space {b, t b}, t > 1, under EU-FEV: R(t b) < R(b) exactly
/// for lambda below the returned bound. `eu_ratio` = E[u(X)] / E[u(tX)].
double scaling_lambda_bound(double eu_ratio, double t);
double scaling_lambda_bound(const ActionSpec& base_action, double t, const UtilityFunction& u);

/// The action with every outcome multiplied by t (same pmf).
ActionSpec scaled_action(const ActionSpec& action, double t, std::string label);
/// The action with k added to every outcome (same pmf).
ActionSpec shifted_action(const ActionSpec& action, double k, std::string label);

}  // namespace fracdec

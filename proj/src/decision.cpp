#include "fracdec/decision.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "fracdec/errors.hpp"
#include "fracdec/kernels.hpp"

namespace fracdec {

// ---- utility ---------------------------------------------------------------

UtilityFunction UtilityFunction::linear(double b, double c) {
    if (!(b > 0.0) || !std::isfinite(b) || !std::isfinite(c))
        throw DomainError(fmt::format("linear utility requires b > 0, got b={} c={}", b, c));
    return {UtilityKind::linear, b, c};
}
UtilityFunction UtilityFunction::logarithm() { return {UtilityKind::logarithm, 1.0, 0.0}; }
UtilityFunction UtilityFunction::square_root() { return {UtilityKind::square_root, 1.0, 0.0}; }
UtilityFunction UtilityFunction::square() { return {UtilityKind::square, 1.0, 0.0}; }
UtilityFunction UtilityFunction::s_shaped() { return {UtilityKind::s_shaped, 1.0, 0.0}; }

UtilityFunction UtilityFunction::from_kind(UtilityKind kind, std::span<const double> params) {
    switch (kind) {
        case UtilityKind::linear:
            if (params.empty()) return linear();
            if (params.size() == 1) return linear(params[0]);
            if (params.size() == 2) return linear(params[0], params[1]);
            throw DomainError("linear utility takes at most two coefficients (b, c)");
        case UtilityKind::logarithm:
        case UtilityKind::square_root:
        case UtilityKind::square:
        case UtilityKind::s_shaped:
            if (!params.empty())
                throw DomainError(fmt::format("utility '{}' takes no coefficients", to_string(kind)));
            return {kind, 1.0, 0.0};
    }
    throw DomainError("unknown utility kind");
}

std::vector<double> UtilityFunction::params() const {
    if (kind_ == UtilityKind::linear) return {b_, c_};
    return {};
}

double UtilityFunction::operator()(double x) const {
    double u = 0.0;
    switch (kind_) {
        case UtilityKind::linear: u = b_ * x + c_; break;
        case UtilityKind::logarithm:
            if (!(x > 0.0)) throw EvaluationError(fmt::format("log(x) is undefined at x = {}", x));
            u = std::log(x);
            break;
        case UtilityKind::square_root:
            if (!(x >= 0.0))
                throw EvaluationError(fmt::format("sqrt(x) is undefined at x = {}", x));
            u = std::sqrt(x);
            break;
        case UtilityKind::square: u = x * x; break;
        case UtilityKind::s_shaped: u = x >= 0.0 ? std::log1p(x) : -std::log1p(-x); break;
    }
    if (!std::isfinite(u))
        throw EvaluationError(fmt::format("{} is not finite at x = {}", display(), x));
    return u;
}

std::string UtilityFunction::display() const {
    switch (kind_) {
        case UtilityKind::linear:
            if (b_ == 1.0 && c_ == 0.0) return "u(x) = x";
            return fmt::format("u(x) = {}x + {}", b_, c_);
        case UtilityKind::logarithm: return "u(x) = log(x)";
        case UtilityKind::square_root: return "u(x) = sqrt(x)";
        case UtilityKind::square: return "u(x) = x^2";
        case UtilityKind::s_shaped: return "u(x) = S(x)";
    }
    return "u(x) = ?";
}

std::string_view to_string(UtilityKind kind) {
    switch (kind) {
        case UtilityKind::linear: return "linear";
        case UtilityKind::logarithm: return "logarithm";
        case UtilityKind::square_root: return "square_root";
        case UtilityKind::square: return "square";
        case UtilityKind::s_shaped: return "s_shaped";
    }
    return "unknown";
}

UtilityKind parse_utility_kind(std::string_view text) {
    if (text == "linear" || text == "x") return UtilityKind::linear;
    if (text == "logarithm" || text == "log") return UtilityKind::logarithm;
    if (text == "square_root" || text == "sqrt") return UtilityKind::square_root;
    if (text == "square" || text == "x2" || text == "x^2") return UtilityKind::square;
    if (text == "s_shaped" || text == "s-shaped" || text == "s") return UtilityKind::s_shaped;
    throw DomainError(fmt::format("unknown utility '{}'", text));
}

// ---- actions ---------------------------------------------------------------

ActionSpec::ActionSpec(std::string label_, std::vector<double> outcomes_, ProbVector pmf_)
    : label(std::move(label_)), outcomes(std::move(outcomes_)), pmf(std::move(pmf_)) {
    if (outcomes.size() != pmf.size())
        throw ValidationError(fmt::format("action '{}': {} outcomes but {} probabilities", label,
                                          outcomes.size(), pmf.size()));
    for (double x : outcomes)
        if (!std::isfinite(x))
            throw ValidationError(fmt::format("action '{}': non-finite outcome", label));
}

double expected_utility(const ActionSpec& action, const UtilityFunction& u) {
    std::vector<double> values(action.outcomes.size());
    for (std::size_t j = 0; j < values.size(); ++j) {
        try {
            values[j] = u(action.outcomes[j]);
        } catch (const EvaluationError& e) {
            throw EvaluationError(fmt::format("action '{}', outcome {} (x = {}): {}", action.label,
                                              j + 1, action.outcomes[j], e.what()));
        }
    }
    return kernels::dot(action.pmf.probs(), values);
}

double outcome_variance(const ActionSpec& action) {
    const auto p = action.pmf.probs();
    const double mean = kernels::dot(p, action.outcomes);
    double acc = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        const double d = action.outcomes[j] - mean;
        acc += p[j] * d * d;
    }
    return acc;
}

ActionSpec scaled_action(const ActionSpec& action, double t, std::string label) {
    std::vector<double> out(action.outcomes);
    for (double& x : out) x *= t;
    return ActionSpec(std::move(label), std::move(out), action.pmf);
}

ActionSpec shifted_action(const ActionSpec& action, double k, std::string label) {
    std::vector<double> out(action.outcomes);
    for (double& x : out) x += k;
    return ActionSpec(std::move(label), std::move(out), action.pmf);
}

// ---- problem ---------------------------------------------------------------

DecisionProblem::DecisionProblem(std::vector<ActionSpec> actions, UtilityFunction utility)
    : actions_(std::move(actions)), utility_(utility) {
    if (actions_.empty()) throw ValidationError("decision problem needs at least one action");
    eu_.reserve(actions_.size());
    var_.reserve(actions_.size());
    for (const auto& a : actions_) {
        eu_.push_back(fracdec::expected_utility(a, utility_));
        var_.push_back(outcome_variance(a));
        max_abs_eu_ = std::max(max_abs_eu_, std::abs(eu_.back()));
        max_var_ = std::max(max_var_, var_.back());
    }
}

void DecisionProblem::check_index(std::size_t i) const {
    if (i >= actions_.size())
        throw LookupError(fmt::format("action index {} out of range (problem has {} actions)", i,
                                      actions_.size()));
}

const ActionSpec& DecisionProblem::action(std::size_t i) const {
    check_index(i);
    return actions_[i];
}

std::size_t DecisionProblem::index_of(std::string_view label) const {
    for (std::size_t i = 0; i < actions_.size(); ++i)
        if (actions_[i].label == label) return i;
    throw LookupError(fmt::format("no action labelled '{}'", label));
}

double DecisionProblem::expected_utility(std::size_t i) const {
    check_index(i);
    return eu_[i];
}

double DecisionProblem::variance(std::size_t i) const {
    check_index(i);
    return var_[i];
}

double DecisionProblem::normalized_expected_utility(std::size_t i) const {
    check_index(i);
    return max_abs_eu_ > 0.0 ? eu_[i] / max_abs_eu_ : 0.0;
}

double DecisionProblem::normalized_variance(std::size_t i) const {
    check_index(i);
    return max_var_ > 0.0 ? var_[i] / max_var_ : 0.0;
}

DecisionProblem DecisionProblem::with_utility(UtilityFunction utility) const {
    return DecisionProblem(actions_, utility);
}

// ---- risk ------------------------------------------------------------------

std::string_view to_string(RiskMeasure m) { return m == RiskMeasure::eu_fe ? "EU-FE" : "EU-FEV"; }

RiskMeasure parse_risk_measure(std::string_view text) {
    std::string t(text);
    for (char& c : t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    std::replace(t.begin(), t.end(), '_', '-');
    if (t == "eu-fe") return RiskMeasure::eu_fe;
    if (t == "eu-fev") return RiskMeasure::eu_fev;
    throw DomainError(fmt::format("unknown risk measure '{}' (expected eu-fe or eu-fev)", text));
}

RiskParams::RiskParams(FractionalOrder alpha_, double lambda_, RiskMeasure measure_,
                       LogBase base_)
    : alpha(alpha_), lambda(lambda_), measure(measure_), base(base_) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw DomainError(fmt::format("risk tradeoff lambda must lie in [0, 1], got {}", lambda));
}

AffineRisk risk_affine(const DecisionProblem& problem, std::size_t action, FractionalOrder alpha,
                       RiskMeasure measure, LogBase base) {
    const double h = ubriaco_entropy(problem.action(action).pmf, alpha, base);
    const double neu = problem.normalized_expected_utility(action);
    if (measure == RiskMeasure::eu_fe) return {h + neu, -neu};
    const double nv = problem.normalized_variance(action);
    return {0.5 * (h + nv) + neu, -neu};
}

double risk_value(const DecisionProblem& problem, std::size_t action, const RiskParams& params) {
    return risk_affine(problem, action, params.alpha, params.measure, params.base).at(params.lambda);
}

std::string_view to_string(Preference p) {
    switch (p) {
        case Preference::first: return "first";
        case Preference::second: return "second";
        case Preference::indifferent: return "indifferent";
    }
    return "unknown";
}

Preference prefer(const DecisionProblem& problem, std::size_t i, std::size_t j,
                  const RiskParams& params) {
    const double ri = risk_value(problem, i, params);
    const double rj = risk_value(problem, j, params);
    if (std::abs(ri - rj) <= preference_tie_eps) return Preference::indifferent;
    return ri < rj ? Preference::first : Preference::second;
}

std::vector<std::size_t> rank_actions(const DecisionProblem& problem, const RiskParams& params) {
    std::vector<double> risk(problem.size());
    for (std::size_t i = 0; i < risk.size(); ++i) risk[i] = risk_value(problem, i, params);
    std::vector<std::size_t> order(problem.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return risk[a] < risk[b]; });
    return order;
}

// ---- lambda partition ------------------------------------------------------

bool LambdaInterval::contains(double lambda) const noexcept {
    const bool above = lo_closed ? lambda >= lo : lambda > lo;
    const bool below = hi_closed ? lambda <= hi : lambda < hi;
    return above && below;
}

std::string LambdaInterval::format(int decimals) const {
    if (lo == hi) return fmt::format("{{{:.{}f}}}", lo, decimals);
    return fmt::format("{}{:.{}f}, {:.{}f}{}", lo_closed ? '[' : '(', lo, decimals, hi, decimals,
                       hi_closed ? ']' : ')');
}

Preference LambdaPartition::at(double lambda) const {
    for (const auto& piece : pieces)
        if (piece.contains(lambda)) return piece.preferred;
    throw DomainError(fmt::format("lambda {} outside [0, 1]", lambda));
}

std::vector<LambdaInterval> LambdaPartition::where(Preference p) const {
    std::vector<LambdaInterval> out;
    for (const auto& piece : pieces)
        if (piece.preferred == p) out.push_back(piece);
    return out;
}

namespace {

Preference sign_to_preference(double diff) {
    if (diff < 0.0) return Preference::first;
    if (diff > 0.0) return Preference::second;
    return Preference::indifferent;
}

}  // namespace

LambdaPartition solve_lambda_partition(const AffineRisk& ri, const AffineRisk& rj) {
    // d(lambda) = r_i - r_j = dm * lambda + dc; i is preferred where d < 0.
    const double dm = ri.slope - rj.slope;
    const double dc = ri.intercept - rj.intercept;
    const double tol = lambda_boundary_tol;
    LambdaPartition out;

    if (std::abs(dm) <= tol) {
        const Preference p = std::abs(dc) <= tol ? Preference::indifferent : sign_to_preference(dc);
        out.pieces.push_back({0.0, 1.0, true, true, p});
        return out;
    }

    const double root = -dc / dm;  // = (c_j - c_i) / (m_i - m_j)
    if (root < -tol || root > 1.0 + tol) {
        out.pieces.push_back({0.0, 1.0, true, true, sign_to_preference(dm * 0.5 + dc)});
        return out;
    }

    const Preference below = sign_to_preference(-dm);  // sign of d just left of the root
    const Preference above = sign_to_preference(dm);
    if (root <= tol) {
        out.crossing = 0.0;
        out.pieces.push_back({0.0, 0.0, true, true, Preference::indifferent});
        out.pieces.push_back({0.0, 1.0, false, true, above});
    } else if (root >= 1.0 - tol) {
        out.crossing = 1.0;
        out.pieces.push_back({0.0, 1.0, true, false, below});
        out.pieces.push_back({1.0, 1.0, true, true, Preference::indifferent});
    } else {
        out.crossing = root;
        out.pieces.push_back({0.0, root, true, false, below});
        out.pieces.push_back({root, root, true, true, Preference::indifferent});
        out.pieces.push_back({root, 1.0, false, true, above});
    }
    return out;
}

LambdaPartition lambda_preference_intervals(const DecisionProblem& problem, std::size_t i,
                                            std::size_t j, FractionalOrder alpha,
                                            RiskMeasure measure, LogBase base) {
    return solve_lambda_partition(risk_affine(problem, i, alpha, measure, base),
                                  risk_affine(problem, j, alpha, measure, base));
}

double scaling_lambda_bound(double eu_ratio, double t) {
    if (!(t > 1.0) || !std::isfinite(t))
        throw DomainError(fmt::format("scaling factor must exceed 1, got {}", t));
    if (!std::isfinite(eu_ratio)) throw DegenerateError("expected-utility ratio is not finite");
    const double denom = 1.5 - 0.5 / (t * t) - eu_ratio;
    if (denom == 0.0) throw DegenerateError("scaling lambda bound has a zero denominator");
    return (1.0 - eu_ratio) / denom;
}

double scaling_lambda_bound(const ActionSpec& base_action, double t, const UtilityFunction& u) {
    if (!(t > 1.0) || !std::isfinite(t))
        throw DomainError(fmt::format("scaling factor must exceed 1, got {}", t));
    const double eu_base = expected_utility(base_action, u);
    const double eu_scaled = expected_utility(scaled_action(base_action, t, "scaled"), u);
    if (eu_scaled == 0.0) throw DegenerateError("E[u(tX)] is zero");
    return scaling_lambda_bound(eu_base / eu_scaled, t);
}

}  // namespace fracdec

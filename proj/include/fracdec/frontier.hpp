#pragma once

// Mean-variance portfolios: moment estimation, minimum-variance weights for a
// target return (long-only by default, via a primal active-set method on the
// KKT system), efficient frontiers and subset-versus-universe comparison.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fracdec/market_data.hpp"

namespace fracdec {

struct AssetMoments {
    std::vector<std::string> labels;
    std::vector<double> mean;
    std::vector<double> cov;  // row-major n x n

    [[nodiscard]] std::size_t size() const noexcept { return mean.size(); }
    [[nodiscard]] double covariance(std::size_t i, std::size_t j) const {
        return cov[i * mean.size() + j];
    }
};

/// Checks sizes, finiteness, symmetry within 1e-12 and eigenvalues >= -1e-10.
/// Throws ValidationError.
void validate(const AssetMoments& m);

/// Builds and validates; labels default to A1, A2, ...
AssetMoments make_moments(std::vector<double> mean, std::vector<double> cov,
                          std::vector<std::string> labels = {});

/// Sample means and covariance with divisor N; `subset` empty means every stock.
/// Throws DataError with fewer than 2 observations, LookupError on unknown labels.
AssetMoments estimate_moments(const ReturnPanel& returns, std::span<const std::string> subset = {});

/// Moments of the listed assets only.
AssetMoments restrict_moments(const AssetMoments& m, std::span<const std::string> subset);

struct SolveOptions {
    bool long_only = true;
    /// Upper bound on active-set iterations; 0 picks 50 n + 100.
    std::size_t max_iterations = 0;
};

struct PortfolioSolution {
    std::vector<double> weights;
    double variance = 0.0;
    double expected_return = 0.0;
    /// Equality-constraint multipliers from the final KKT solve.
    std::vector<double> multipliers;
    /// 2 (S w)_i + multiplier terms; zero on assets held above zero.
    std::vector<double> reduced_gradient;
    std::size_t iterations = 0;
};

/// Minimizes w' S w subject to w' mu = target, sum w = 1 and, when long-only,
/// w >= 0. Throws FeasibilityError when the target is unreachable and
/// SolverError when the KKT system stays singular after a 1e-10 ridge.
PortfolioSolution min_variance_portfolio(const AssetMoments& m, double target_return,
                                         const SolveOptions& options = {});

/// The minimum-variance portfolio with no return target.
PortfolioSolution global_min_variance(const AssetMoments& m, const SolveOptions& options = {});

struct KktReport {
    double budget_residual = 0.0;   // |sum w - 1|
    double return_residual = 0.0;   // |w' mu - target|
    double min_weight = 0.0;
    /// Smallest reduced gradient over assets held at zero (+inf if none).
    double min_reduced_gradient = 0.0;
};

KktReport kkt_report(const AssetMoments& m, const PortfolioSolution& solution,
                     double target_return);

struct FrontierPoint {
    double target_return = 0.0;
    double variance = 0.0;
    std::vector<double> weights;
};

struct Frontier {
    std::vector<std::string> labels;
    std::vector<FrontierPoint> points;
};

/// n_points targets spaced evenly from the global-minimum-variance return up
/// to max mu. When that range is empty (for instance identical assets) the
/// frontier is the single GMV point.
Frontier efficient_frontier(const AssetMoments& m, std::size_t n_points, unsigned threads = 1,
                            const SolveOptions& options = {});

struct ComparisonRow {
    double target_return;
    double var_universe;
    double var_subset;
    double gap;
    double rel_gap;
};

struct FrontierComparison {
    std::vector<ComparisonRow> rows;
    double threshold = 0.05;
    /// Smallest target above which rel_gap stays below the threshold.
    std::optional<double> crossover_return;
    double universe_max_return = 0.0;
    double subset_max_return = 0.0;
    /// Largest negative gap seen (0 if none); negative values beyond -1e-9
    /// would contradict universe dominance.
    double min_gap = 0.0;
};

/// Interpolates the subset frontier linearly onto the universe targets inside
/// the subset's range. Throws RangeError when the ranges do not overlap.
FrontierComparison compare_frontiers(const Frontier& universe, const Frontier& subset,
                                     double threshold = 0.05);

/// target_return,variance,stddev,w_<label>...
std::string frontier_csv(const Frontier& frontier);
/// target_return,var_universe,var_subset,gap,rel_gap
std::string comparison_csv(const FrontierComparison& comparison);

}  // namespace fracdec

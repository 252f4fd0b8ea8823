#pragma once

// Stock risk scores from the EU-FE / EU-FEV formulas, a bootstrapped MLP
// surrogate of those scores, rankings and top-k selection.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fracdec/decision.hpp"
#include "fracdec/market_data.hpp"
#include "fracdec/mlp.hpp"

namespace fracdec {

/// Per-stock score under the given measure:
///   EU-FE  lambda H - (1 - lambda) NEU
///   EU-FEV lambda/2 (H + NV) - (1 - lambda) NEU
std::vector<double> direct_risk_scores(const StockRiskFactors& factors, double lambda,
                                       RiskMeasure measure);

inline constexpr std::size_t feature_count = 5;  // NEU, NV, H_alpha, alpha, lambda

struct FeatureRow {
    std::size_t stock;
    double alpha;
    double lambda;
    double score;
};

/// One row per (stock, lambda) pair with the direct score as target.
struct FeatureTable {
    StockRiskFactors factors;
    RiskMeasure measure = RiskMeasure::eu_fe;
    std::vector<FeatureRow> rows;

    [[nodiscard]] std::array<double, feature_count> features(std::size_t row) const;
    [[nodiscard]] std::array<double, feature_count> features(std::size_t stock, double alpha,
                                                             double lambda) const;
    [[nodiscard]] Dataset dataset() const;
};

/// `lambdas` empty means the grid 0, 0.01, ..., 1.
FeatureTable build_feature_table(const StockRiskFactors& factors, double alpha,
                                 RiskMeasure measure, std::span<const double> lambdas = {});

std::vector<double> lambda_grid(double step = 0.01);

/// Ordered stock labels, rank 1 first, with their scores (non-decreasing).
struct StockRanking {
    std::vector<std::string> stocks;
    std::vector<double> scores;
};

/// Ascending score; equal scores ordered by label.
StockRanking rank_by_score(std::span<const std::string> stocks, std::span<const double> scores);

struct BootstrapConfig {
    std::size_t replicates = 100;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    double lambda_step = 0.05;  // feature-table grid
    TrainConfig train;

    void validate() const;  // throws DomainError
};

struct BootstrapResult {
    std::vector<std::string> stocks;
    std::vector<double> mean;
    std::vector<double> ci_lo;
    std::vector<double> ci_hi;
    std::size_t replicates = 0;
    /// predictions[b][s]
    std::vector<std::vector<double>> predictions;
    std::size_t retried = 0;
};

struct BootstrapOutcome {
    BootstrapResult result;
    StockRanking ranking;
};

/// For each replicate b (seed = config.seed XOR b): resample the feature
/// table with replacement, train an MLP on the resample, predict every stock
/// at (alpha, lambda). A failed replicate is retried once with a derived seed;
/// a second failure throws ReplicateFailure.
BootstrapOutcome bootstrap_rank(const StockRiskFactors& factors, double alpha, double lambda,
                                RiskMeasure measure, const BootstrapConfig& config);
BootstrapOutcome bootstrap_rank(const FeatureTable& table, double alpha, double lambda,
                                const BootstrapConfig& config);

/// Throws RangeError unless 1 <= k <= ranking size.
std::vector<std::string> select_top_k(const StockRanking& ranking, std::size_t k);

/// Linear-interpolation percentile (q in [0, 1]) of unsorted values.
double percentile(std::vector<double> values, double q);
/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> a, std::span<const double> b);

/// stock,neu,nv,h_alpha,alpha,lambda,score
std::string feature_table_csv(const FeatureTable& table);
/// rank,stock,mean_risk,ci_lo,ci_hi
std::string ranking_csv(const BootstrapOutcome& outcome);
/// rank,stock,score for a ranking without intervals.
std::string ranking_csv(const StockRanking& ranking);

}  // namespace fracdec

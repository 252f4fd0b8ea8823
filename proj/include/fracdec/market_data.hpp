#pragma once

// Price panels, log returns, a global equal-width binning of returns, the
// per-stock empirical pmfs it induces, and the per-stock risk factors
// (NEU, NV, H^alpha) used for scoring.

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fracdec/decision.hpp"
#include "fracdec/entropy.hpp"

namespace fracdec {

/// Aligned closing prices; prices[s][t] is stock s on dates[t].
struct PricePanel {
    std::vector<std::string> dates;
    std::vector<std::string> stocks;
    std::vector<std::vector<double>> prices;
    /// Rows removed at load time because some price was missing.
    std::size_t dropped_rows = 0;

    [[nodiscard]] std::size_t length() const noexcept { return dates.size(); }
    [[nodiscard]] std::size_t stock_count() const noexcept { return stocks.size(); }
};

/// Checks the panel invariants: at least one stock, at least two dates,
/// ISO-8601 dates strictly increasing, every price finite and positive,
/// unique labels. Throws IngestionError.
void validate(const PricePanel& panel);

/// Reads `date,S1,S2,...` CSV. Empty or NA cells mark a missing price; such
/// rows are dropped for every stock.
PricePanel parse_prices(std::string_view csv_text);
PricePanel load_prices(const std::filesystem::path& path);

struct ReturnPanel {
    std::vector<std::string> stocks;
    std::vector<std::string> dates;  // date of the closing price ending each period
    std::vector<std::vector<double>> returns;

    [[nodiscard]] std::size_t length() const noexcept {
        return returns.empty() ? 0 : returns.front().size();
    }
    [[nodiscard]] std::size_t stock_count() const noexcept { return stocks.size(); }
    [[nodiscard]] std::size_t index_of(std::string_view stock) const;
};

/// r_t = ln(p_t / p_{t-1}).
ReturnPanel log_returns(const PricePanel& panel);

/// J equal-width bins spanning the pooled returns. Bins are [e_k, e_{k+1})
/// except the last, which is closed.
struct BinGrid {
    double r_min = 0.0;
    double r_max = 0.0;
    std::size_t bins = 0;
    double delta = 0.0;

    [[nodiscard]] double edge(std::size_t k) const;
    /// Throws RangeError outside [r_min, r_max].
    [[nodiscard]] std::size_t bin_of(double r) const;
};

/// Throws DegenerateError when every return is identical, DomainError when
/// bins == 0 or the panel is empty.
BinGrid global_bin_grid(const ReturnPanel& returns, std::size_t bins);
BinGrid make_bin_grid(double r_min, double r_max, std::size_t bins);

ProbVector empirical_pmf(std::span<const double> returns, const BinGrid& grid);

struct StockRiskFactors {
    std::vector<std::string> stocks;
    std::vector<double> neu;
    std::vector<double> nv;
    std::vector<double> h_alpha;

    [[nodiscard]] std::size_t size() const noexcept { return stocks.size(); }
    [[nodiscard]] std::size_t index_of(std::string_view stock) const;
};

enum class VarianceKind { population, sample };

struct FactorOptions {
    UtilityFunction utility = UtilityFunction::s_shaped();
    FractionalOrder alpha{0.4};
    LogBase base = LogBase::natural;
    std::size_t bins = 15;
    VarianceKind variance = VarianceKind::population;
    unsigned threads = 1;
};

StockRiskFactors risk_factors(const ReturnPanel& returns, const FactorOptions& options = {});
StockRiskFactors risk_factors(const PricePanel& panel, const FactorOptions& options = {});

/// Validates externally supplied factors: finite values, |NEU| <= 1, NV in
/// [0, 1], H >= 0, and max NV and max |NEU| equal to 1 within `tolerance`.
/// Throws ValidationError.
void validate(const StockRiskFactors& factors, double tolerance = 1e-3);

/// Reads `stock,neu,nv,h_alpha` CSV and validates it.
StockRiskFactors parse_risk_factors(std::string_view csv_text);
StockRiskFactors load_risk_factors(const std::filesystem::path& path);

std::string risk_factors_csv(const StockRiskFactors& factors);
std::string prices_csv(const PricePanel& panel);
std::string returns_csv(const ReturnPanel& returns);
/// One row per stock: `stock,bin_1,...,bin_J`, plus a header naming bin edges.
std::string pmf_csv(const ReturnPanel& returns, const BinGrid& grid);

}  // namespace fracdec

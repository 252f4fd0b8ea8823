#include "fracdec/market_data.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "fracdec/csv.hpp"
#include "fracdec/errors.hpp"
#include "fracdec/kernels.hpp"
#include "fracdec/parallel.hpp"

namespace fracdec {

namespace {

bool is_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(),
                                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

int to_int(std::string_view s) {
    int v = 0;
    for (char c : s) v = v * 10 + (c - '0');
    return v;
}

// YYYY-MM-DD, optionally followed by 'T' or ' ' and a time part.
bool is_iso_date(std::string_view s) {
    if (s.size() < 10 || s[4] != '-' || s[7] != '-') return false;
    const auto y = s.substr(0, 4), m = s.substr(5, 2), d = s.substr(8, 2);
    if (!is_digits(y) || !is_digits(m) || !is_digits(d)) return false;
    const int month = to_int(m), day = to_int(d), year = to_int(y);
    if (month < 1 || month > 12 || day < 1) return false;
    static constexpr int days[] = {31, 29, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (day > days[month - 1]) return false;
    if (month == 2 && day == 29 && !(year % 4 == 0 && (year % 100 != 0 || year % 400 == 0)))
        return false;
    return s.size() == 10 || s[10] == 'T' || s[10] == ' ';
}

bool is_missing(std::string_view cell) {
    cell = csv::trim(cell);
    return cell.empty() || cell == "NA" || cell == "NaN" || cell == "na" || cell == "nan";
}

std::size_t find_label(const std::vector<std::string>& labels, std::string_view name,
                       std::string_view what) {
    const auto it = std::find(labels.begin(), labels.end(), name);
    if (it == labels.end()) throw LookupError(fmt::format("unknown {} '{}'", what, name));
    return static_cast<std::size_t>(it - labels.begin());
}

void check_unique(const std::vector<std::string>& labels, std::string_view what) {
    std::set<std::string> seen;
    for (const auto& l : labels) {
        if (l.empty()) throw IngestionError(fmt::format("empty {} label", what));
        if (!seen.insert(l).second) throw IngestionError(fmt::format("duplicate {} '{}'", what, l));
    }
}

}  // namespace

void validate(const PricePanel& panel) {
    if (panel.stocks.empty()) throw IngestionError("price panel has no stocks");
    if (panel.prices.size() != panel.stocks.size())
        throw IngestionError("price panel has a series count different from its stock count");
    if (panel.dates.size() < 2)
        throw IngestionError(
            fmt::format("price panel needs at least 2 dates, has {}", panel.dates.size()));
    check_unique(panel.stocks, "stock");
    for (std::size_t t = 0; t < panel.dates.size(); ++t) {
        if (!is_iso_date(panel.dates[t]))
            throw IngestionError(fmt::format("date '{}' is not ISO-8601", panel.dates[t]));
        if (t > 0 && !(panel.dates[t - 1] < panel.dates[t]))
            throw IngestionError(fmt::format("dates not strictly increasing at '{}' after '{}'",
                                             panel.dates[t], panel.dates[t - 1]));
    }
    for (std::size_t s = 0; s < panel.stocks.size(); ++s) {
        const auto& series = panel.prices[s];
        if (series.size() != panel.dates.size())
            throw IngestionError(fmt::format("stock '{}' has {} prices for {} dates",
                                             panel.stocks[s], series.size(), panel.dates.size()));
        for (std::size_t t = 0; t < series.size(); ++t)
            if (!(std::isfinite(series[t]) && series[t] > 0.0))
                throw IngestionError(fmt::format("stock '{}' on {}: price {} is not positive",
                                                 panel.stocks[s], panel.dates[t], series[t]));
    }
}

PricePanel parse_prices(std::string_view csv_text) {
    const csv::Table table = csv::parse(csv_text);
    if (table.header.size() < 2 || csv::trim(table.header[0]) != "date")
        throw IngestionError("price CSV header must be 'date,STOCK1,...'");

    PricePanel panel;
    panel.stocks.assign(table.header.begin() + 1, table.header.end());
    check_unique(panel.stocks, "stock");
    panel.prices.resize(panel.stocks.size());

    std::string previous;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::size_t line = table.line_numbers[r];
        const std::string date(csv::trim(row[0]));
        if (!is_iso_date(date))
            throw IngestionError(fmt::format("row {}: date '{}' is not ISO-8601 (YYYY-MM-DD)",
                                             line, date));
        if (!previous.empty() && !(previous < date))
            throw IngestionError(fmt::format(
                "row {}: date {} does not come after {}", line, date, previous));
        previous = date;

        std::vector<double> values;
        bool missing = false;
        for (std::size_t c = 1; c < row.size(); ++c) {
            if (is_missing(row[c])) {
                missing = true;
                continue;
            }
            const auto v = csv::parse_number(row[c]);
            if (!v)
                throw IngestionError(fmt::format("row {}, stock '{}': '{}' is not a number", line,
                                                 panel.stocks[c - 1], row[c]));
            if (!(*v > 0.0))
                throw IngestionError(fmt::format("row {}, stock '{}': price {} is not positive",
                                                 line, panel.stocks[c - 1], *v));
            values.push_back(*v);
        }
        if (missing) {
            ++panel.dropped_rows;
            continue;
        }
        panel.dates.push_back(date);
        for (std::size_t s = 0; s < values.size(); ++s) panel.prices[s].push_back(values[s]);
    }
    validate(panel);
    return panel;
}

PricePanel load_prices(const std::filesystem::path& path) {
    try {
        return parse_prices(csv::read_text(path));
    } catch (const IngestionError& e) {
        throw IngestionError(fmt::format("{}: {}", path.string(), e.what()));
    }
}

std::size_t ReturnPanel::index_of(std::string_view stock) const {
    return find_label(stocks, stock, "stock");
}

ReturnPanel log_returns(const PricePanel& panel) {
    validate(panel);
    ReturnPanel out;
    out.stocks = panel.stocks;
    out.dates.assign(panel.dates.begin() + 1, panel.dates.end());
    for (const auto& series : panel.prices) {
        std::vector<double> r(series.size() - 1);
        for (std::size_t t = 1; t < series.size(); ++t) r[t - 1] = std::log(series[t] / series[t - 1]);
        out.returns.push_back(std::move(r));
    }
    return out;
}

double BinGrid::edge(std::size_t k) const {
    if (k >= bins) return r_max;
    return r_min + static_cast<double>(k) * delta;
}

std::size_t BinGrid::bin_of(double r) const {
    if (!(r >= r_min && r <= r_max))
        throw RangeError(fmt::format("return {} lies outside the grid [{}, {}]", r, r_min, r_max));
    if (r == r_max) return bins - 1;
    auto k = static_cast<std::size_t>(std::floor((r - r_min) / delta));
    k = std::min(k, bins - 1);
    // floor can land one off next to an edge; settle against the edges proper.
    while (k > 0 && r < edge(k)) --k;
    while (k + 1 < bins && r >= edge(k + 1)) ++k;
    return k;
}

BinGrid make_bin_grid(double r_min, double r_max, std::size_t bins) {
    if (bins == 0) throw DomainError("bin count must be at least 1");
    if (!(std::isfinite(r_min) && std::isfinite(r_max)))
        throw DomainError("grid bounds must be finite");
    if (!(r_min < r_max))
        throw DegenerateError(fmt::format(
            "all returns equal {}; a zero-width grid cannot be binned", r_min));
    return {r_min, r_max, bins, (r_max - r_min) / static_cast<double>(bins)};
}

BinGrid global_bin_grid(const ReturnPanel& returns, std::size_t bins) {
    if (bins == 0) throw DomainError("bin count must be at least 1");
    double lo = INFINITY, hi = -INFINITY;
    std::size_t count = 0;
    for (const auto& series : returns.returns)
        for (double r : series) {
            lo = std::min(lo, r);
            hi = std::max(hi, r);
            ++count;
        }
    if (count == 0) throw DomainError("cannot bin an empty return panel");
    return make_bin_grid(lo, hi, bins);
}

ProbVector empirical_pmf(std::span<const double> returns, const BinGrid& grid) {
    if (returns.empty()) throw DomainError("cannot form a pmf from zero returns");
    std::vector<std::size_t> counts(grid.bins, 0);
    for (double r : returns) ++counts[grid.bin_of(r)];
    std::vector<double> p(grid.bins);
    const double n = static_cast<double>(returns.size());
    for (std::size_t k = 0; k < grid.bins; ++k) p[k] = static_cast<double>(counts[k]) / n;
    return ProbVector(std::move(p));
}

std::size_t StockRiskFactors::index_of(std::string_view stock) const {
    return find_label(stocks, stock, "stock");
}

StockRiskFactors risk_factors(const ReturnPanel& returns, const FactorOptions& options) {
    const std::size_t n = returns.stock_count();
    if (n == 0) throw DomainError("no stocks to score");
    if (returns.length() < 1) throw DomainError("no returns to score");
    if (options.variance == VarianceKind::sample && returns.length() < 2)
        throw DomainError("sample variance needs at least 2 returns");

    const BinGrid grid = global_bin_grid(returns, options.bins);
    std::vector<double> eu(n), var(n), h(n);
    parallel_for(n, options.threads, [&](std::size_t s) {
        const auto& r = returns.returns[s];
        std::vector<double> ur(r.size());
        for (std::size_t t = 0; t < r.size(); ++t) {
            try {
                ur[t] = options.utility(r[t]);
            } catch (const EvaluationError& e) {
                throw EvaluationError(
                    fmt::format("stock '{}', return {}: {}", returns.stocks[s], t + 1, e.what()));
            }
        }
        eu[s] = kernels::sum(ur) / static_cast<double>(ur.size());
        const auto m = kernels::moments(r);
        const double divisor = options.variance == VarianceKind::population
                                   ? static_cast<double>(r.size())
                                   : static_cast<double>(r.size() - 1);
        var[s] = m.sum_sq_dev / divisor;
        h[s] = ubriaco_entropy(empirical_pmf(r, grid), options.alpha, options.base);
    });

    double max_eu = 0.0, max_var = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        max_eu = std::max(max_eu, std::abs(eu[s]));
        max_var = std::max(max_var, var[s]);
    }
    StockRiskFactors f;
    f.stocks = returns.stocks;
    f.h_alpha = std::move(h);
    f.neu.resize(n);
    f.nv.resize(n);
    for (std::size_t s = 0; s < n; ++s) {
        f.neu[s] = max_eu > 0.0 ? eu[s] / max_eu : 0.0;
        f.nv[s] = max_var > 0.0 ? var[s] / max_var : 0.0;
    }
    return f;
}

StockRiskFactors risk_factors(const PricePanel& panel, const FactorOptions& options) {
    return risk_factors(log_returns(panel), options);
}

void validate(const StockRiskFactors& f, double tolerance) {
    const std::size_t n = f.stocks.size();
    if (n == 0) throw ValidationError("risk factors list no stocks");
    if (f.neu.size() != n || f.nv.size() != n || f.h_alpha.size() != n)
        throw ShapeError("risk factor columns differ in length");
    check_unique(f.stocks, "stock");
    double max_neu = 0.0, max_nv = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = f.stocks[i];
        if (!std::isfinite(f.neu[i]) || std::abs(f.neu[i]) > 1.0 + tolerance)
            throw ValidationError(fmt::format("stock '{}': NEU {} is outside [-1, 1]", s, f.neu[i]));
        if (!std::isfinite(f.nv[i]) || f.nv[i] < 0.0 || f.nv[i] > 1.0 + tolerance)
            throw ValidationError(fmt::format("stock '{}': NV {} is outside [0, 1]", s, f.nv[i]));
        if (!std::isfinite(f.h_alpha[i]) || f.h_alpha[i] < 0.0)
            throw ValidationError(fmt::format("stock '{}': H_alpha {} is negative", s, f.h_alpha[i]));
        max_neu = std::max(max_neu, std::abs(f.neu[i]));
        max_nv = std::max(max_nv, f.nv[i]);
    }
    if (std::abs(max_nv - 1.0) > tolerance)
        throw ValidationError(fmt::format("max NV is {}, expected 1 (NV must be normalized by its maximum)", max_nv));
    if (std::abs(max_neu - 1.0) > tolerance)
        throw ValidationError(fmt::format("max |NEU| is {}, expected 1 (NEU must be normalized by its maximum)", max_neu));
}

StockRiskFactors parse_risk_factors(std::string_view csv_text) {
    const csv::Table table = csv::parse(csv_text);
    const auto cs = table.column("stock"), cn = table.column("neu"), cv = table.column("nv"),
               ch = table.column("h_alpha");
    if (!cs || !cn || !cv || !ch)
        throw IngestionError("risk factor CSV header must contain stock,neu,nv,h_alpha");
    StockRiskFactors f;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        auto num = [&](std::size_t c, std::string_view what) {
            const auto v = csv::parse_number(row[c]);
            if (!v)
                throw IngestionError(fmt::format("row {}: {} '{}' is not a number",
                                                 table.line_numbers[r], what, row[c]));
            return *v;
        };
        f.stocks.emplace_back(csv::trim(row[*cs]));
        f.neu.push_back(num(*cn, "neu"));
        f.nv.push_back(num(*cv, "nv"));
        f.h_alpha.push_back(num(*ch, "h_alpha"));
    }
    validate(f);
    return f;
}

StockRiskFactors load_risk_factors(const std::filesystem::path& path) {
    try {
        return parse_risk_factors(csv::read_text(path));
    } catch (const ValidationError& e) {
        throw IngestionError(fmt::format("{}: {}", path.string(), e.what()));
    }
}

std::string risk_factors_csv(const StockRiskFactors& f) {
    std::string out = "stock,neu,nv,h_alpha\n";
    for (std::size_t i = 0; i < f.size(); ++i)
        out += fmt::format("{},{},{},{}\n", csv::escape(f.stocks[i]), csv::format_number(f.neu[i]),
                           csv::format_number(f.nv[i]), csv::format_number(f.h_alpha[i]));
    return out;
}

std::string prices_csv(const PricePanel& panel) {
    std::vector<std::string> header{"date"};
    header.insert(header.end(), panel.stocks.begin(), panel.stocks.end());
    std::string out = csv::join_row(header) + '\n';
    for (std::size_t t = 0; t < panel.length(); ++t) {
        std::vector<std::string> row{panel.dates[t]};
        for (const auto& series : panel.prices) row.push_back(csv::format_number(series[t]));
        out += csv::join_row(row) + '\n';
    }
    return out;
}

std::string returns_csv(const ReturnPanel& returns) {
    std::vector<std::string> header{"date"};
    header.insert(header.end(), returns.stocks.begin(), returns.stocks.end());
    std::string out = csv::join_row(header) + '\n';
    for (std::size_t t = 0; t < returns.length(); ++t) {
        std::vector<std::string> row{t < returns.dates.size() ? returns.dates[t] : std::to_string(t + 1)};
        for (const auto& series : returns.returns) row.push_back(csv::format_number(series[t]));
        out += csv::join_row(row) + '\n';
    }
    return out;
}

std::string pmf_csv(const ReturnPanel& returns, const BinGrid& grid) {
    std::vector<std::string> header{"stock"};
    for (std::size_t k = 0; k < grid.bins; ++k)
        header.push_back(fmt::format("[{:.6g};{:.6g}{}", grid.edge(k), grid.edge(k + 1),
                                     k + 1 == grid.bins ? "]" : ")"));
    std::string out = csv::join_row(header) + '\n';
    for (std::size_t s = 0; s < returns.stock_count(); ++s) {
        const ProbVector p = empirical_pmf(returns.returns[s], grid);
        std::vector<std::string> row{returns.stocks[s]};
        for (double v : p.probs()) row.push_back(csv::format_number(v));
        out += csv::join_row(row) + '\n';
    }
    return out;
}

}  // namespace fracdec

#include "fracdec/selector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "fracdec/csv.hpp"
#include "fracdec/errors.hpp"
#include "fracdec/parallel.hpp"
#include "fracdec/rng.hpp"

namespace fracdec {

namespace {

double score(const StockRiskFactors& f, std::size_t s, double lambda, RiskMeasure measure) {
    const double utility = (1.0 - lambda) * f.neu[s];
    if (measure == RiskMeasure::eu_fe) return lambda * f.h_alpha[s] - utility;
    return 0.5 * lambda * (f.h_alpha[s] + f.nv[s]) - utility;
}

void check_lambda(double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw DomainError(fmt::format("lambda must lie in [0, 1], got {}", lambda));
}

// z-scores with the table's own statistics; constant columns pass through centred.
struct Standardizer {
    std::array<double, feature_count> mean{};
    std::array<double, feature_count> scale{};

    explicit Standardizer(const Dataset& d) {
        const double n = static_cast<double>(d.size());
        for (std::size_t j = 0; j < feature_count; ++j) {
            double m = 0.0;
            for (std::size_t i = 0; i < d.size(); ++i) m += d.x[i * feature_count + j];
            m /= n;
            double v = 0.0;
            for (std::size_t i = 0; i < d.size(); ++i) {
                const double e = d.x[i * feature_count + j] - m;
                v += e * e;
            }
            const double sd = std::sqrt(v / n);
            mean[j] = m;
            scale[j] = sd > 1e-12 ? sd : 1.0;
        }
    }

    void apply(std::span<double> row) const {
        for (std::size_t j = 0; j < feature_count; ++j) row[j] = (row[j] - mean[j]) / scale[j];
    }
};

}  // namespace

std::vector<double> direct_risk_scores(const StockRiskFactors& factors, double lambda,
                                       RiskMeasure measure) {
    check_lambda(lambda);
    std::vector<double> out(factors.size());
    for (std::size_t s = 0; s < factors.size(); ++s) out[s] = score(factors, s, lambda, measure);
    return out;
}

std::array<double, feature_count> FeatureTable::features(std::size_t stock, double alpha,
                                                         double lambda) const {
    return {factors.neu[stock], factors.nv[stock], factors.h_alpha[stock], alpha, lambda};
}

std::array<double, feature_count> FeatureTable::features(std::size_t row) const {
    const auto& r = rows.at(row);
    return features(r.stock, r.alpha, r.lambda);
}

Dataset FeatureTable::dataset() const {
    Dataset d;
    d.features = feature_count;
    d.x.reserve(rows.size() * feature_count);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto f = features(i);
        d.x.insert(d.x.end(), f.begin(), f.end());
        d.y.push_back(rows[i].score);
    }
    return d;
}

std::vector<double> lambda_grid(double step) {
    if (!(step > 0.0 && step <= 1.0)) throw DomainError(fmt::format("lambda step {} is outside (0, 1]", step));
    const auto n = static_cast<std::size_t>(std::llround(1.0 / step));
    std::vector<double> g;
    for (std::size_t i = 0; i <= n; ++i) g.push_back(std::min(1.0, static_cast<double>(i) * step));
    if (g.back() < 1.0) g.push_back(1.0);
    return g;
}

FeatureTable build_feature_table(const StockRiskFactors& factors, double alpha,
                                 RiskMeasure measure, std::span<const double> lambdas) {
    (void)FractionalOrder(alpha);
    std::vector<double> grid(lambdas.begin(), lambdas.end());
    if (grid.empty()) grid = lambda_grid(0.01);
    FeatureTable t{factors, measure, {}};
    for (std::size_t s = 0; s < factors.size(); ++s)
        for (double l : grid) {
            check_lambda(l);
            t.rows.push_back({s, alpha, l, score(factors, s, l, measure)});
        }
    return t;
}

StockRanking rank_by_score(std::span<const std::string> stocks, std::span<const double> scores) {
    if (stocks.size() != scores.size()) throw ShapeError("stock and score counts differ");
    std::vector<std::size_t> order(stocks.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] < scores[b];
        return stocks[a] < stocks[b];
    });
    StockRanking r;
    for (std::size_t i : order) {
        r.stocks.push_back(stocks[i]);
        r.scores.push_back(scores[i]);
    }
    return r;
}

void BootstrapConfig::validate() const {
    if (replicates < 2) throw DomainError("bootstrap needs at least 2 replicates");
    if (threads < 1) throw DomainError("thread count must be at least 1");
    train.validate();
}

namespace {

std::vector<double> run_replicate(const FeatureTable& table, const Dataset& full,
                                  const Standardizer& z, double alpha, double lambda,
                                  const BootstrapConfig& config, std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t n = full.size();
    Dataset sample;
    sample.features = feature_count;
    sample.x.resize(n * feature_count);
    sample.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto src = rng.below(n);
        std::copy_n(full.x.begin() + static_cast<std::ptrdiff_t>(src * feature_count),
                    feature_count, sample.x.begin() + static_cast<std::ptrdiff_t>(i * feature_count));
        sample.y[i] = full.y[src];
    }

    TrainConfig tc = config.train;
    tc.seed = seed;
    const TrainResult trained = train_scg(sample, tc);

    std::vector<double> out(table.factors.size());
    for (std::size_t s = 0; s < out.size(); ++s) {
        auto f = table.features(s, alpha, lambda);
        z.apply(f);
        out[s] = trained.model.predict(f);
        if (!std::isfinite(out[s])) throw ComputationError("non-finite prediction");
    }
    return out;
}

}  // namespace

BootstrapOutcome bootstrap_rank(const FeatureTable& table, double alpha, double lambda,
                                const BootstrapConfig& config) {
    config.validate();
    check_lambda(lambda);
    (void)FractionalOrder(alpha);
    if (table.rows.empty()) throw DataError("feature table is empty");

    Dataset full = table.dataset();
    const Standardizer z(full);
    for (std::size_t i = 0; i < full.size(); ++i)
        z.apply(std::span<double>(full.x.data() + i * feature_count, feature_count));

    const std::size_t B = config.replicates;
    std::vector<std::vector<double>> predictions(B);
    std::vector<char> retried(B, 0);
    parallel_for(B, config.threads, [&](std::size_t b) {
        const std::uint64_t seed = config.seed ^ static_cast<std::uint64_t>(b);
        try {
            predictions[b] = run_replicate(table, full, z, alpha, lambda, config, seed);
        } catch (const ComputationError&) {
            retried[b] = 1;
            try {
                predictions[b] = run_replicate(table, full, z, alpha, lambda, config, mix_seed(seed));
            } catch (const ComputationError& e) {
                throw ReplicateFailure(fmt::format("bootstrap replicate {} failed twice: {}", b, e.what()));
            }
        }
    });

    BootstrapResult res;
    res.stocks = table.factors.stocks;
    res.replicates = B;
    res.retried = static_cast<std::size_t>(std::count(retried.begin(), retried.end(), 1));
    const std::size_t n = res.stocks.size();
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<double> v(B);
        for (std::size_t b = 0; b < B; ++b) v[b] = predictions[b][s];
        const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(B);
        // A percentile interval can miss the mean under heavy skew; widen to keep it inside.
        res.mean.push_back(m);
        res.ci_lo.push_back(std::min(m, percentile(v, 0.025)));
        res.ci_hi.push_back(std::max(m, percentile(std::move(v), 0.975)));
    }
    res.predictions = std::move(predictions);

    BootstrapOutcome out;
    out.ranking = rank_by_score(res.stocks, res.mean);
    out.result = std::move(res);
    return out;
}

BootstrapOutcome bootstrap_rank(const StockRiskFactors& factors, double alpha, double lambda,
                                RiskMeasure measure, const BootstrapConfig& config) {
    const auto grid = lambda_grid(config.lambda_step);
    return bootstrap_rank(build_feature_table(factors, alpha, measure, grid), alpha, lambda, config);
}

std::vector<std::string> select_top_k(const StockRanking& ranking, std::size_t k) {
    if (k < 1 || k > ranking.stocks.size())
        throw RangeError(fmt::format("k = {} is outside [1, {}]", k, ranking.stocks.size()));
    return {ranking.stocks.begin(), ranking.stocks.begin() + static_cast<std::ptrdiff_t>(k)};
}

double percentile(std::vector<double> values, double q) {
    if (values.empty()) throw DomainError("percentile of an empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw DomainError("percentile level must lie in [0, 1]");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double spearman(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2) throw ShapeError("spearman needs two equal-length samples of size >= 2");
    const auto ra = average_ranks(a), rb = average_ranks(b);
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
    const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        sab += (ra[i] - ma) * (rb[i] - mb);
        saa += (ra[i] - ma) * (ra[i] - ma);
        sbb += (rb[i] - mb) * (rb[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) throw DegenerateError("spearman correlation of a constant sample");
    return sab / std::sqrt(saa * sbb);
}

std::string feature_table_csv(const FeatureTable& table) {
    std::string out = "stock,neu,nv,h_alpha,alpha,lambda,score\n";
    const auto& f = table.factors;
    for (const auto& r : table.rows)
        out += fmt::format("{},{},{},{},{},{},{}\n", csv::escape(f.stocks[r.stock]),
                           csv::format_number(f.neu[r.stock]), csv::format_number(f.nv[r.stock]),
                           csv::format_number(f.h_alpha[r.stock]), csv::format_number(r.alpha),
                           csv::format_number(r.lambda), csv::format_number(r.score));
    return out;
}

std::string ranking_csv(const BootstrapOutcome& outcome) {
    const auto& res = outcome.result;
    std::string out = "rank,stock,mean_risk,ci_lo,ci_hi\n";
    for (std::size_t r = 0; r < outcome.ranking.stocks.size(); ++r) {
        const auto& name = outcome.ranking.stocks[r];
        const auto s = static_cast<std::size_t>(
            std::find(res.stocks.begin(), res.stocks.end(), name) - res.stocks.begin());
        out += fmt::format("{},{},{:.6f},{:.6f},{:.6f}\n", r + 1, csv::escape(name), res.mean[s],
                           res.ci_lo[s], res.ci_hi[s]);
    }
    return out;
}

std::string ranking_csv(const StockRanking& ranking) {
    std::string out = "rank,stock,score\n";
    for (std::size_t r = 0; r < ranking.stocks.size(); ++r)
        out += fmt::format("{},{},{:.6f}\n", r + 1, csv::escape(ranking.stocks[r]), ranking.scores[r]);
    return out;
}

}  // namespace fracdec

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "fracdec/errors.hpp"
#include "fracdec/selector.hpp"

using namespace fracdec;
using doctest::Approx;

namespace {

StockRiskFactors psi20() { return load_risk_factors(std::string(FRACDEC_DATA) + "/psi20_factors.csv"); }

BootstrapConfig quick(std::size_t b = 10) {
    BootstrapConfig c;
    c.replicates = b;
    c.seed = 7;
    c.lambda_step = 0.1;
    c.train.max_epochs = 150;
    return c;
}

}  // namespace

TEST_SUITE("selector") {

TEST_CASE("direct score examples") {
    const auto f = psi20();
    const auto m6 = f.index_of("M6"), m8 = f.index_of("M8");
    CHECK(direct_risk_scores(f, 0.0, RiskMeasure::eu_fe)[m6] == Approx(-1.0));
    const auto at1 = direct_risk_scores(f, 1.0, RiskMeasure::eu_fe);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(at1[i] == f.h_alpha[i]);
    CHECK(direct_risk_scores(f, 1.0, RiskMeasure::eu_fev)[m8] == Approx((0.983342 + 1.0) / 2).epsilon(1e-12));
    CHECK(direct_risk_scores(f, 1.0, RiskMeasure::eu_fev)[m8] == Approx(0.9917).epsilon(1e-4));
    CHECK_THROWS_AS(direct_risk_scores(f, 1.5, RiskMeasure::eu_fe), DomainError);
}

TEST_CASE("lambda extremes order the direct ranking") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto f = fixtures::synthetic_factors(seed);
        const auto r0 = rank_by_score(f.stocks, direct_risk_scores(f, 0.0, RiskMeasure::eu_fe));
        for (std::size_t k = 1; k < r0.stocks.size(); ++k)
            CHECK(f.neu[f.index_of(r0.stocks[k - 1])] >= f.neu[f.index_of(r0.stocks[k])]);
        const auto r1 = rank_by_score(f.stocks, direct_risk_scores(f, 1.0, RiskMeasure::eu_fe));
        for (std::size_t k = 1; k < r1.stocks.size(); ++k)
            CHECK(f.h_alpha[f.index_of(r1.stocks[k - 1])] <= f.h_alpha[f.index_of(r1.stocks[k])]);
    }
}

TEST_CASE("ranking ties break by label") {
    const std::vector<std::string> s{"b", "a", "c"};
    const std::vector<double> v{1.0, 1.0, 0.5};
    const auto r = rank_by_score(s, v);
    CHECK(r.stocks == std::vector<std::string>{"c", "a", "b"});
    CHECK(std::is_sorted(r.scores.begin(), r.scores.end()));
}

TEST_CASE("top-k selection") {
    const auto f = psi20();
    const auto r = rank_by_score(f.stocks, direct_risk_scores(f, 0.5, RiskMeasure::eu_fe));
    CHECK(select_top_k(r, 15).size() == 15);
    CHECK(select_top_k(r, 1) == std::vector<std::string>{r.stocks[0]});
    CHECK_THROWS_AS(select_top_k(r, 0), RangeError);
    CHECK_THROWS_AS(select_top_k(r, 16), RangeError);

    // the published mean risks, ranked, give the published top seven
    const std::vector<std::string> stocks{"M6", "M5", "M9", "M3", "M13", "M1", "M10", "M15",
                                          "M4", "M8", "M14", "M12", "M7", "M2", "M11"};
    const std::vector<double> means{0.1152, 0.3509, 0.5096, 0.5449, 0.6118, 0.7616, 0.7751, 0.8042,
                                    0.8209, 0.8578, 0.8762, 0.8806, 0.9198, 0.9601, 0.9780};
    CHECK(select_top_k(rank_by_score(stocks, means), 7) ==
          std::vector<std::string>{"M6", "M5", "M9", "M3", "M13", "M1", "M10"});
}

TEST_CASE("feature table") {
    const auto f = psi20();
    const auto t = build_feature_table(f, 0.4, RiskMeasure::eu_fev);
    CHECK(t.rows.size() == 15 * 101);
    const auto d = t.dataset();
    CHECK(d.features == feature_count);
    CHECK(d.size() == t.rows.size());
    const auto x = t.features(0);
    CHECK(x[0] == f.neu[t.rows[0].stock]);
    CHECK(x[3] == 0.4);
    CHECK(lambda_grid(0.25) == std::vector<double>{0, 0.25, 0.5, 0.75, 1.0});
    CHECK(lambda_grid(0.01).size() == 101);
    CHECK(feature_table_csv(t).rfind("stock,neu,nv,h_alpha,alpha,lambda,score\n", 0) == 0);
}

TEST_CASE("percentile and spearman") {
    CHECK(percentile({1, 2, 3, 4, 5}, 0.5) == 3.0);
    CHECK(percentile({1, 2, 3, 4}, 0.5) == 2.5);
    CHECK(percentile({5, 1}, 0.0) == 1.0);
    CHECK(percentile({5, 1}, 1.0) == 5.0);
    CHECK(percentile({0, 10}, 0.025) == Approx(0.25));
    const std::vector<double> a{1, 2, 3, 4}, b{10, 20, 30, 40}, c{4, 3, 2, 1}, t{1, 1, 2, 3};
    CHECK(spearman(a, b) == Approx(1.0));
    CHECK(spearman(a, c) == Approx(-1.0));
    CHECK(spearman(t, a) == Approx(0.9486833).epsilon(1e-6));
}

TEST_CASE("bootstrap contracts") {
    const auto f = fixtures::synthetic_factors();
    const auto out = bootstrap_rank(f, 0.4, 0.5, RiskMeasure::eu_fe, quick());
    const auto& r = out.result;
    CHECK(r.replicates == 10);
    CHECK(r.predictions.size() == 10);
    CHECK(out.ranking.stocks.size() == 15);
    CHECK(std::is_sorted(out.ranking.scores.begin(), out.ranking.scores.end()));
    for (std::size_t s = 0; s < r.stocks.size(); ++s) {
        CHECK(r.ci_lo[s] <= r.mean[s]);
        CHECK(r.mean[s] <= r.ci_hi[s]);
    }
    const auto direct = direct_risk_scores(f, 0.5, RiskMeasure::eu_fe);
    CHECK(spearman(r.mean, direct) >= 0.9);
    for (std::size_t s = 0; s < r.stocks.size(); ++s) CHECK(std::abs(r.mean[s] - direct[s]) <= 0.02);

    const auto csv = ranking_csv(out);
    CHECK(csv.rfind("rank,stock,mean_risk,ci_lo,ci_hi\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 16);
}

TEST_CASE("bootstrap is deterministic and thread-count independent") {
    const auto f = fixtures::synthetic_factors(5);
    auto cfg = quick(6);
    const auto a = ranking_csv(bootstrap_rank(f, 0.4, 0.3, RiskMeasure::eu_fev, cfg));
    const auto b = ranking_csv(bootstrap_rank(f, 0.4, 0.3, RiskMeasure::eu_fev, cfg));
    cfg.threads = 3;
    const auto c = ranking_csv(bootstrap_rank(f, 0.4, 0.3, RiskMeasure::eu_fev, cfg));
    CHECK(a == b);
    CHECK(a == c);
    cfg.seed = 8;
    CHECK(ranking_csv(bootstrap_rank(f, 0.4, 0.3, RiskMeasure::eu_fev, cfg)) != a);
}

TEST_CASE("identical replicate predictions give zero-width intervals") {
    auto t = build_feature_table(fixtures::synthetic_factors(), 0.4, RiskMeasure::eu_fe, lambda_grid(0.1));
    for (auto& row : t.rows) row.score = 0.0;
    auto cfg = quick(5);
    cfg.train.zero_output_layer = true;
    cfg.train.max_epochs = 5;
    const auto out = bootstrap_rank(t, 0.4, 0.5, cfg);
    for (std::size_t s = 0; s < out.result.stocks.size(); ++s) {
        CHECK(out.result.ci_lo[s] == out.result.mean[s]);
        CHECK(out.result.ci_hi[s] == out.result.mean[s]);
    }
}

TEST_CASE("bootstrap config validation") {
    auto cfg = quick();
    cfg.replicates = 1;
    CHECK_THROWS_AS(bootstrap_rank(fixtures::synthetic_factors(), 0.4, 0.5, RiskMeasure::eu_fe, cfg), DomainError);
    CHECK_THROWS_AS(bootstrap_rank(fixtures::synthetic_factors(), 0.0, 0.5, RiskMeasure::eu_fe, quick()), DomainError);
}

}

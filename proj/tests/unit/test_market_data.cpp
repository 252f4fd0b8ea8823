#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fracdec/errors.hpp"
#include "fracdec/market_data.hpp"
#include "fracdec/rng.hpp"

using namespace fracdec;
using doctest::Approx;

namespace {

const std::string data_dir = FRACDEC_TEST_DATA;

bool message_has(const std::exception& e, const std::string& needle) {
    return std::string(e.what()).find(needle) != std::string::npos;
}

}  // namespace

TEST_SUITE("market_data") {

TEST_CASE("price ingestion") {
    const auto p = parse_prices("date,A\n2020-01-01,100\n2020-01-02,105\n");
    CHECK(p.length() == 2);
    CHECK(p.stocks == std::vector<std::string>{"A"});
    CHECK(p.prices[0][1] == 105.0);

    try {
        (void)parse_prices("date,A,B\n2020-01-01,100,3\n2020-01-02,0,4\n");
        FAIL("expected IngestionError");
    } catch (const IngestionError& e) {
        CHECK(message_has(e, "row 3"));
        CHECK(message_has(e, "'A'"));
    }
    CHECK_THROWS_AS(parse_prices("day,A\n2020-01-01,1\n2020-01-02,2\n"), IngestionError);
    CHECK_THROWS_AS(parse_prices("date,A\n2020-01-02,1\n2020-01-01,2\n"), IngestionError);
    CHECK_THROWS_AS(parse_prices("date,A\n2020-01-01,1\n2020-01-01,2\n"), IngestionError);
    CHECK_THROWS_AS(parse_prices("date,A\n2020-13-01,1\n2020-12-02,2\n"), IngestionError);
    CHECK_THROWS_AS(parse_prices("date,A\n2020-01-01,abc\n2020-01-02,2\n"), IngestionError);
    CHECK_THROWS_AS(parse_prices("date,A\n2020-01-01,1,2\n2020-01-02,2\n"), IngestionError);
    CHECK_THROWS_AS(parse_prices("date,A\n2020-01-01,-1\n2020-01-02,2\n"), IngestionError);
    CHECK_THROWS_AS(parse_prices("date,A,A\n2020-01-01,1,1\n2020-01-02,2,2\n"), IngestionError);
    CHECK_THROWS_AS(parse_prices("date,A\n2020-01-01,1\n"), IngestionError);
    CHECK_THROWS_AS(load_prices(data_dir + "/does_not_exist.csv"), IngestionError);
}

TEST_CASE("missing prices drop the whole row") {
    const auto p = parse_prices("date,A,B\r\n2020-01-01,1,2\r\n2020-01-02,NA,3\r\n2020-01-03,2,\r\n2020-01-06,3,4\r\n");
    CHECK(p.length() == 2);
    CHECK(p.dropped_rows == 2);
    CHECK(p.dates == std::vector<std::string>{"2020-01-01", "2020-01-06"});
}

TEST_CASE("the 512-row fixture loads") {
    const auto p = load_prices(data_dir + "/synthetic_prices.csv");
    CHECK(p.stock_count() == 15);
    CHECK(p.length() == 512);
    for (const auto& s : p.prices) CHECK(s.size() == 512);
    const auto r = log_returns(p);
    CHECK(r.length() == 511);
}

TEST_CASE("log returns") {
    const auto r = log_returns(parse_prices("date,A\n2020-01-01,100\n2020-01-02,105\n"));
    REQUIRE(r.length() == 1);
    CHECK(r.returns[0][0] == Approx(static_cast<double>(std::log(1.05L))).epsilon(1e-14));
    CHECK(r.returns[0][0] == Approx(0.04879).epsilon(1e-4));
    const auto c = log_returns(parse_prices("date,A\n2020-01-01,50\n2020-01-02,50\n2020-01-03,50\n"));
    CHECK(c.returns[0] == std::vector<double>{0.0, 0.0});
}

TEST_CASE("returns reconstruct prices") {
    const auto p = load_prices(data_dir + "/synthetic_prices.csv");
    const auto r = log_returns(p);
    for (std::size_t s = 0; s < p.stock_count(); ++s) {
        double acc = 0.0;
        for (std::size_t t = 0; t < r.length(); ++t) {
            acc += r.returns[s][t];
            const double rebuilt = p.prices[s][0] * std::exp(acc);
            CHECK(std::abs(rebuilt / p.prices[s][t + 1] - 1.0) <= 1e-9);
        }
    }
}

TEST_CASE("bin grids") {
    const auto g = make_bin_grid(-0.0929, 0.0751, 15);
    CHECK(g.delta == Approx(0.0112).epsilon(1e-9));
    const auto g2 = make_bin_grid(0.0, 1.0, 2);
    CHECK(g2.bin_of(0.0) == 0);
    CHECK(g2.bin_of(0.4999) == 0);
    CHECK(g2.bin_of(0.5) == 1);
    CHECK(g2.bin_of(1.0) == 1);
    CHECK_THROWS_AS((void)g2.bin_of(1.01), RangeError);
    CHECK_THROWS_AS((void)g2.bin_of(-0.01), RangeError);
    CHECK_THROWS_AS(make_bin_grid(0.3, 0.3, 4), DegenerateError);
    CHECK_THROWS_AS(make_bin_grid(0.0, 1.0, 0), DomainError);

    ReturnPanel flat{{"A"}, {"d1", "d2", "d3"}, {{0.02, 0.02, 0.02}}};
    CHECK_THROWS_AS(global_bin_grid(flat, 15), DegenerateError);
}

TEST_CASE("edges land in the right bin") {
    const auto g = make_bin_grid(-0.0929, 0.0751, 15);
    for (std::size_t k = 0; k < 15; ++k) CHECK(g.bin_of(g.edge(k)) == k);
    CHECK(g.bin_of(0.0751) == 14);
}

TEST_CASE("empirical pmfs") {
    const auto g = make_bin_grid(0.0, 1.0, 2);
    const std::vector<double> r{0.1, 0.1, 0.9};
    const auto p = empirical_pmf(r, g);
    CHECK(p[0] == Approx(2.0 / 3.0));
    CHECK(p[1] == Approx(1.0 / 3.0));
    const std::vector<double> same{0.2, 0.3};
    CHECK(empirical_pmf(same, g)[0] == 1.0);

    const auto g15 = make_bin_grid(0.0, 15.0, 15);
    std::vector<double> uniform;
    for (int k = 0; k < 15; ++k)
        for (int c = 0; c < 4; ++c) uniform.push_back(k + 0.25 * c);
    const auto pu = empirical_pmf(uniform, g15);
    for (std::size_t k = 0; k < 15; ++k) CHECK(pu[k] == Approx(1.0 / 15.0));
    CHECK_THROWS_AS(empirical_pmf(std::vector<double>{2.0}, g), RangeError);
}

TEST_CASE("pmfs over the fixture partition every return") {
    const auto r = log_returns(load_prices(data_dir + "/synthetic_prices.csv"));
    for (std::size_t j : {1u, 5u, 15u, 40u}) {
        const auto g = global_bin_grid(r, j);
        for (std::size_t s = 0; s < r.stock_count(); ++s) {
            const auto p = empirical_pmf(r.returns[s], g);
            CHECK(p.size() == j);
            CHECK(std::abs(std::accumulate(p.probs().begin(), p.probs().end(), 0.0) - 1.0) <= 1e-12);
            std::size_t counted = 0;
            for (double q : p.probs()) counted += static_cast<std::size_t>(std::llround(q * r.length()));
            CHECK(counted == r.length());
        }
    }
}

TEST_CASE("risk factors on a hand-checked fixture") {
    const auto panel = parse_prices(
        "date,A,B,C\n"
        "2020-01-01,10,20,30\n"
        "2020-01-02,11,19,30\n"
        "2020-01-03,12,21,31\n"
        "2020-01-06,11.5,22,29\n"
        "2020-01-07,12.5,20,30\n");
    const auto returns = log_returns(panel);
    FactorOptions opt;
    const auto f = risk_factors(returns, opt);

    std::vector<long double> eu(3), var(3);
    for (std::size_t s = 0; s < 3; ++s) {
        long double m = 0, e = 0;
        const auto& r = returns.returns[s];
        for (double x : r) {
            m += x;
            e += x >= 0 ? std::log1p(static_cast<long double>(x)) : -std::log1p(-static_cast<long double>(x));
        }
        m /= r.size();
        e /= r.size();
        long double v = 0;
        for (double x : r) v += (x - m) * (x - m);
        eu[s] = e;
        var[s] = v / r.size();
    }
    long double me = 0, mv = 0;
    for (std::size_t s = 0; s < 3; ++s) {
        me = std::max(me, std::abs(eu[s]));
        mv = std::max(mv, var[s]);
    }
    for (std::size_t s = 0; s < 3; ++s) {
        CHECK(std::abs(f.neu[s] - static_cast<double>(eu[s] / me)) <= 1e-9);
        CHECK(std::abs(f.nv[s] - static_cast<double>(var[s] / mv)) <= 1e-9);
    }
    const auto g = global_bin_grid(returns, 15);
    CHECK(f.h_alpha[1] == Approx(ubriaco_entropy(empirical_pmf(returns.returns[1], g), FractionalOrder(0.4))));
}

TEST_CASE("risk factor normalizers and invariants") {
    const auto r = log_returns(load_prices(data_dir + "/synthetic_prices.csv"));
    const auto f = risk_factors(r);
    double max_nv = 0, max_neu = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        max_nv = std::max(max_nv, f.nv[i]);
        max_neu = std::max(max_neu, std::abs(f.neu[i]));
    }
    CHECK(max_nv == 1.0);
    CHECK(max_neu == 1.0);
    CHECK_NOTHROW(validate(f));

    // a copy of the max-variance stock also gets NV = 1
    const auto argmax = static_cast<std::size_t>(std::max_element(f.nv.begin(), f.nv.end()) - f.nv.begin());
    ReturnPanel twin = r;
    twin.stocks.push_back("TWIN");
    twin.returns.push_back(r.returns[argmax]);
    const auto ft = risk_factors(twin);
    CHECK(ft.nv.back() == 1.0);

    // zero returns have zero expected utility
    ReturnPanel zero{{"Z", "W"}, {"a", "b", "c"}, {{0.0, 0.0, 0.0}, {0.01, -0.02, 0.03}}};
    CHECK(risk_factors(zero).neu[0] == 0.0);

    // shifting one stock's returns leaves its variance unchanged
    ReturnPanel shifted = r;
    for (auto& x : shifted.returns[3]) x += 0.001;
    const auto fs = risk_factors(shifted);
    CHECK(fs.nv[3] * 1.0 == Approx(f.nv[3]).epsilon(1e-9));

    // threads give identical results
    FactorOptions par;
    par.threads = 4;
    const auto fp = risk_factors(r, par);
    CHECK(fp.neu == f.neu);
    CHECK(fp.nv == f.nv);
    CHECK(fp.h_alpha == f.h_alpha);

    FactorOptions sample;
    sample.variance = VarianceKind::sample;
    const auto fsv = risk_factors(r, sample);  // the N/(N-1) factor cancels in the ratio
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(fsv.nv[i] == Approx(f.nv[i]).epsilon(1e-12));
}

TEST_CASE("published factor table") {
    const auto f = load_risk_factors(std::string(FRACDEC_DATA) + "/psi20_factors.csv");
    REQUIRE(f.size() == 15);
    const auto m6 = f.index_of("M6");
    CHECK(f.neu[m6] == 1.0);
    CHECK(f.nv[m6] == 0.3499);
    CHECK(f.h_alpha[m6] == 1.161922);
    CHECK(f.nv[f.index_of("M8")] == 1.0);
    CHECK_THROWS_AS(parse_risk_factors("stock,neu,nv,h_alpha\nA,1,0.9,1.0\nB,0.5,0.2,1.0\n"), ValidationError);
    CHECK_THROWS_AS(parse_risk_factors("stock,neu,nv\nA,1,1\n"), IngestionError);
    CHECK_THROWS_AS((void)f.index_of("M99"), LookupError);
    const auto again = parse_risk_factors(risk_factors_csv(f));
    CHECK(again.neu == f.neu);
    CHECK(again.h_alpha == f.h_alpha);
}

TEST_CASE("csv writers") {
    const auto p = parse_prices("date,A,B\n2020-01-01,1,2\n2020-01-02,1.5,2.5\n");
    CHECK(prices_csv(p).rfind("date,A,B\n", 0) == 0);
    const auto r = log_returns(p);
    CHECK(returns_csv(r).rfind("date,A,B\n", 0) == 0);
    const auto g = global_bin_grid(r, 3);
    const auto pmf = pmf_csv(r, g);
    CHECK(pmf.rfind("stock,", 0) == 0);
    CHECK(std::count(pmf.begin(), pmf.end(), '\n') == 3);
}

}

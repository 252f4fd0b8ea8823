#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "fracdec/entropy.hpp"
#include "fracdec/errors.hpp"
#include "fracdec/rng.hpp"

using namespace fracdec;
using doctest::Approx;

namespace {

const FractionalOrder a01{0.1}, a04{0.4}, a05{0.5}, a07{0.7}, a1{1.0};

// Extended-precision reference for p (-ln p)^alpha.
long double term_ref(long double p, long double alpha) {
    if (p == 0.0L || p == 1.0L) return 0.0L;
    return p * std::pow(-std::log(p), alpha);
}

ProbVector random_pmf(Rng& rng, std::size_t n) {
    std::vector<double> w(n);
    for (auto& x : w) x = rng.uniform() + 1e-3;
    return ProbVector::normalize(std::move(w));
}

}  // namespace

TEST_SUITE("entropy") {

TEST_CASE("fractional order domain") {
    CHECK_THROWS_AS(FractionalOrder(0.0), DomainError);
    CHECK_THROWS_AS(FractionalOrder(-0.1), DomainError);
    CHECK_THROWS_AS(FractionalOrder(1.0000001), DomainError);
    CHECK_THROWS_AS(FractionalOrder(std::nan("")), DomainError);
    CHECK(FractionalOrder(1.0).is_shannon());
}

TEST_CASE("pmf validation") {
    CHECK_THROWS_AS(ProbVector({}), ValidationError);
    CHECK_THROWS_AS(ProbVector({0.5, 0.6}), ValidationError);
    CHECK_THROWS_AS(ProbVector({1.2, -0.2}), ValidationError);
    CHECK_NOTHROW(ProbVector({0.5, 0.5 + 5e-10}));
    const auto p = ProbVector::normalize({1, 3});
    CHECK(p[0] == 0.25);
    CHECK_THROWS_AS(ProbVector::normalize({0, 0}), ValidationError);
    CHECK_THROWS_AS(ProbVector::normalize({1, -1}), ValidationError);
}

TEST_CASE("info gain examples") {
    CHECK(info_gain(1.0, a04) == 0.0);
    CHECK(info_gain(1.0, a1) == 0.0);
    CHECK(info_gain(std::exp(-1.0), a04) == Approx(1.0).epsilon(1e-12));
    CHECK(info_gain(std::exp(-1.0), a01) == Approx(1.0).epsilon(1e-12));
    CHECK(info_gain(0.5, a05) == Approx(static_cast<double>(std::sqrt(std::log(2.0L)))).epsilon(1e-12));
    CHECK(info_gain(0.5, a05) == Approx(0.8326).epsilon(1e-4));
    CHECK_THROWS_AS(info_gain(0.0, a04), DomainError);
    CHECK_THROWS_AS(info_gain(1.5, a04), DomainError);
}

TEST_CASE("elasticity examples") {
    CHECK(elasticity(std::exp(-1.0), a07) == Approx(0.7).epsilon(1e-12));
    CHECK(elasticity(std::exp(-2.0), a05) == Approx(0.25).epsilon(1e-12));
    CHECK(elasticity(0.9, a04) == Approx(static_cast<double>(0.4L / -std::log(0.9L))).epsilon(1e-12));
    CHECK(elasticity(0.9, a04) == Approx(3.7965).epsilon(1e-4));
    CHECK_THROWS_AS(elasticity(1.0, a04), DomainError);
    CHECK_THROWS_AS(elasticity(0.0, a04), DomainError);
}

TEST_CASE("entropy term examples") {
    CHECK(entropy_term(0.0, a04) == 0.0);
    CHECK(entropy_term(1.0, a04) == 0.0);
    CHECK(entropy_term(0.5, a1) == Approx(0.3466).epsilon(1e-4));
    CHECK(entropy_term(0.5, a1) == Approx(static_cast<double>(term_ref(0.5L, 1.0L))).epsilon(1e-13));
    CHECK_THROWS_AS(entropy_term(-0.1, a04), DomainError);
    CHECK_THROWS_AS(entropy_term(1.1, a04), DomainError);
}

TEST_CASE("entropy examples") {
    CHECK(ubriaco_entropy(ProbVector({0.8, 0.2}), a04) == Approx(0.68).epsilon(0.005 / 0.68));
    CHECK(ubriaco_entropy(ProbVector({1.0}), a04) == 0.0);
    CHECK(ubriaco_entropy(ProbVector({0.5, 0.04, 0.2, 0.06, 0.2}), a01, LogBase::ten) ==
          Approx(0.9319).epsilon(0.001 / 0.9319));
    CHECK(shannon_entropy(ProbVector({0.5, 0.5})) == Approx(0.6931).epsilon(1e-4));
    CHECK(std::abs(shannon_entropy(ProbVector({0.8, 0.2})) - 0.50) <= 0.005);
    CHECK(std::abs(shannon_entropy(ProbVector({0.89, 0.1, 0.01})) - 0.38) <= 0.005);
}

TEST_CASE("binomial entropy examples") {
    CHECK(binomial_entropy(0.0, a04) == 0.0);
    CHECK(binomial_entropy(0.5, a1) == Approx(std::log(2.0)).epsilon(1e-12));
    const double ref = static_cast<double>(term_ref(0.99L, 0.4L) + term_ref(0.01L, 0.4L));
    CHECK(binomial_entropy(0.99, a04) == Approx(ref).epsilon(1e-12));
    CHECK(binomial_entropy(0.99, a04) == Approx(0.1757).epsilon(1e-3));
    CHECK_THROWS_AS(binomial_entropy(1.5, a04), DomainError);
}

TEST_CASE("crossing threshold") {
    CHECK(crossing_threshold(LogBase::natural) == Approx(0.3679).epsilon(1e-4));
    CHECK(crossing_threshold(LogBase::ten) == Approx(0.1).epsilon(1e-12));
    CHECK(entropy_term(0.2, a04) == Approx(0.2419).epsilon(1e-3));
    CHECK(entropy_term(0.2, a01) == Approx(0.2097).epsilon(1e-3));
    CHECK(entropy_term(0.2, a04) > entropy_term(0.2, a01));
}

TEST_CASE("log base parsing") {
    CHECK(parse_log_base("natural") == LogBase::natural);
    CHECK(parse_log_base("ln") == LogBase::natural);
    CHECK(parse_log_base("10") == LogBase::ten);
    CHECK(parse_log_base("ten") == LogBase::ten);
    CHECK_THROWS_AS(parse_log_base("2"), DomainError);
}

TEST_CASE("permutation invariance is exact") {
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = random_pmf(rng, 2 + rng.below(8));
        std::vector<double> v(p.probs().begin(), p.probs().end());
        const FractionalOrder alpha(rng.uniform(0.01, 1.0));
        const double h = ubriaco_entropy(p, alpha);
        std::sort(v.begin(), v.end());
        do {
            CHECK(ubriaco_entropy(ProbVector(v), alpha) == h);
        } while (v.size() <= 5 && std::next_permutation(v.begin(), v.end()));
        rng.shuffle(v);
        CHECK(ubriaco_entropy(ProbVector(v), alpha, LogBase::ten) == ubriaco_entropy(p, alpha, LogBase::ten));
    }
}

TEST_CASE("alpha = 1 reduces to Shannon") {
    Rng rng(4);
    for (int trial = 0; trial < 500; ++trial) {
        const auto p = random_pmf(rng, 1 + rng.below(20));
        CHECK(std::abs(ubriaco_entropy(p, a1) - shannon_entropy(p)) <= 1e-12);
        CHECK(std::abs(ubriaco_entropy(p, a1, LogBase::ten) - shannon_entropy(p, LogBase::ten)) <= 1e-12);
    }
}

TEST_CASE("order monotonicity on both sides of the crossing point") {
    for (LogBase base : {LogBase::natural, LogBase::ten}) {
        const double ps = crossing_threshold(base);
        for (int i = 1; i < 200; ++i) {
            const double below = ps * i / 200.0;
            const double above = ps + (1.0 - ps) * i / 200.0;
            for (double x1 = 0.05; x1 < 1.0; x1 += 0.1) {
                for (double x2 = x1 + 0.05; x2 <= 1.0; x2 += 0.1) {
                    const FractionalOrder lo(x1), hi(x2);
                    CHECK(entropy_term(below, lo, base) <= entropy_term(below, hi, base));
                    CHECK(entropy_term(above, lo, base) >= entropy_term(above, hi, base));
                }
            }
        }
    }
}

TEST_CASE("concavity of the entropy term") {
    Rng rng(5);
    for (int trial = 0; trial < 2000; ++trial) {
        const FractionalOrder alpha(rng.uniform(0.01, 1.0));
        const double p1 = rng.uniform(), p2 = rng.uniform(), t = rng.uniform();
        const double mid = entropy_term(t * p1 + (1 - t) * p2, alpha);
        CHECK(mid >= t * entropy_term(p1, alpha) + (1 - t) * entropy_term(p2, alpha) - 1e-9);
    }
}

TEST_CASE("binomial maximum at one half") {
    for (double x = 0.1; x <= 1.0 + 1e-12; x += 0.1) {
        const FractionalOrder alpha(std::min(x, 1.0));
        const double top = binomial_entropy(0.5, alpha);
        for (int i = 0; i <= 1000; ++i) CHECK(top >= binomial_entropy(i / 1000.0, alpha));
    }
}

// alpha / u with u = -ln p has second derivative alpha (2 - u) / (p^2 u^3):
// convex for p >= e^-2 and concave below, in either base.
TEST_CASE("elasticity curvature changes sign at e^-2 and matches info gain") {
    const double knee = std::exp(-2.0);
    for (double x : {0.1, 0.4, 0.7, 1.0}) {
        const FractionalOrder alpha(x);
        const double h = 1e-3;
        for (double p = 0.01 + h; p < 0.99 - h; p += 0.01) {
            for (auto base : {LogBase::natural, LogBase::ten}) {
                const double d2 = elasticity(p + h, alpha, base) - 2 * elasticity(p, alpha, base) +
                                  elasticity(p - h, alpha, base);
                if (p - h >= knee) CHECK(d2 >= -1e-9);
                if (p + h <= knee) CHECK(d2 <= 1e-9);
            }
            const double e = 1e-6;
            const double slope = (info_gain(p + e, alpha) - info_gain(p - e, alpha)) / (2 * e);
            CHECK(std::abs(std::abs(slope) * p / info_gain(p, alpha) - elasticity(p, alpha)) <= 1e-6);
        }
    }
}

}

#include "fracdec/frontier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "fracdec/csv.hpp"
#include "fracdec/errors.hpp"
#include "fracdec/kernels.hpp"
#include "fracdec/parallel.hpp"

namespace fracdec {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd cov_matrix(const AssetMoments& m) {
    const auto n = static_cast<Eigen::Index>(m.size());
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        m.cov.data(), n, n);
}

std::size_t find_label(const std::vector<std::string>& labels, const std::string& name) {
    const auto it = std::find(labels.begin(), labels.end(), name);
    if (it == labels.end()) throw LookupError(fmt::format("unknown asset '{}'", name));
    return static_cast<std::size_t>(it - labels.begin());
}

// Minimize w' S w subject to A w = b and, optionally, w >= 0.
class ActiveSetQp {
public:
    ActiveSetQp(MatrixXd s, MatrixXd a, VectorXd b, const SolveOptions& options)
        : s_(std::move(s)), a_(std::move(a)), b_(std::move(b)), options_(options) {
        scale_ = std::max(s_.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    }

    PortfolioSolution solve(VectorXd w) {
        const auto n = s_.rows();
        std::vector<bool> free(static_cast<std::size_t>(n), true);
        if (!options_.long_only) {
            VectorXd y;
            w = solve_eqp(free, y);
            return finish(w, y, 1);
        }
        for (Eigen::Index i = 0; i < n; ++i) free[static_cast<std::size_t>(i)] = w[i] > 0.0;

        const std::size_t cap =
            options_.max_iterations ? options_.max_iterations : 50 * static_cast<std::size_t>(n) + 100;
        const double release_tol = 1e-10 * scale_;
        for (std::size_t iter = 1; iter <= cap; ++iter) {
            VectorXd y;
            const VectorXd target = solve_eqp(free, y);
            const VectorXd p = target - w;
            if (p.lpNorm<Eigen::Infinity>() <= 1e-12) {
                const VectorXd z = reduced_gradient(target, y);
                Eigen::Index release = -1;
                double most_negative = -release_tol;
                for (Eigen::Index i = 0; i < n; ++i)
                    if (!free[static_cast<std::size_t>(i)] && z[i] < most_negative) {
                        most_negative = z[i];
                        release = i;
                    }
                if (release < 0) return finish(target, y, iter);
                free[static_cast<std::size_t>(release)] = true;
                w = target;
                continue;
            }
            double step = 1.0;
            Eigen::Index block = -1;
            for (Eigen::Index i = 0; i < n; ++i)
                if (free[static_cast<std::size_t>(i)] && p[i] < 0.0) {
                    const double ratio = -w[i] / p[i];
                    if (ratio < step) {
                        step = ratio;
                        block = i;
                    }
                }
            w += step * p;
            if (block >= 0) {
                w[block] = 0.0;
                free[static_cast<std::size_t>(block)] = false;
            }
        }
        throw SolverError(fmt::format("active-set iteration did not converge in {} steps", cap));
    }

private:
    // Solves the equality-constrained problem on the free assets, the others
    // pinned at zero. Returns full-length weights; `y` receives the multipliers.
    VectorXd solve_eqp(const std::vector<bool>& free, VectorXd& y) const {
        std::vector<Eigen::Index> idx;
        for (std::size_t i = 0; i < free.size(); ++i)
            if (free[i]) idx.push_back(static_cast<Eigen::Index>(i));
        const auto f = static_cast<Eigen::Index>(idx.size());
        const auto m = a_.rows();
        MatrixXd k = MatrixXd::Zero(f + m, f + m);
        VectorXd rhs = VectorXd::Zero(f + m);
        for (Eigen::Index r = 0; r < f; ++r) {
            for (Eigen::Index c = 0; c < f; ++c) k(r, c) = 2.0 * s_(idx[r], idx[c]);
            for (Eigen::Index j = 0; j < m; ++j) {
                k(r, f + j) = a_(j, idx[r]);
                k(f + j, r) = a_(j, idx[r]);
            }
        }
        rhs.tail(m) = b_;

        VectorXd x;
        if (!try_solve(k, rhs, x)) {
            for (Eigen::Index r = 0; r < f; ++r) k(r, r) += 2e-10;
            if (!try_solve(k, rhs, x))
                throw SolverError("KKT system is singular even after 1e-10 ridge regularization");
        }
        VectorXd w = VectorXd::Zero(s_.rows());
        for (Eigen::Index r = 0; r < f; ++r) w[idx[r]] = x[r];
        y = x.tail(m);
        return w;
    }

    static bool try_solve(const MatrixXd& k, const VectorXd& rhs, VectorXd& x) {
        Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(k);
        x = cod.solve(rhs);
        if (!x.allFinite()) return false;
        const double residual = (k * x - rhs).lpNorm<Eigen::Infinity>();
        const double scale = std::max({1.0, k.cwiseAbs().maxCoeff() * x.lpNorm<Eigen::Infinity>(),
                                       rhs.lpNorm<Eigen::Infinity>()});
        return residual <= 1e-9 * scale;
    }

    VectorXd reduced_gradient(const VectorXd& w, const VectorXd& y) const {
        return 2.0 * (s_ * w) + a_.transpose() * y;
    }

    PortfolioSolution finish(VectorXd w, const VectorXd& y, std::size_t iterations) const {
        if (options_.long_only)
            for (Eigen::Index i = 0; i < w.size(); ++i)
                if (w[i] < 0.0) w[i] = 0.0;  // rounding residue only; the solve keeps w >= 0
        PortfolioSolution sol;
        sol.weights.assign(w.data(), w.data() + w.size());
        sol.variance = std::max(0.0, w.dot(s_ * w));
        sol.multipliers.assign(y.data(), y.data() + y.size());
        const VectorXd z = reduced_gradient(w, y);
        sol.reduced_gradient.assign(z.data(), z.data() + z.size());
        sol.iterations = iterations;
        return sol;
    }

    MatrixXd s_;
    MatrixXd a_;
    VectorXd b_;
    SolveOptions options_;
    double scale_;
};

double return_tolerance(const AssetMoments& m) {
    double mx = 1.0;
    for (double v : m.mean) mx = std::max(mx, std::abs(v));
    return 1e-12 * mx;
}

}  // namespace

void validate(const AssetMoments& m) {
    const std::size_t n = m.size();
    if (n == 0) throw ValidationError("moments describe no assets");
    if (m.cov.size() != n * n)
        throw ShapeError(fmt::format("covariance has {} entries for {} assets", m.cov.size(), n));
    if (m.labels.size() != n) throw ShapeError("asset label count differs from the mean vector");
    for (double v : m.mean)
        if (!std::isfinite(v)) throw ValidationError("mean vector has a non-finite entry");
    for (double v : m.cov)
        if (!std::isfinite(v)) throw ValidationError("covariance has a non-finite entry");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(m.covariance(i, j) - m.covariance(j, i)) > 1e-12)
                throw ValidationError(fmt::format("covariance is not symmetric at ({}, {})", i, j));
    const Eigen::SelfAdjointEigenSolver<MatrixXd> eig(cov_matrix(m), Eigen::EigenvaluesOnly);
    const double lowest = eig.eigenvalues().minCoeff();
    if (lowest < -1e-10)
        throw ValidationError(fmt::format("covariance is not positive semi-definite (eigenvalue {})", lowest));
}

AssetMoments make_moments(std::vector<double> mean, std::vector<double> cov,
                          std::vector<std::string> labels) {
    if (labels.empty())
        for (std::size_t i = 0; i < mean.size(); ++i) labels.push_back(fmt::format("A{}", i + 1));
    AssetMoments m{std::move(labels), std::move(mean), std::move(cov)};
    validate(m);
    return m;
}

AssetMoments estimate_moments(const ReturnPanel& returns, std::span<const std::string> subset) {
    std::vector<std::size_t> cols;
    if (subset.empty()) {
        for (std::size_t s = 0; s < returns.stock_count(); ++s) cols.push_back(s);
    } else {
        for (const auto& name : subset) cols.push_back(returns.index_of(name));
    }
    if (cols.empty()) throw DataError("no assets selected");
    const std::size_t obs = returns.length();
    if (obs < 2) throw DataError(fmt::format("need at least 2 observations, have {}", obs));
    for (std::size_t c : cols)
        if (returns.returns[c].size() != obs) throw DataError("return series are not aligned");

    const std::size_t n = cols.size();
    AssetMoments m;
    m.mean.resize(n);
    m.cov.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        m.labels.push_back(returns.stocks[cols[i]]);
        m.mean[i] = kernels::moments(returns.returns[cols[i]]).mean;
    }
    const double N = static_cast<double>(obs);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double c = kernels::centered_dot(returns.returns[cols[i]], m.mean[i],
                                                   returns.returns[cols[j]], m.mean[j]) / N;
            m.cov[i * n + j] = c;
            m.cov[j * n + i] = c;
        }
    validate(m);
    return m;
}

AssetMoments restrict_moments(const AssetMoments& m, std::span<const std::string> subset) {
    if (subset.empty()) throw DataError("no assets selected");
    std::vector<std::size_t> idx;
    for (const auto& name : subset) idx.push_back(find_label(m.labels, name));
    const std::size_t n = idx.size();
    AssetMoments out;
    out.cov.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        out.labels.push_back(m.labels[idx[i]]);
        out.mean.push_back(m.mean[idx[i]]);
        for (std::size_t j = 0; j < n; ++j) out.cov[i * n + j] = m.covariance(idx[i], idx[j]);
    }
    return out;
}

PortfolioSolution min_variance_portfolio(const AssetMoments& m, double target_return,
                                         const SolveOptions& options) {
    validate(m);
    if (!std::isfinite(target_return)) throw DomainError("target return must be finite");
    const std::size_t n = m.size();
    const auto lo_it = std::min_element(m.mean.begin(), m.mean.end());
    const auto hi_it = std::max_element(m.mean.begin(), m.mean.end());
    const double lo = *lo_it, hi = *hi_it;
    const double tol = return_tolerance(m);
    const bool flat = hi - lo <= tol;

    if (flat && std::abs(target_return - lo) > tol)
        throw FeasibilityError(fmt::format(
            "target return {} is unreachable: every asset has mean {}", target_return, lo));
    if (options.long_only && (target_return < lo - tol || target_return > hi + tol))
        throw FeasibilityError(fmt::format(
            "target return {} lies outside [{}, {}], unreachable with long-only weights",
            target_return, lo, hi));
    double t = target_return;
    if (options.long_only) t = std::clamp(t, lo, hi);

    const auto N = static_cast<Eigen::Index>(n);
    VectorXd start = VectorXd::Zero(N);
    MatrixXd a;
    VectorXd b;
    if (flat) {
        // The return constraint duplicates the budget; drop it.
        a = MatrixXd::Ones(1, N);
        b = VectorXd::Ones(1);
        start.setConstant(1.0 / static_cast<double>(n));
    } else {
        a.resize(2, N);
        for (Eigen::Index i = 0; i < N; ++i) {
            a(0, i) = m.mean[static_cast<std::size_t>(i)];
            a(1, i) = 1.0;
        }
        b.resize(2);
        b << t, 1.0;
        const double gamma = (t - lo) / (hi - lo);
        start[hi_it - m.mean.begin()] += gamma;
        start[lo_it - m.mean.begin()] += 1.0 - gamma;
    }

    ActiveSetQp qp(cov_matrix(m), std::move(a), std::move(b), options);
    PortfolioSolution sol = qp.solve(std::move(start));
    sol.expected_return = kernels::dot(sol.weights, m.mean);
    if (flat) sol.multipliers.insert(sol.multipliers.begin(), 0.0);
    return sol;
}

PortfolioSolution global_min_variance(const AssetMoments& m, const SolveOptions& options) {
    validate(m);
    const auto N = static_cast<Eigen::Index>(m.size());
    ActiveSetQp qp(cov_matrix(m), MatrixXd::Ones(1, N), VectorXd::Ones(1), options);
    PortfolioSolution sol = qp.solve(VectorXd::Constant(N, 1.0 / static_cast<double>(N)));
    sol.expected_return = kernels::dot(sol.weights, m.mean);
    sol.multipliers.insert(sol.multipliers.begin(), 0.0);
    return sol;
}

KktReport kkt_report(const AssetMoments& m, const PortfolioSolution& sol, double target_return) {
    KktReport r;
    double total = 0.0;
    r.min_weight = std::numeric_limits<double>::infinity();
    for (double w : sol.weights) {
        total += w;
        r.min_weight = std::min(r.min_weight, w);
    }
    r.budget_residual = std::abs(total - 1.0);
    r.return_residual = std::abs(kernels::dot(sol.weights, m.mean) - target_return);
    r.min_reduced_gradient = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sol.weights.size(); ++i)
        if (sol.weights[i] == 0.0)
            r.min_reduced_gradient = std::min(r.min_reduced_gradient, sol.reduced_gradient[i]);
    return r;
}

Frontier efficient_frontier(const AssetMoments& m, std::size_t n_points, unsigned threads,
                            const SolveOptions& options) {
    if (n_points < 2) throw DomainError("a frontier needs at least 2 points");
    validate(m);
    const PortfolioSolution gmv = global_min_variance(m, options);
    const double top = *std::max_element(m.mean.begin(), m.mean.end());
    const double start = gmv.expected_return;

    Frontier f;
    f.labels = m.labels;
    if (!(top - start > 1e-9 * std::max(1.0, std::abs(top)))) {
        f.points.push_back({start, gmv.variance, gmv.weights});
        return f;
    }
    f.points.resize(n_points);
    parallel_for(n_points, threads, [&](std::size_t k) {
        const double t = k + 1 == n_points
                             ? top
                             : start + (top - start) * static_cast<double>(k) /
                                           static_cast<double>(n_points - 1);
        if (k == 0) {
            f.points[k] = {t, gmv.variance, gmv.weights};
            return;
        }
        PortfolioSolution s = min_variance_portfolio(m, t, options);
        f.points[k] = {t, s.variance, std::move(s.weights)};
    });
    return f;
}

FrontierComparison compare_frontiers(const Frontier& universe, const Frontier& subset,
                                     double threshold) {
    if (universe.points.empty() || subset.points.empty()) throw RangeError("empty frontier");
    if (!(threshold > 0.0)) throw DomainError("gap threshold must be positive");
    FrontierComparison out;
    out.threshold = threshold;
    out.universe_max_return = universe.points.back().target_return;
    out.subset_max_return = subset.points.back().target_return;
    const double s_lo = subset.points.front().target_return;
    const double s_hi = subset.points.back().target_return;
    const double tol = 1e-12 * std::max({1.0, std::abs(s_lo), std::abs(s_hi)});

    auto subset_variance = [&](double t) {
        const auto& pts = subset.points;
        if (pts.size() == 1) return pts.front().variance;
        auto it = std::lower_bound(pts.begin(), pts.end(), t,
                                   [](const FrontierPoint& p, double v) { return p.target_return < v; });
        if (it == pts.begin()) return it->variance;
        if (it == pts.end()) return pts.back().variance;
        const auto prev = it - 1;
        const double w = (t - prev->target_return) / (it->target_return - prev->target_return);
        return prev->variance + w * (it->variance - prev->variance);
    };

    for (const auto& p : universe.points) {
        const double t = p.target_return;
        if (t < s_lo - tol || t > s_hi + tol) continue;
        const double vs = subset_variance(t);
        const double gap = vs - p.variance;
        const double rel = p.variance > 0.0 ? gap / p.variance : (gap == 0.0 ? 0.0 : INFINITY);
        out.rows.push_back({t, p.variance, vs, gap, rel});
        out.min_gap = std::min(out.min_gap, gap);
    }
    if (out.rows.empty())
        throw RangeError(fmt::format(
            "frontier return ranges do not overlap: universe [{}, {}], subset [{}, {}]",
            universe.points.front().target_return, out.universe_max_return, s_lo, s_hi));

    for (std::size_t k = out.rows.size(); k-- > 0;) {
        if (!(out.rows[k].rel_gap < threshold)) break;
        out.crossover_return = out.rows[k].target_return;
    }
    return out;
}

std::string frontier_csv(const Frontier& f) {
    std::vector<std::string> header{"target_return", "variance", "stddev"};
    for (const auto& l : f.labels) header.push_back("w_" + l);
    std::string out = csv::join_row(header) + '\n';
    for (const auto& p : f.points) {
        std::vector<std::string> row{csv::format_number(p.target_return),
                                     csv::format_number(p.variance),
                                     csv::format_number(std::sqrt(p.variance))};
        for (double w : p.weights) row.push_back(csv::format_number(w));
        out += csv::join_row(row) + '\n';
    }
    return out;
}

std::string comparison_csv(const FrontierComparison& c) {
    std::string out = "target_return,var_universe,var_subset,gap,rel_gap\n";
    for (const auto& r : c.rows)
        out += fmt::format("{},{},{},{},{}\n", csv::format_number(r.target_return),
                           csv::format_number(r.var_universe), csv::format_number(r.var_subset),
                           csv::format_number(r.gap), csv::format_number(r.rel_gap));
    return out;
}

}  // namespace fracdec

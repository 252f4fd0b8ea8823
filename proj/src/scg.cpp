// Full-batch training. The conjugate-gradient variant follows Moller's scaled
// conjugate gradient: curvature along the search direction is estimated from
// a finite difference of gradients, a Levenberg-style regulator keeps the
// implied Hessian positive definite, and the regulator is raised or lowered
// from how well the local quadratic model predicted the actual decrease.

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "fracdec/errors.hpp"
#include "fracdec/kernels.hpp"
#include "fracdec/mlp.hpp"
#include "fracdec/rng.hpp"

namespace fracdec {

void TrainConfig::validate() const {
    for (double f : {train_fraction, validation_fraction, test_fraction})
        if (!(f > 0.0 && f < 1.0)) throw DomainError(fmt::format("split fraction {} is outside (0, 1)", f));
    if (std::abs(train_fraction + validation_fraction + test_fraction - 1.0) > 1e-9)
        throw DomainError("split fractions must sum to 1");
    if (max_epochs < 1) throw DomainError("max_epochs must be at least 1");
    if (hidden < 1) throw DomainError("hidden layer needs at least one unit");
    if (!(sigma0 > 0.0) || !(lambda0 > 0.0)) throw DomainError("SCG sigma0 and lambda0 must be positive");
    if (gradient_descent && !(learning_rate > 0.0)) throw DomainError("learning rate must be positive");
}

DataSplit split_rows(std::size_t n, const TrainConfig& config) {
    if (n < 10) throw DataError(fmt::format("need at least 10 samples to split, got {}", n));
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    Rng rng(config.seed);
    rng.shuffle(idx);
    const auto n_train = static_cast<std::size_t>(std::llround(config.train_fraction * static_cast<double>(n)));
    const auto n_val = static_cast<std::size_t>(std::llround(config.validation_fraction * static_cast<double>(n)));
    if (n_train == 0 || n_val == 0 || n_train + n_val >= n)
        throw DataError(fmt::format("{} samples are too few for a {:.2f}/{:.2f}/{:.2f} split", n,
                                    config.train_fraction, config.validation_fraction,
                                    config.test_fraction));
    DataSplit s;
    s.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.validation.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train),
                        idx.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
    s.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), idx.end());
    return s;
}

namespace {

class Trainer {
public:
    Trainer(MlpRegressor model, const Dataset& data, const TrainConfig& config)
        : model_(std::move(model)), best_(model_), data_(data), config_(config),
          split_(split_rows(data.size(), config)) {}

    TrainResult run() {
        record();
        if (config_.gradient_descent)
            descend();
        else
            scg();
        return {std::move(best_), std::move(curves_), best_epoch_, epochs_, std::move(split_)};
    }

private:
    double loss(std::span<const double> w) {
        std::copy(w.begin(), w.end(), model_.parameters().begin());
        return mse(model_, data_, split_.train);
    }

    double gradient(std::span<const double> w, std::span<double> g) {
        std::copy(w.begin(), w.end(), model_.parameters().begin());
        return mse_gradient(model_, data_, split_.train, g);
    }

    // Appends the losses of the current weights; returns false once the
    // validation loss has not improved for `patience` epochs.
    bool record() {
        if (!model_.finite()) throw ComputationError("training diverged: non-finite weights");
        curves_.train.push_back(mse(model_, data_, split_.train));
        curves_.validation.push_back(mse(model_, data_, split_.validation));
        curves_.test.push_back(mse(model_, data_, split_.test));
        const std::size_t epoch = curves_.train.size() - 1;
        if (epoch == 0 || curves_.validation[epoch] < curves_.validation[best_epoch_]) {
            best_epoch_ = epoch;
            best_ = model_;
        }
        return config_.patience == 0 || epoch - best_epoch_ < config_.patience;
    }

    void set_weights(std::span<const double> w) {
        std::copy(w.begin(), w.end(), model_.parameters().begin());
    }

    void descend() {
        const std::size_t np = model_.parameter_count();
        std::vector<double> w(model_.parameters().begin(), model_.parameters().end()), g(np);
        for (epochs_ = 1; epochs_ <= config_.max_epochs; ++epochs_) {
            gradient(w, g);
            kernels::axpy(-config_.learning_rate, g, w);
            set_weights(w);
            if (!record()) break;
        }
        epochs_ = std::min(epochs_, config_.max_epochs);
    }

    void scg() {
        const std::size_t np = model_.parameter_count();
        constexpr double lambda_min = 1e-15, lambda_max = 1e100;
        std::vector<double> w(model_.parameters().begin(), model_.parameters().end());
        std::vector<double> g(np), g_old(np), g_plus(np), d(np), w_try(np), w_probe(np);

        double f_old = gradient(w, g);
        for (std::size_t i = 0; i < np; ++i) d[i] = -g[i];
        double lambda = config_.lambda0;
        bool success = true;
        std::size_t n_success = 0;
        double mu = 0.0, kappa = 0.0, theta = 0.0;

        for (epochs_ = 1; epochs_ <= config_.max_epochs; ++epochs_) {
            if (success) {
                mu = kernels::dot(d, g);
                if (mu >= 0.0) {
                    for (std::size_t i = 0; i < np; ++i) d[i] = -g[i];
                    mu = kernels::dot(d, g);
                }
                kappa = kernels::dot(d, d);
                if (kappa < std::numeric_limits<double>::epsilon()) {
                    set_weights(w);
                    record();
                    break;  // zero gradient: at a stationary point
                }
                const double sigma = config_.sigma0 / std::sqrt(kappa);
                for (std::size_t i = 0; i < np; ++i) w_probe[i] = w[i] + sigma * d[i];
                gradient(w_probe, g_plus);
                double curvature = 0.0;
                for (std::size_t i = 0; i < np; ++i) curvature += d[i] * (g_plus[i] - g[i]);
                theta = curvature / sigma;
            }

            double delta = theta + lambda * kappa;
            if (delta <= 0.0) {
                delta = lambda * kappa;
                lambda -= theta / kappa;
            }
            const double step = -mu / delta;
            for (std::size_t i = 0; i < np; ++i) w_try[i] = w[i] + step * d[i];
            const double f_new = loss(w_try);
            const double comparison = 2.0 * (f_new - f_old) / (step * mu);

            if (comparison >= 0.0 && std::isfinite(f_new)) {
                success = true;
                ++n_success;
                w = w_try;
                g_old = g;
                f_old = gradient(w, g);
            } else {
                success = false;
            }

            if (comparison < 0.25 || !std::isfinite(comparison))
                lambda = std::min(4.0 * lambda, lambda_max);
            else if (comparison > 0.75)
                lambda = std::max(0.5 * lambda, lambda_min);

            if (n_success == np) {
                for (std::size_t i = 0; i < np; ++i) d[i] = -g[i];
                n_success = 0;
            } else if (success) {
                double num = 0.0;
                for (std::size_t i = 0; i < np; ++i) num += (g_old[i] - g[i]) * g[i];
                const double gamma = num / mu;
                for (std::size_t i = 0; i < np; ++i) d[i] = gamma * d[i] - g[i];
            }

            set_weights(w);
            if (!record()) break;
            if (lambda >= lambda_max) break;  // no further progress possible
        }
        epochs_ = std::min(epochs_, config_.max_epochs);
    }

    MlpRegressor model_;
    MlpRegressor best_;
    const Dataset& data_;
    const TrainConfig& config_;
    DataSplit split_;
    LossCurves curves_;
    std::size_t best_epoch_ = 0;
    std::size_t epochs_ = 0;
};

}  // namespace

TrainResult train_from(MlpRegressor model, const Dataset& data, const TrainConfig& config) {
    config.validate();
    data.validate();
    if (data.features != model.inputs())
        throw ShapeError(fmt::format("network expects {} inputs, dataset has {}", model.inputs(),
                                     data.features));
    return Trainer(std::move(model), data, config).run();
}

TrainResult train_scg(const Dataset& data, const TrainConfig& config) {
    config.validate();
    data.validate();
    Rng rng(mix_seed(config.seed) ^ 0x5CA1AB1EULL);
    MlpRegressor model = MlpRegressor::random(data.features, config.hidden, rng);
    if (config.zero_output_layer) {
        for (double& w : model.output_weights()) w = 0.0;
        model.output_bias() = 0.0;
    }
    return train_from(std::move(model), data, config);
}

}  // namespace fracdec

#pragma once

// Single-hidden-layer perceptron regressor (tanh hidden units, linear output)
// and its full-batch trainers: scaled conjugate gradient, with plain gradient
// descent as a fallback.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fracdec {

class Rng;

/// Row-major sample matrix with one target per row.
struct Dataset {
    std::size_t features = 0;
    std::vector<double> x;
    std::vector<double> y;

    [[nodiscard]] std::size_t size() const noexcept { return y.size(); }
    [[nodiscard]] std::span<const double> row(std::size_t i) const {
        return {x.data() + i * features, features};
    }
    /// Throws ShapeError on inconsistent sizes, ValidationError on non-finite values.
    void validate() const;
};

class MlpRegressor {
public:
    /// All parameters zero.
    MlpRegressor(std::size_t inputs, std::size_t hidden);

    /// Hidden weights uniform in +-1/sqrt(inputs), output weights uniform in
    /// +-1/sqrt(hidden), biases zero.
    static MlpRegressor random(std::size_t inputs, std::size_t hidden, Rng& rng);

    [[nodiscard]] std::size_t inputs() const noexcept { return inputs_; }
    [[nodiscard]] std::size_t hidden() const noexcept { return hidden_; }
    [[nodiscard]] std::size_t parameter_count() const noexcept { return params_.size(); }

    /// Flat layout: W1 (hidden x inputs, row-major), b1 (hidden), w2 (hidden), b2.
    [[nodiscard]] std::span<double> parameters() noexcept { return params_; }
    [[nodiscard]] std::span<const double> parameters() const noexcept { return params_; }

    std::span<double> hidden_weights() noexcept { return {params_.data(), hidden_ * inputs_}; }
    std::span<double> hidden_bias() noexcept { return {params_.data() + hidden_ * inputs_, hidden_}; }
    std::span<double> output_weights() noexcept {
        return {params_.data() + hidden_ * (inputs_ + 1), hidden_};
    }
    double& output_bias() noexcept { return params_.back(); }

    /// Throws ShapeError if x.size() != inputs().
    [[nodiscard]] double predict(std::span<const double> x) const;
    [[nodiscard]] std::vector<double> predict(const Dataset& data) const;

    [[nodiscard]] bool finite() const noexcept;

private:
    double forward(std::span<const double> x, std::span<double> h) const;

    std::size_t inputs_;
    std::size_t hidden_;
    std::vector<double> params_;
};

/// Mean squared error over the selected rows (all rows when `rows` is empty).
double mse(const MlpRegressor& model, const Dataset& data, std::span<const std::size_t> rows = {});

/// MSE and its gradient with respect to model.parameters(). `grad` is
/// overwritten and must have parameter_count() entries.
double mse_gradient(const MlpRegressor& model, const Dataset& data,
                    std::span<const std::size_t> rows, std::span<double> grad);

struct TrainConfig {
    double train_fraction = 0.70;
    double validation_fraction = 0.15;
    double test_fraction = 0.15;
    std::size_t max_epochs = 500;
    std::size_t hidden = 10;
    /// SCG finite-difference scale and initial regulator.
    double sigma0 = 1e-4;
    double lambda0 = 1.0;
    /// Epochs without validation improvement before stopping; 0 disables.
    std::size_t patience = 50;
    std::uint64_t seed = 1;
    bool gradient_descent = false;
    double learning_rate = 0.05;
    /// Start with the output layer at zero instead of random.
    bool zero_output_layer = false;

    /// Throws DomainError.
    void validate() const;
};

struct DataSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
    std::vector<std::size_t> test;
};

/// Seeded shuffle of row indices cut at the configured fractions. Throws
/// DataError when any part would be empty or there are fewer than 10 rows.
DataSplit split_rows(std::size_t n, const TrainConfig& config);

struct LossCurves {
    std::vector<double> train;
    std::vector<double> validation;
    std::vector<double> test;
};

struct TrainResult {
    MlpRegressor model;      // weights at the best validation epoch
    LossCurves curves;       // entry 0 is the initial network
    std::size_t best_epoch = 0;
    std::size_t epochs = 0;
    DataSplit split;

    [[nodiscard]] double train_mse() const { return curves.train[best_epoch]; }
    [[nodiscard]] double validation_mse() const { return curves.validation[best_epoch]; }
    [[nodiscard]] double test_mse() const { return curves.test[best_epoch]; }
};

/// Trains a fresh network on `data`. Deterministic given config.seed.
/// Throws DataError on too few rows, ComputationError if training diverges.
TrainResult train_scg(const Dataset& data, const TrainConfig& config);

/// Same split and stopping rules, starting from the given network.
TrainResult train_from(MlpRegressor model, const Dataset& data, const TrainConfig& config);

}  // namespace fracdec

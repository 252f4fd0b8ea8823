#include "fracdec/mlp.hpp"

#include <cmath>

#include <fmt/format.h>

#include "fracdec/errors.hpp"
#include "fracdec/kernels.hpp"
#include "fracdec/rng.hpp"

namespace fracdec {

void Dataset::validate() const {
    if (features == 0) throw ShapeError("dataset has zero features");
    if (x.size() != y.size() * features)
        throw ShapeError(fmt::format("dataset has {} feature values for {} rows of {} features",
                                     x.size(), y.size(), features));
    for (double v : x)
        if (!std::isfinite(v)) throw ValidationError("dataset contains a non-finite feature");
    for (double v : y)
        if (!std::isfinite(v)) throw ValidationError("dataset contains a non-finite target");
}

MlpRegressor::MlpRegressor(std::size_t inputs, std::size_t hidden)
    : inputs_(inputs), hidden_(hidden), params_(hidden * (inputs + 2) + 1, 0.0) {
    if (inputs == 0 || hidden == 0) throw ShapeError("network needs at least one input and one hidden unit");
}

MlpRegressor MlpRegressor::random(std::size_t inputs, std::size_t hidden, Rng& rng) {
    MlpRegressor m(inputs, hidden);
    const double a = 1.0 / std::sqrt(static_cast<double>(inputs));
    for (double& w : m.hidden_weights()) w = rng.uniform(-a, a);
    const double b = 1.0 / std::sqrt(static_cast<double>(hidden));
    for (double& w : m.output_weights()) w = rng.uniform(-b, b);
    return m;
}

double MlpRegressor::forward(std::span<const double> x, std::span<double> h) const {
    const std::span<const double> w1(params_.data(), hidden_ * inputs_);
    const std::span<const double> b1(params_.data() + hidden_ * inputs_, hidden_);
    const std::span<const double> w2(params_.data() + hidden_ * (inputs_ + 1), hidden_);
    kernels::gemv(w1, hidden_, inputs_, x, b1, h);
    for (double& v : h) v = std::tanh(v);
    return kernels::dot(w2, h) + params_.back();
}

double MlpRegressor::predict(std::span<const double> x) const {
    if (x.size() != inputs_)
        throw ShapeError(fmt::format("network expects {} inputs, got {}", inputs_, x.size()));
    std::vector<double> h(hidden_);
    return forward(x, h);
}

std::vector<double> MlpRegressor::predict(const Dataset& data) const {
    if (data.features != inputs_)
        throw ShapeError(fmt::format("network expects {} inputs, dataset has {}", inputs_, data.features));
    std::vector<double> h(hidden_), out(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) out[i] = forward(data.row(i), h);
    return out;
}

bool MlpRegressor::finite() const noexcept {
    for (double p : params_)
        if (!std::isfinite(p)) return false;
    return true;
}

namespace {

void check_shape(const MlpRegressor& model, const Dataset& data) {
    if (data.features != model.inputs())
        throw ShapeError(fmt::format("network expects {} inputs, dataset has {}", model.inputs(),
                                     data.features));
}

}  // namespace

double mse(const MlpRegressor& model, const Dataset& data, std::span<const std::size_t> rows) {
    check_shape(model, data);
    double total = 0.0;
    const std::size_t n = rows.empty() ? data.size() : rows.size();
    if (n == 0) throw DataError("mean squared error over zero rows");
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t i = rows.empty() ? k : rows[k];
        const double e = model.predict(data.row(i)) - data.y[i];
        total += e * e;
    }
    return total / static_cast<double>(n);
}

double mse_gradient(const MlpRegressor& model, const Dataset& data,
                    std::span<const std::size_t> rows, std::span<double> grad) {
    check_shape(model, data);
    if (grad.size() != model.parameter_count())
        throw ShapeError("gradient buffer does not match the parameter count");
    const std::size_t in = model.inputs(), hid = model.hidden();
    const std::size_t n = rows.empty() ? data.size() : rows.size();
    if (n == 0) throw DataError("mean squared error over zero rows");

    const auto params = model.parameters();
    const std::span<const double> w1(params.data(), hid * in);
    const std::span<const double> b1(params.data() + hid * in, hid);
    const std::span<const double> w2(params.data() + hid * (in + 1), hid);
    const std::span<double> g_w1(grad.data(), hid * in);
    const std::span<double> g_b1(grad.data() + hid * in, hid);
    const std::span<double> g_w2(grad.data() + hid * (in + 1), hid);
    double& g_b2 = grad.back();
    std::fill(grad.begin(), grad.end(), 0.0);

    std::vector<double> h(hid), dh(hid);
    double total = 0.0;
    const double scale = 2.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t i = rows.empty() ? k : rows[k];
        const auto x = data.row(i);
        kernels::gemv(w1, hid, in, x, b1, h);
        for (double& v : h) v = std::tanh(v);
        const double e = kernels::dot(w2, h) + params.back() - data.y[i];
        total += e * e;
        const double g = scale * e;
        kernels::axpy(g, h, g_w2);
        g_b2 += g;
        for (std::size_t j = 0; j < hid; ++j) dh[j] = g * w2[j] * (1.0 - h[j] * h[j]);
        for (std::size_t j = 0; j < hid; ++j) kernels::axpy(dh[j], x, g_w1.subspan(j * in, in));
        kernels::axpy(1.0, dh, g_b1);
    }
    return total / static_cast<double>(n);
}

}  // namespace fracdec

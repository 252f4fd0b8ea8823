#include "fracdec/errors.hpp"
#include "fracdec/kernels.hpp"

namespace fracdec::kernels::scalar {

double dot(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ShapeError("dot: size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
    return acc;
}

double sum(std::span<const double> x) {
    double acc = 0.0;
    for (double v : x) acc += v;
    return acc;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    if (x.size() != y.size()) throw ShapeError("axpy: size mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

Moments moments(std::span<const double> x) {
    Moments m;
    if (x.empty()) return m;
    m.mean = sum(x) / static_cast<double>(x.size());
    double acc = 0.0;
    for (double v : x) {
        const double d = v - m.mean;
        acc += d * d;
    }
    m.sum_sq_dev = acc;
    return m;
}

double centered_dot(std::span<const double> x, double mean_x, std::span<const double> y,
                    double mean_y) {
    if (x.size() != y.size()) throw ShapeError("centered_dot: size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += (x[i] - mean_x) * (y[i] - mean_y);
    return acc;
}

void gemv(std::span<const double> a, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<const double> bias, std::span<double> out) {
    if (a.size() != rows * cols || x.size() != cols || out.size() != rows ||
        (!bias.empty() && bias.size() != rows))
        throw ShapeError("gemv: size mismatch");
    for (std::size_t r = 0; r < rows; ++r) {
        double acc = bias.empty() ? 0.0 : bias[r];
        const double* row = a.data() + r * cols;
        for (std::size_t c = 0; c < cols; ++c) acc += row[c] * x[c];
        out[r] = acc;
    }
}

void gemv_t_accumulate(std::span<const double> a, std::size_t rows, std::size_t cols,
                       std::span<const double> v, std::span<double> out) {
    if (a.size() != rows * cols || v.size() != rows || out.size() != cols)
        throw ShapeError("gemv_t_accumulate: size mismatch");
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = a.data() + r * cols;
        const double vr = v[r];
        for (std::size_t c = 0; c < cols; ++c) out[c] += vr * row[c];
    }
}

}  // namespace fracdec::kernels::scalar

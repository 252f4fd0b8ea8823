#pragma once

// Data-parallel double-precision kernels.
//
// Every kernel has a portable scalar reference in `kernels::scalar` and, on
// x86-64, an AVX2+FMA variant in `kernels::avx2`. The unqualified entry points
// dispatch at runtime to the widest variant the CPU supports. Set
// FRACDEC_SIMD=scalar in the environment (or call set_backend) to force the
// reference path.
//
// The SIMD variants reassociate sums, so results agree with the scalar path
// to rounding, not bit-for-bit. Within one backend results are deterministic.

#include <cstddef>
#include <span>
#include <string_view>

namespace fracdec::kernels {

enum class Backend { scalar, avx2 };

struct Moments {
    double mean = 0.0;
    double sum_sq_dev = 0.0;  // sum of (x - mean)^2
};

namespace scalar {
double dot(std::span<const double> x, std::span<const double> y);
double sum(std::span<const double> x);
void axpy(double a, std::span<const double> x, std::span<double> y);
Moments moments(std::span<const double> x);
double centered_dot(std::span<const double> x, double mean_x, std::span<const double> y,
                    double mean_y);
void gemv(std::span<const double> a, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<const double> bias, std::span<double> out);
void gemv_t_accumulate(std::span<const double> a, std::size_t rows, std::size_t cols,
                       std::span<const double> v, std::span<double> out);
}  // namespace scalar

namespace avx2 {
bool compiled();
double dot(std::span<const double> x, std::span<const double> y);
double sum(std::span<const double> x);
void axpy(double a, std::span<const double> x, std::span<double> y);
Moments moments(std::span<const double> x);
double centered_dot(std::span<const double> x, double mean_x, std::span<const double> y,
                    double mean_y);
void gemv(std::span<const double> a, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<const double> bias, std::span<double> out);
void gemv_t_accumulate(std::span<const double> a, std::size_t rows, std::size_t cols,
                       std::span<const double> v, std::span<double> out);
}  // namespace avx2

Backend active_backend();
bool backend_available(Backend b);
/// Throws DomainError if `b` is not available on this CPU.
void set_backend(Backend b);
std::string_view backend_name(Backend b);

/// sum_i x_i * y_i. Sizes must match.
double dot(std::span<const double> x, std::span<const double> y);
double sum(std::span<const double> x);
/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);
/// Mean and centered second moment (two-pass).
Moments moments(std::span<const double> x);
/// sum_i (x_i - mean_x) * (y_i - mean_y)
double centered_dot(std::span<const double> x, double mean_x, std::span<const double> y,
                    double mean_y);
/// out = A x + bias, A row-major rows x cols. `bias` may be empty.
void gemv(std::span<const double> a, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<const double> bias, std::span<double> out);
/// out += A^T v, A row-major rows x cols.
void gemv_t_accumulate(std::span<const double> a, std::size_t rows, std::size_t cols,
                       std::span<const double> v, std::span<double> out);

}  // namespace fracdec::kernels

#include "fracdec/errors.hpp"
#include "fracdec/kernels.hpp"

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#define FRACDEC_HAVE_AVX2_KERNELS 1
#include <immintrin.h>
#endif

namespace fracdec::kernels::avx2 {

#ifdef FRACDEC_HAVE_AVX2_KERNELS

#define FRACDEC_AVX2 __attribute__((target("avx2,fma")))

namespace {

FRACDEC_AVX2 inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

bool compiled() { return true; }

FRACDEC_AVX2 double dot(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ShapeError("dot: size mismatch");
    const std::size_t n = x.size();
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x.data() + i), _mm256_loadu_pd(y.data() + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x.data() + i + 4),
                               _mm256_loadu_pd(y.data() + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x.data() + i), _mm256_loadu_pd(y.data() + i), acc0);
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

FRACDEC_AVX2 double sum(std::span<const double> x) {
    const std::size_t n = x.size();
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x.data() + i));
        acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x.data() + i + 4));
    }
    for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x.data() + i));
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += x[i];
    return acc;
}

FRACDEC_AVX2 void axpy(double a, std::span<const double> x, std::span<double> y) {
    if (x.size() != y.size()) throw ShapeError("axpy: size mismatch");
    const std::size_t n = x.size();
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x.data() + i),
                                           _mm256_loadu_pd(y.data() + i));
        _mm256_storeu_pd(y.data() + i, vy);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

FRACDEC_AVX2 Moments moments(std::span<const double> x) {
    Moments m;
    const std::size_t n = x.size();
    if (n == 0) return m;
    m.mean = sum(x) / static_cast<double>(n);
    const __m256d vm = _mm256_set1_pd(m.mean);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x.data() + i), vm);
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        const double d = x[i] - m.mean;
        s += d * d;
    }
    m.sum_sq_dev = s;
    return m;
}

FRACDEC_AVX2 double centered_dot(std::span<const double> x, double mean_x,
                                 std::span<const double> y, double mean_y) {
    if (x.size() != y.size()) throw ShapeError("centered_dot: size mismatch");
    const std::size_t n = x.size();
    const __m256d mx = _mm256_set1_pd(mean_x);
    const __m256d my = _mm256_set1_pd(mean_y);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(x.data() + i), mx);
        const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(y.data() + i), my);
        acc = _mm256_fmadd_pd(dx, dy, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += (x[i] - mean_x) * (y[i] - mean_y);
    return s;
}

FRACDEC_AVX2 void gemv(std::span<const double> a, std::size_t rows, std::size_t cols,
                       std::span<const double> x, std::span<const double> bias,
                       std::span<double> out) {
    if (a.size() != rows * cols || x.size() != cols || out.size() != rows ||
        (!bias.empty() && bias.size() != rows))
        throw ShapeError("gemv: size mismatch");
    for (std::size_t r = 0; r < rows; ++r) {
        const double b = bias.empty() ? 0.0 : bias[r];
        out[r] = b + dot(a.subspan(r * cols, cols), x);
    }
}

FRACDEC_AVX2 void gemv_t_accumulate(std::span<const double> a, std::size_t rows,
                                    std::size_t cols, std::span<const double> v,
                                    std::span<double> out) {
    if (a.size() != rows * cols || v.size() != rows || out.size() != cols)
        throw ShapeError("gemv_t_accumulate: size mismatch");
    for (std::size_t r = 0; r < rows; ++r) axpy(v[r], a.subspan(r * cols, cols), out);
}

#else  // no AVX2 build support: forward to the reference kernels

bool compiled() { return false; }
double dot(std::span<const double> x, std::span<const double> y) { return scalar::dot(x, y); }
double sum(std::span<const double> x) { return scalar::sum(x); }
void axpy(double a, std::span<const double> x, std::span<double> y) { scalar::axpy(a, x, y); }
Moments moments(std::span<const double> x) { return scalar::moments(x); }
double centered_dot(std::span<const double> x, double mean_x, std::span<const double> y,
                    double mean_y) {
    return scalar::centered_dot(x, mean_x, y, mean_y);
}
void gemv(std::span<const double> a, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<const double> bias, std::span<double> out) {
    scalar::gemv(a, rows, cols, x, bias, out);
}
void gemv_t_accumulate(std::span<const double> a, std::size_t rows, std::size_t cols,
                       std::span<const double> v, std::span<double> out) {
    scalar::gemv_t_accumulate(a, rows, cols, v, out);
}

#endif

}  // namespace fracdec::kernels::avx2

#include <atomic>
#include <cstdlib>
#include <string_view>

#include "fracdec/errors.hpp"
#include "fracdec/kernels.hpp"

namespace fracdec::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
    return avx2::compiled() && __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend initial_backend() {
    if (const char* env = std::getenv("FRACDEC_SIMD")) {
        if (std::string_view(env) == "scalar") return Backend::scalar;
    }
    return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& backend_slot() {
    static std::atomic<Backend> slot{initial_backend()};
    return slot;
}

inline bool use_avx2() { return backend_slot().load(std::memory_order_relaxed) == Backend::avx2; }

}  // namespace

Backend active_backend() { return backend_slot().load(); }

bool backend_available(Backend b) { return b == Backend::scalar || cpu_has_avx2(); }

void set_backend(Backend b) {
    if (!backend_available(b))
        throw DomainError("SIMD backend '" + std::string(backend_name(b)) +
                          "' is not available on this CPU");
    backend_slot().store(b);
}

std::string_view backend_name(Backend b) {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
    }
    return "unknown";
}

double dot(std::span<const double> x, std::span<const double> y) {
    return use_avx2() ? avx2::dot(x, y) : scalar::dot(x, y);
}

double sum(std::span<const double> x) { return use_avx2() ? avx2::sum(x) : scalar::sum(x); }

void axpy(double a, std::span<const double> x, std::span<double> y) {
    use_avx2() ? avx2::axpy(a, x, y) : scalar::axpy(a, x, y);
}

Moments moments(std::span<const double> x) {
    return use_avx2() ? avx2::moments(x) : scalar::moments(x);
}

double centered_dot(std::span<const double> x, double mean_x, std::span<const double> y,
                    double mean_y) {
    return use_avx2() ? avx2::centered_dot(x, mean_x, y, mean_y)
                      : scalar::centered_dot(x, mean_x, y, mean_y);
}

void gemv(std::span<const double> a, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<const double> bias, std::span<double> out) {
    use_avx2() ? avx2::gemv(a, rows, cols, x, bias, out)
               : scalar::gemv(a, rows, cols, x, bias, out);
}

void gemv_t_accumulate(std::span<const double> a, std::size_t rows, std::size_t cols,
                       std::span<const double> v, std::span<double> out) {
    use_avx2() ? avx2::gemv_t_accumulate(a, rows, cols, v, out)
               : scalar::gemv_t_accumulate(a, rows, cols, v, out);
}

}  // namespace fracdec::kernels

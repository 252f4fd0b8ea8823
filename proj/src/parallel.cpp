#include "fracdec/parallel.hpp"

#include <cstdlib>
#include <string>

#include <fmt/format.h>

#include "fracdec/errors.hpp"

namespace fracdec {

unsigned resolve_threads(std::optional<long> requested) {
    long n = 1;
    if (requested) {
        n = *requested;
    } else if (const char* env = std::getenv("FRACDEC_THREADS"); env && *env) {
        char* end = nullptr;
        n = std::strtol(env, &end, 10);
        if (*end != '\0') throw DomainError(fmt::format("FRACDEC_THREADS='{}' is not an integer", env));
    }
    if (n < 1 || n > 1024) throw DomainError(fmt::format("thread count must be in [1, 1024], got {}", n));
    return static_cast<unsigned>(n);
}

}  // namespace fracdec

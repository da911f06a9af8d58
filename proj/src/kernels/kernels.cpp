#include "hrc/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <string>

#include "hrc/types.hpp"

namespace hrc::kernels {
namespace {

std::atomic<int> g_forced{-1};

Backend detect_best() {
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2")) return Backend::Avx2;
#endif
#if defined(__aarch64__)
    return Backend::Neon;
#endif
    return Backend::Scalar;
}

Backend initial_backend() {
    if (const char* env = std::getenv("HRC_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::Scalar;
        if (std::strcmp(env, "avx2") == 0 && backend_available(Backend::Avx2)) return Backend::Avx2;
        if (std::strcmp(env, "neon") == 0 && backend_available(Backend::Neon)) return Backend::Neon;
    }
    return detect_best();
}

}  // namespace

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
        case Backend::Neon: return "neon";
    }
    return "?";
}

bool backend_available(Backend b) {
    switch (b) {
        case Backend::Scalar:
            return true;
        case Backend::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Backend::Neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Backend active_backend() {
    int f = g_forced.load(std::memory_order_acquire);
    if (f < 0) {
        static const Backend detected = initial_backend();
        return detected;
    }
    return static_cast<Backend>(f);
}

void force_backend(Backend b) {
    if (!backend_available(b))
        throw Error(ErrorCode::Internal,
                    std::string("kernel backend unavailable: ") + backend_name(b));
    g_forced.store(static_cast<int>(b), std::memory_order_release);
}

const Ops& ops_for(Backend b) {
    if (!backend_available(b))
        throw Error(ErrorCode::Internal,
                    std::string("kernel backend unavailable: ") + backend_name(b));
    switch (b) {
        case Backend::Scalar:
            return detail::scalar_ops;
#if defined(__x86_64__) || defined(_M_X64)
        case Backend::Avx2:
            return detail::avx2_ops;
#endif
#if defined(__aarch64__)
        case Backend::Neon:
            return detail::neon_ops;
#endif
        default:
            return detail::scalar_ops;
    }
}

const Ops& ops() { return ops_for(active_backend()); }

}  // namespace hrc::kernels

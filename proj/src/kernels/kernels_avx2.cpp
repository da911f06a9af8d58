#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "hrc/kernels.hpp"

// AVX2 backend. One 4-lane register per accumulator, lanes combined in the
// contract order; mul/add only (no FMA) so rounding matches the scalar path.

namespace hrc::kernels {
namespace {

inline double combine_sum(__m256d acc) {
    alignas(32) double a[4];
    _mm256_store_pd(a, acc);
    return (a[0] + a[1]) + (a[2] + a[3]);
}

inline double combine_min(__m256d acc) {
    alignas(32) double a[4];
    _mm256_store_pd(a, acc);
    return std::min(std::min(a[0], a[1]), std::min(a[2], a[3]));
}

inline double combine_max(__m256d acc) {
    alignas(32) double a[4];
    _mm256_store_pd(a, acc);
    return std::max(std::max(a[0], a[1]), std::max(a[2], a[3]));
}

inline __m256d abs_pd(__m256d v) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    return _mm256_andnot_pd(sign, v);
}

double sum_impl(const double* x, size_t n) {
    __m256d acc = _mm256_setzero_pd();
    const size_t nb = n / 4;
    for (size_t b = 0; b < nb; ++b) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + 4 * b));
    double res = combine_sum(acc);
    for (size_t i = 4 * nb; i < n; ++i) res += x[i];
    return res;
}

double sum_abs_impl(const double* x, size_t n) {
    __m256d acc = _mm256_setzero_pd();
    const size_t nb = n / 4;
    for (size_t b = 0; b < nb; ++b) acc = _mm256_add_pd(acc, abs_pd(_mm256_loadu_pd(x + 4 * b)));
    double res = combine_sum(acc);
    for (size_t i = 4 * nb; i < n; ++i) res += std::fabs(x[i]);
    return res;
}

double min_dist_sq_impl(const double* ax, const double* ay, const double* bx, const double* by,
                        size_t n) {
    __m256d acc = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    const size_t nb = n / 4;
    for (size_t b = 0; b < nb; ++b) {
        const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(ax + 4 * b), _mm256_loadu_pd(bx + 4 * b));
        const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ay + 4 * b), _mm256_loadu_pd(by + 4 * b));
        const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
        acc = _mm256_min_pd(acc, d2);
    }
    double res = combine_min(acc);
    for (size_t i = 4 * nb; i < n; ++i) {
        const double dx = ax[i] - bx[i];
        const double dy = ay[i] - by[i];
        res = std::min(res, dx * dx + dy * dy);
    }
    return res;
}

void project_minmax_impl(const double* xs, const double* ys, size_t n, double axx, double axy,
                         double* lo, double* hi) {
    const double inf = std::numeric_limits<double>::infinity();
    __m256d vmn = _mm256_set1_pd(inf);
    __m256d vmx = _mm256_set1_pd(-inf);
    const __m256d vax = _mm256_set1_pd(axx);
    const __m256d vay = _mm256_set1_pd(axy);
    const size_t nb = n / 4;
    for (size_t b = 0; b < nb; ++b) {
        const __m256d px = _mm256_mul_pd(_mm256_loadu_pd(xs + 4 * b), vax);
        const __m256d py = _mm256_mul_pd(_mm256_loadu_pd(ys + 4 * b), vay);
        const __m256d p = _mm256_add_pd(px, py);
        vmn = _mm256_min_pd(vmn, p);
        vmx = _mm256_max_pd(vmx, p);
    }
    double rlo = combine_min(vmn);
    double rhi = combine_max(vmx);
    for (size_t i = 4 * nb; i < n; ++i) {
        const double p = xs[i] * axx + ys[i] * axy;
        rlo = std::min(rlo, p);
        rhi = std::max(rhi, p);
    }
    *lo = rlo;
    *hi = rhi;
}

uint64_t band_class_sum_impl(const double* d_sq, size_t n, double t1_sq, double t2_sq,
                             double t3_sq) {
    const __m256d t1 = _mm256_set1_pd(t1_sq);
    const __m256d t2 = _mm256_set1_pd(t2_sq);
    const __m256d t3 = _mm256_set1_pd(t3_sq);
    uint64_t total = n;
    const size_t nb = n / 4;
    for (size_t b = 0; b < nb; ++b) {
        const __m256d d = _mm256_loadu_pd(d_sq + 4 * b);
        total += static_cast<uint64_t>(
            __builtin_popcount(_mm256_movemask_pd(_mm256_cmp_pd(d, t1, _CMP_GE_OQ))));
        total += static_cast<uint64_t>(
            __builtin_popcount(_mm256_movemask_pd(_mm256_cmp_pd(d, t2, _CMP_GE_OQ))));
        total += static_cast<uint64_t>(
            __builtin_popcount(_mm256_movemask_pd(_mm256_cmp_pd(d, t3, _CMP_GE_OQ))));
    }
    for (size_t i = 4 * nb; i < n; ++i) {
        total += static_cast<uint64_t>(d_sq[i] >= t1_sq);
        total += static_cast<uint64_t>(d_sq[i] >= t2_sq);
        total += static_cast<uint64_t>(d_sq[i] >= t3_sq);
    }
    return total;
}

}  // namespace

namespace detail {
const Ops avx2_ops = {
    sum_impl, sum_abs_impl, min_dist_sq_impl, project_minmax_impl, band_class_sum_impl,
};
}  // namespace detail

}  // namespace hrc::kernels

#endif  // x86_64

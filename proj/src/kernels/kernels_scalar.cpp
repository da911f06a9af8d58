#include <algorithm>
#include <cmath>
#include <limits>

#include "hrc/kernels.hpp"

// Reference backend. The 4-lane blocking mirrors one SIMD register of
// doubles; SIMD backends reproduce these reductions bit-for-bit.

namespace hrc::kernels {
namespace {

double sum_impl(const double* x, size_t n) {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    const size_t nb = n / 4;
    for (size_t b = 0; b < nb; ++b) {
        acc[0] += x[4 * b + 0];
        acc[1] += x[4 * b + 1];
        acc[2] += x[4 * b + 2];
        acc[3] += x[4 * b + 3];
    }
    double res = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for (size_t i = 4 * nb; i < n; ++i) res += x[i];
    return res;
}

double sum_abs_impl(const double* x, size_t n) {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    const size_t nb = n / 4;
    for (size_t b = 0; b < nb; ++b) {
        acc[0] += std::fabs(x[4 * b + 0]);
        acc[1] += std::fabs(x[4 * b + 1]);
        acc[2] += std::fabs(x[4 * b + 2]);
        acc[3] += std::fabs(x[4 * b + 3]);
    }
    double res = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for (size_t i = 4 * nb; i < n; ++i) res += std::fabs(x[i]);
    return res;
}

double min_dist_sq_impl(const double* ax, const double* ay, const double* bx, const double* by,
                        size_t n) {
    const double inf = std::numeric_limits<double>::infinity();
    double acc[4] = {inf, inf, inf, inf};
    const size_t nb = n / 4;
    for (size_t b = 0; b < nb; ++b) {
        for (int l = 0; l < 4; ++l) {
            const size_t i = 4 * b + l;
            const double dx = ax[i] - bx[i];
            const double dy = ay[i] - by[i];
            acc[l] = std::min(acc[l], dx * dx + dy * dy);
        }
    }
    double res = std::min(std::min(acc[0], acc[1]), std::min(acc[2], acc[3]));
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
    double mn[4] = {inf, inf, inf, inf};
    double mx[4] = {-inf, -inf, -inf, -inf};
    const size_t nb = n / 4;
    for (size_t b = 0; b < nb; ++b) {
        for (int l = 0; l < 4; ++l) {
            const size_t i = 4 * b + l;
            const double p = xs[i] * axx + ys[i] * axy;
            mn[l] = std::min(mn[l], p);
            mx[l] = std::max(mx[l], p);
        }
    }
    double rlo = std::min(std::min(mn[0], mn[1]), std::min(mn[2], mn[3]));
    double rhi = std::max(std::max(mx[0], mx[1]), std::max(mx[2], mx[3]));
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
    uint64_t total = n;  // every sample contributes class >= 1
    for (size_t i = 0; i < n; ++i) {
        total += static_cast<uint64_t>(d_sq[i] >= t1_sq);
        total += static_cast<uint64_t>(d_sq[i] >= t2_sq);
        total += static_cast<uint64_t>(d_sq[i] >= t3_sq);
    }
    return total;
}

}  // namespace

namespace detail {
const Ops scalar_ops = {
    sum_impl, sum_abs_impl, min_dist_sq_impl, project_minmax_impl, band_class_sum_impl,
};
}  // namespace detail

}  // namespace hrc::kernels

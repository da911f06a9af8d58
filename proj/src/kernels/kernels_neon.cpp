#if defined(__aarch64__)

#include <arm_neon.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "hrc/kernels.hpp"

// NEON backend. float64x2 is two lanes wide, so a pair of registers forms the
// contract's four lanes: register 0 holds lanes {0,1}, register 1 lanes {2,3}.

namespace hrc::kernels {
namespace {

inline double combine_sum(float64x2_t a01, float64x2_t a23) {
    const double s01 = vgetq_lane_f64(a01, 0) + vgetq_lane_f64(a01, 1);
    const double s23 = vgetq_lane_f64(a23, 0) + vgetq_lane_f64(a23, 1);
    return s01 + s23;
}

inline double combine_min(float64x2_t a01, float64x2_t a23) {
    const double m01 = std::min(vgetq_lane_f64(a01, 0), vgetq_lane_f64(a01, 1));
    const double m23 = std::min(vgetq_lane_f64(a23, 0), vgetq_lane_f64(a23, 1));
    return std::min(m01, m23);
}

inline double combine_max(float64x2_t a01, float64x2_t a23) {
    const double m01 = std::max(vgetq_lane_f64(a01, 0), vgetq_lane_f64(a01, 1));
    const double m23 = std::max(vgetq_lane_f64(a23, 0), vgetq_lane_f64(a23, 1));
    return std::max(m01, m23);
}

double sum_impl(const double* x, size_t n) {
    float64x2_t a01 = vdupq_n_f64(0.0);
    float64x2_t a23 = vdupq_n_f64(0.0);
    const size_t nb = n / 4;
    for (size_t b = 0; b < nb; ++b) {
        a01 = vaddq_f64(a01, vld1q_f64(x + 4 * b));
        a23 = vaddq_f64(a23, vld1q_f64(x + 4 * b + 2));
    }
    double res = combine_sum(a01, a23);
    for (size_t i = 4 * nb; i < n; ++i) res += x[i];
    return res;
}

double sum_abs_impl(const double* x, size_t n) {
    float64x2_t a01 = vdupq_n_f64(0.0);
    float64x2_t a23 = vdupq_n_f64(0.0);
    const size_t nb = n / 4;
    for (size_t b = 0; b < nb; ++b) {
        a01 = vaddq_f64(a01, vabsq_f64(vld1q_f64(x + 4 * b)));
        a23 = vaddq_f64(a23, vabsq_f64(vld1q_f64(x + 4 * b + 2)));
    }
    double res = combine_sum(a01, a23);
    for (size_t i = 4 * nb; i < n; ++i) res += std::fabs(x[i]);
    return res;
}

double min_dist_sq_impl(const double* ax, const double* ay, const double* bx, const double* by,
                        size_t n) {
    const double inf = std::numeric_limits<double>::infinity();
    float64x2_t a01 = vdupq_n_f64(inf);
    float64x2_t a23 = vdupq_n_f64(inf);
    const size_t nb = n / 4;
    for (size_t b = 0; b < nb; ++b) {
        const float64x2_t dx0 = vsubq_f64(vld1q_f64(ax + 4 * b), vld1q_f64(bx + 4 * b));
        const float64x2_t dy0 = vsubq_f64(vld1q_f64(ay + 4 * b), vld1q_f64(by + 4 * b));
        const float64x2_t d20 = vaddq_f64(vmulq_f64(dx0, dx0), vmulq_f64(dy0, dy0));
        a01 = vminq_f64(a01, d20);
        const float64x2_t dx1 = vsubq_f64(vld1q_f64(ax + 4 * b + 2), vld1q_f64(bx + 4 * b + 2));
        const float64x2_t dy1 = vsubq_f64(vld1q_f64(ay + 4 * b + 2), vld1q_f64(by + 4 * b + 2));
        const float64x2_t d21 = vaddq_f64(vmulq_f64(dx1, dx1), vmulq_f64(dy1, dy1));
        a23 = vminq_f64(a23, d21);
    }
    double res = combine_min(a01, a23);
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
    float64x2_t mn01 = vdupq_n_f64(inf), mn23 = vdupq_n_f64(inf);
    float64x2_t mx01 = vdupq_n_f64(-inf), mx23 = vdupq_n_f64(-inf);
    const float64x2_t vax = vdupq_n_f64(axx);
    const float64x2_t vay = vdupq_n_f64(axy);
    const size_t nb = n / 4;
    for (size_t b = 0; b < nb; ++b) {
        const float64x2_t p0 = vaddq_f64(vmulq_f64(vld1q_f64(xs + 4 * b), vax),
                                         vmulq_f64(vld1q_f64(ys + 4 * b), vay));
        mn01 = vminq_f64(mn01, p0);
        mx01 = vmaxq_f64(mx01, p0);
        const float64x2_t p1 = vaddq_f64(vmulq_f64(vld1q_f64(xs + 4 * b + 2), vax),
                                         vmulq_f64(vld1q_f64(ys + 4 * b + 2), vay));
        mn23 = vminq_f64(mn23, p1);
        mx23 = vmaxq_f64(mx23, p1);
    }
    double rlo = combine_min(mn01, mn23);
    double rhi = combine_max(mx01, mx23);
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
    const float64x2_t t1 = vdupq_n_f64(t1_sq);
    const float64x2_t t2 = vdupq_n_f64(t2_sq);
    const float64x2_t t3 = vdupq_n_f64(t3_sq);
    uint64_t total = n;
    const size_t nb = n / 2;
    for (size_t b = 0; b < nb; ++b) {
        const float64x2_t d = vld1q_f64(d_sq + 2 * b);
        // cmp lanes are all-ones (== -1 as s64); accumulate via negated sum.
        total += static_cast<uint64_t>(-vaddvq_s64(vreinterpretq_s64_u64(vcgeq_f64(d, t1))));
        total += static_cast<uint64_t>(-vaddvq_s64(vreinterpretq_s64_u64(vcgeq_f64(d, t2))));
        total += static_cast<uint64_t>(-vaddvq_s64(vreinterpretq_s64_u64(vcgeq_f64(d, t3))));
    }
    for (size_t i = 2 * nb; i < n; ++i) {
        total += static_cast<uint64_t>(d_sq[i] >= t1_sq);
        total += static_cast<uint64_t>(d_sq[i] >= t2_sq);
        total += static_cast<uint64_t>(d_sq[i] >= t3_sq);
    }
    return total;
}

}  // namespace

namespace detail {
const Ops neon_ops = {
    sum_impl, sum_abs_impl, min_dist_sq_impl, project_minmax_impl, band_class_sum_impl,
};
}  // namespace detail

}  // namespace hrc::kernels

#endif  // __aarch64__

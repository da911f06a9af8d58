#pragma once

#include <cstddef>
#include <cstdint>

namespace hrc::kernels {

// Data-parallel inner loops used by the geometry and trace pipelines.
//
// Every kernel is defined by the *blocked* reduction contract below, and all
// backends implement it bit-exactly, so swapping backends never changes a
// result:
//   - elements are consumed in blocks of 4 into four independent lanes
//     (lane L accumulates elements 4*b + L),
//   - lanes combine as (lane0 op lane1) op (lane2 op lane3),
//   - the tail (n % 4 elements) folds sequentially into the combined value.
// Inputs must be finite (no NaN/Inf); callers guarantee this.

struct Ops {
    // Sum of x[0..n).
    double (*sum)(const double* x, size_t n);
    // Sum of |x[i]|.
    double (*sum_abs)(const double* x, size_t n);
    // min_i (ax[i]-bx[i])^2 + (ay[i]-by[i])^2;  +inf when n == 0.
    double (*min_dist_sq)(const double* ax, const double* ay, const double* bx,
                          const double* by, size_t n);
    // Min/max of xs[i]*ax + ys[i]*ay (projection onto an axis).
    // n == 0 yields lo = +inf, hi = -inf.
    void (*project_minmax)(const double* xs, const double* ys, size_t n, double ax, double ay,
                           double* lo, double* hi);
    // Sum over i of (1 + #{k : d_sq[i] >= t_sq[k]}) for thresholds t1<=t2<=t3,
    // i.e. the total of 1..4 band classes. Integer arithmetic, order-free.
    uint64_t (*band_class_sum)(const double* d_sq, size_t n, double t1_sq, double t2_sq,
                               double t3_sq);
};

enum class Backend { Scalar, Avx2, Neon };

const char* backend_name(Backend b);
bool backend_available(Backend b);

// Active backend: chosen at first use (best available), overridable via the
// HRC_KERNELS env var (scalar|avx2|neon) or force_backend().
Backend active_backend();
void force_backend(Backend b);

const Ops& ops();                  // active backend's table
const Ops& ops_for(Backend b);     // throws hrc::Error if unavailable

namespace detail {
extern const Ops scalar_ops;
#if defined(__x86_64__) || defined(_M_X64)
extern const Ops avx2_ops;
#endif
#if defined(__aarch64__)
extern const Ops neon_ops;
#endif
}  // namespace detail

}  // namespace hrc::kernels

#pragma once

#include <cstddef>

// Data-parallel inner loops behind the cost-matrix builders and the loss
// reductions. Scalar reference implementations always exist; AVX2 (x86-64)
// and NEON (aarch64) variants are selected once at startup when the CPU
// supports them. Set AEROTRACK_KERNELS=scalar in the environment to force the
// reference path.
//
// The row kernels are elementwise and bit-identical across backends (their
// translation units are built with FP contraction off). The reductions
// accumulate in a different order under SIMD, so they agree with the scalar
// path only up to rounding.
namespace aerotrack::kernels {

// out[j] = scale * sqrt((px - xs[j])^2 + (py - ys[j])^2)
using DistRowFn = void (*)(double px, double py, const double* xs,
                           const double* ys, std::size_t n, double scale,
                           double* out);

// out[j] = 1 - IoU(a, box_j), detection boxes as structure-of-arrays
using IouCostRowFn = void (*)(double ax1, double ay1, double ax2, double ay2,
                              const double* x1s, const double* y1s,
                              const double* x2s, const double* y2s,
                              std::size_t n, double* out);

// sum over i of f(a[i] - b[i])
using ReduceFn = double (*)(const double* a, const double* b, std::size_t n);

extern DistRowFn scaled_dist_row;
extern IouCostRowFn iou_cost_row;
extern ReduceFn abs_diff_sum;    // f(d) = |d|
extern ReduceFn sq_diff_sum;     // f(d) = d^2
extern ReduceFn huber_diff_sum;  // f(d) = 0.5 d^2 if |d| < 1 else |d| - 0.5

/// Name of the backend the dispatched pointers resolve to.
const char* active_backend();

namespace scalar {
void scaled_dist_row(double px, double py, const double* xs, const double* ys,
                     std::size_t n, double scale, double* out);
void iou_cost_row(double ax1, double ay1, double ax2, double ay2,
                  const double* x1s, const double* y1s, const double* x2s,
                  const double* y2s, std::size_t n, double* out);
double abs_diff_sum(const double* a, const double* b, std::size_t n);
double sq_diff_sum(const double* a, const double* b, std::size_t n);
double huber_diff_sum(const double* a, const double* b, std::size_t n);
}  // namespace scalar

#if defined(AEROTRACK_HAVE_AVX2)
namespace avx2 {
void scaled_dist_row(double px, double py, const double* xs, const double* ys,
                     std::size_t n, double scale, double* out);
void iou_cost_row(double ax1, double ay1, double ax2, double ay2,
                  const double* x1s, const double* y1s, const double* x2s,
                  const double* y2s, std::size_t n, double* out);
double abs_diff_sum(const double* a, const double* b, std::size_t n);
double sq_diff_sum(const double* a, const double* b, std::size_t n);
double huber_diff_sum(const double* a, const double* b, std::size_t n);
bool supported();
}  // namespace avx2
#endif

#if defined(AEROTRACK_HAVE_NEON)
namespace neon {
void scaled_dist_row(double px, double py, const double* xs, const double* ys,
                     std::size_t n, double scale, double* out);
void iou_cost_row(double ax1, double ay1, double ax2, double ay2,
                  const double* x1s, const double* y1s, const double* x2s,
                  const double* y2s, std::size_t n, double* out);
double abs_diff_sum(const double* a, const double* b, std::size_t n);
double sq_diff_sum(const double* a, const double* b, std::size_t n);
double huber_diff_sum(const double* a, const double* b, std::size_t n);
}  // namespace neon
#endif

}  // namespace aerotrack::kernels

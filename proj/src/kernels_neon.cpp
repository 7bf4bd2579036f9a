#include <arm_neon.h>

#include <cmath>

#include "aerotrack/kernels.hpp"

// 2-wide float64x2 lanes; tails use the scalar reference.
namespace aerotrack::kernels::neon {

namespace {

inline double hsum(float64x2_t v) { return vgetq_lane_f64(v, 0) + vgetq_lane_f64(v, 1); }

}  // namespace

void scaled_dist_row(double px, double py, const double* xs, const double* ys,
                     std::size_t n, double scale, double* out) {
    const float64x2_t vpx = vdupq_n_f64(px);
    const float64x2_t vpy = vdupq_n_f64(py);
    const float64x2_t vs = vdupq_n_f64(scale);
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2) {
        const float64x2_t dx = vsubq_f64(vpx, vld1q_f64(xs + j));
        const float64x2_t dy = vsubq_f64(vpy, vld1q_f64(ys + j));
        const float64x2_t d2 = vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy));
        vst1q_f64(out + j, vmulq_f64(vs, vsqrtq_f64(d2)));
    }
    if (j < n) scalar::scaled_dist_row(px, py, xs + j, ys + j, n - j, scale, out + j);
}

void iou_cost_row(double ax1, double ay1, double ax2, double ay2,
                  const double* x1s, const double* y1s, const double* x2s,
                  const double* y2s, std::size_t n, double* out) {
    const float64x2_t va_x1 = vdupq_n_f64(ax1);
    const float64x2_t va_y1 = vdupq_n_f64(ay1);
    const float64x2_t va_x2 = vdupq_n_f64(ax2);
    const float64x2_t va_y2 = vdupq_n_f64(ay2);
    const float64x2_t varea = vdupq_n_f64((ax2 - ax1) * (ay2 - ay1));
    const float64x2_t zero = vdupq_n_f64(0.0);
    const float64x2_t one = vdupq_n_f64(1.0);
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2) {
        const float64x2_t bx1 = vld1q_f64(x1s + j);
        const float64x2_t by1 = vld1q_f64(y1s + j);
        const float64x2_t bx2 = vld1q_f64(x2s + j);
        const float64x2_t by2 = vld1q_f64(y2s + j);
        float64x2_t iw = vsubq_f64(vminq_f64(va_x2, bx2), vmaxq_f64(va_x1, bx1));
        float64x2_t ih = vsubq_f64(vminq_f64(va_y2, by2), vmaxq_f64(va_y1, by1));
        iw = vmaxq_f64(iw, zero);
        ih = vmaxq_f64(ih, zero);
        const float64x2_t inter = vmulq_f64(iw, ih);
        const float64x2_t area_b =
            vmulq_f64(vsubq_f64(bx2, bx1), vsubq_f64(by2, by1));
        const float64x2_t uni = vsubq_f64(vaddq_f64(varea, area_b), inter);
        const uint64x2_t pos = vcgtq_f64(uni, zero);
        const float64x2_t ratio = vbslq_f64(pos, vdivq_f64(inter, uni), zero);
        vst1q_f64(out + j, vsubq_f64(one, ratio));
    }
    if (j < n) {
        scalar::iou_cost_row(ax1, ay1, ax2, ay2, x1s + j, y1s + j, x2s + j,
                             y2s + j, n - j, out + j);
    }
}

double abs_diff_sum(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        acc = vaddq_f64(acc, vabsq_f64(d));
    }
    double s = hsum(acc);
    if (i < n) s += scalar::abs_diff_sum(a + i, b + i, n - i);
    return s;
}

double sq_diff_sum(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        acc = vaddq_f64(acc, vmulq_f64(d, d));
    }
    double s = hsum(acc);
    if (i < n) s += scalar::sq_diff_sum(a + i, b + i, n - i);
    return s;
}

double huber_diff_sum(const double* a, const double* b, std::size_t n) {
    const float64x2_t one = vdupq_n_f64(1.0);
    const float64x2_t half = vdupq_n_f64(0.5);
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        const float64x2_t ad = vabsq_f64(d);
        const float64x2_t quad = vmulq_f64(half, vmulq_f64(d, d));
        const float64x2_t lin = vsubq_f64(ad, half);
        const uint64x2_t small = vcltq_f64(ad, one);
        acc = vaddq_f64(acc, vbslq_f64(small, quad, lin));
    }
    double s = hsum(acc);
    if (i < n) s += scalar::huber_diff_sum(a + i, b + i, n - i);
    return s;
}

}  // namespace aerotrack::kernels::neon

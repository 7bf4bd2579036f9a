#include <immintrin.h>

#include <cmath>

#include "aerotrack/kernels.hpp"

// 4-wide double lanes. Tails fall back to the scalar reference so every
// element goes through one of two identical code paths.
namespace aerotrack::kernels::avx2 {

bool supported() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d shuf = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

const __m256d kZero = _mm256_setzero_pd();
const __m256d kOne = _mm256_set1_pd(1.0);
const __m256d kHalf = _mm256_set1_pd(0.5);
const __m256d kAbsMask =
    _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));

}  // namespace

void scaled_dist_row(double px, double py, const double* xs, const double* ys,
                     std::size_t n, double scale, double* out) {
    const __m256d vpx = _mm256_set1_pd(px);
    const __m256d vpy = _mm256_set1_pd(py);
    const __m256d vs = _mm256_set1_pd(scale);
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256d dx = _mm256_sub_pd(vpx, _mm256_loadu_pd(xs + j));
        const __m256d dy = _mm256_sub_pd(vpy, _mm256_loadu_pd(ys + j));
        const __m256d d2 =
            _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
        _mm256_storeu_pd(out + j, _mm256_mul_pd(vs, _mm256_sqrt_pd(d2)));
    }
    if (j < n) scalar::scaled_dist_row(px, py, xs + j, ys + j, n - j, scale, out + j);
}

void iou_cost_row(double ax1, double ay1, double ax2, double ay2,
                  const double* x1s, const double* y1s, const double* x2s,
                  const double* y2s, std::size_t n, double* out) {
    const __m256d va_x1 = _mm256_set1_pd(ax1);
    const __m256d va_y1 = _mm256_set1_pd(ay1);
    const __m256d va_x2 = _mm256_set1_pd(ax2);
    const __m256d va_y2 = _mm256_set1_pd(ay2);
    const __m256d varea = _mm256_set1_pd((ax2 - ax1) * (ay2 - ay1));
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256d bx1 = _mm256_loadu_pd(x1s + j);
        const __m256d by1 = _mm256_loadu_pd(y1s + j);
        const __m256d bx2 = _mm256_loadu_pd(x2s + j);
        const __m256d by2 = _mm256_loadu_pd(y2s + j);
        __m256d iw = _mm256_sub_pd(_mm256_min_pd(va_x2, bx2),
                                   _mm256_max_pd(va_x1, bx1));
        __m256d ih = _mm256_sub_pd(_mm256_min_pd(va_y2, by2),
                                   _mm256_max_pd(va_y1, by1));
        iw = _mm256_max_pd(iw, kZero);
        ih = _mm256_max_pd(ih, kZero);
        const __m256d inter = _mm256_mul_pd(iw, ih);
        const __m256d area_b = _mm256_mul_pd(_mm256_sub_pd(bx2, bx1),
                                             _mm256_sub_pd(by2, by1));
        const __m256d uni =
            _mm256_sub_pd(_mm256_add_pd(varea, area_b), inter);
        const __m256d pos = _mm256_cmp_pd(uni, kZero, _CMP_GT_OQ);
        const __m256d ratio =
            _mm256_and_pd(_mm256_div_pd(inter, uni), pos);
        _mm256_storeu_pd(out + j, _mm256_sub_pd(kOne, ratio));
    }
    if (j < n) {
        scalar::iou_cost_row(ax1, ay1, ax2, ay2, x1s + j, y1s + j, x2s + j,
                             y2s + j, n - j, out + j);
    }
}

double abs_diff_sum(const double* a, const double* b, std::size_t n) {
    __m256d acc = kZero;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d =
            _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_add_pd(acc, _mm256_and_pd(d, kAbsMask));
    }
    double s = hsum(acc);
    if (i < n) s += scalar::abs_diff_sum(a + i, b + i, n - i);
    return s;
}

double sq_diff_sum(const double* a, const double* b, std::size_t n) {
    __m256d acc = kZero;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d =
            _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
    double s = hsum(acc);
    if (i < n) s += scalar::sq_diff_sum(a + i, b + i, n - i);
    return s;
}

double huber_diff_sum(const double* a, const double* b, std::size_t n) {
    __m256d acc = kZero;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d =
            _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        const __m256d ad = _mm256_and_pd(d, kAbsMask);
        const __m256d quad = _mm256_mul_pd(kHalf, _mm256_mul_pd(d, d));
        const __m256d lin = _mm256_sub_pd(ad, kHalf);
        const __m256d small = _mm256_cmp_pd(ad, kOne, _CMP_LT_OQ);
        acc = _mm256_add_pd(acc, _mm256_blendv_pd(lin, quad, small));
    }
    double s = hsum(acc);
    if (i < n) s += scalar::huber_diff_sum(a + i, b + i, n - i);
    return s;
}

}  // namespace aerotrack::kernels::avx2

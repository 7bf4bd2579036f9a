#include <algorithm>
#include <cmath>

#include "aerotrack/kernels.hpp"

namespace aerotrack::kernels::scalar {

void scaled_dist_row(double px, double py, const double* xs, const double* ys,
                     std::size_t n, double scale, double* out) {
    for (std::size_t j = 0; j < n; ++j) {
        const double dx = px - xs[j];
        const double dy = py - ys[j];
        out[j] = scale * std::sqrt(dx * dx + dy * dy);
    }
}

void iou_cost_row(double ax1, double ay1, double ax2, double ay2,
                  const double* x1s, const double* y1s, const double* x2s,
                  const double* y2s, std::size_t n, double* out) {
    const double area_a = (ax2 - ax1) * (ay2 - ay1);
    for (std::size_t j = 0; j < n; ++j) {
        double iw = std::min(ax2, x2s[j]) - std::max(ax1, x1s[j]);
        double ih = std::min(ay2, y2s[j]) - std::max(ay1, y1s[j]);
        iw = std::max(iw, 0.0);
        ih = std::max(ih, 0.0);
        const double inter = iw * ih;
        const double area_b = (x2s[j] - x1s[j]) * (y2s[j] - y1s[j]);
        const double uni = area_a + area_b - inter;
        out[j] = 1.0 - (uni > 0.0 ? inter / uni : 0.0);
    }
}

double abs_diff_sum(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::abs(a[i] - b[i]);
    return acc;
}

double sq_diff_sum(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

double huber_diff_sum(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        const double ad = std::abs(d);
        acc += ad < 1.0 ? 0.5 * d * d : ad - 0.5;
    }
    return acc;
}

}  // namespace aerotrack::kernels::scalar

#include "aerotrack/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace aerotrack {

double iou(const BoundingBox& a, const BoundingBox& b) {
    // Same operation order as the kernels' row variant so the two paths agree
    // bit for bit.
    double iw = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
    double ih = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
    iw = std::max(iw, 0.0);
    ih = std::max(ih, 0.0);
    const double inter = iw * ih;
    const double uni = a.area() + b.area() - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

BoundingBox enlarge(const BoundingBox& b, double factor) {
    if (!(factor > 0.0)) {
        throw std::invalid_argument("enlarge: factor must be positive");
    }
    return BoundingBox::from_center(b.center(), b.width() * factor,
                                    b.height() * factor);
}

double center_distance_m(const BoundingBox& a, const BoundingBox& b, double gsd) {
    if (!(gsd > 0.0)) {
        throw std::invalid_argument("center_distance_m: gsd must be positive");
    }
    const Vec2 d = a.center() - b.center();
    return gsd * std::sqrt(d.x * d.x + d.y * d.y);
}

}  // namespace aerotrack

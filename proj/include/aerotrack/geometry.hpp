#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace aerotrack {

/// Opaque object identity, unique within one trajectory set. Never reused.
using ObjectId = std::int64_t;

/// 2D point / vector in pixel coordinates (image frame, origin top-left).
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }
    double norm() const { return std::sqrt(x * x + y * y); }
};

/// Axis-aligned box, continuous (sub-pixel) coordinates, corners inclusive of
/// orientation: x1 <= x2, y1 <= y2. Zero-area (point) boxes are legal.
struct BoundingBox {
    double x1 = 0.0;
    double y1 = 0.0;
    double x2 = 0.0;
    double y2 = 0.0;

    double width() const { return x2 - x1; }
    double height() const { return y2 - y1; }
    double area() const { return width() * height(); }
    Vec2 center() const { return {0.5 * (x1 + x2), 0.5 * (y1 + y2)}; }

    bool valid() const {
        return std::isfinite(x1) && std::isfinite(y1) && std::isfinite(x2) &&
               std::isfinite(y2) && x1 <= x2 && y1 <= y2;
    }

    static BoundingBox from_center(Vec2 c, double w, double h) {
        return {c.x - 0.5 * w, c.y - 0.5 * h, c.x + 0.5 * w, c.y + 0.5 * h};
    }

    bool operator==(const BoundingBox& o) const {
        return x1 == o.x1 && y1 == o.y1 && x2 == o.x2 && y2 == o.y2;
    }
};

/// A per-frame observation fed to the trackers.
struct Detection {
    std::int64_t frame = 0;
    BoundingBox box;
    std::optional<double> confidence;  // unit interval when present
};

/// Sequence-level metadata. The ground sampling distance converts pixel
/// distances to meters.
struct SequenceMeta {
    std::string name;
    double gsd = 0.12;        // meters per pixel
    double frame_rate = 2.0;  // Hz
    int width = 0;            // image pixels
    int height = 0;
};

/// Finalized per-frame positions of one object.
using Trajectory = std::map<std::int64_t, BoundingBox>;
using TrajectoryMap = std::map<ObjectId, Trajectory>;

/// Intersection over union of two boxes. Returns 0 for disjoint boxes and for
/// degenerate unions (both boxes zero-area).
double iou(const BoundingBox& a, const BoundingBox& b);

/// Scales a box about its center. Throws std::invalid_argument on factor <= 0.
BoundingBox enlarge(const BoundingBox& b, double factor);

/// GSD-normalized Euclidean distance between box centers, in meters.
double center_distance_m(const BoundingBox& a, const BoundingBox& b, double gsd);

}  // namespace aerotrack

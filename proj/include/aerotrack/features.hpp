#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "aerotrack/geometry.hpp"

namespace aerotrack {

/// Directed star graph around one object: vectors point from each of the up
/// to eight nearest in-radius neighbors to the target, zero-padded, sorted by
/// ascending distance (ties by input index).
struct NeighborGraph {
    Vec2 target;
    std::array<Vec2, 8> vectors{};
    int count = 0;  // non-pad entries

    /// [x, y, x_v1, y_v1, ..., x_v8, y_v8]
    std::array<double, 18> flatten() const;
};

/// The last up to five flattened graphs as columns, oldest first, trailing
/// columns zero. Always exactly 18 x 5.
struct GraphHistoryMatrix {
    static constexpr int kRows = 18;
    static constexpr int kCols = 5;
    std::array<std::array<double, kCols>, kRows> m{};

    double at(int r, int c) const { return m[r][c]; }
};

/// Square search patch around a box: side = max(w, h) * context_factor,
/// mapped to a fixed 227 px network input.
struct PatchGeometry {
    static constexpr double kInputSide = 227.0;
    BoundingBox patch;  // image coordinates
    double side = 0.0;  // px
    double scale = 0.0; // kInputSide / side
};

/// Up to the eight nearest neighbors within radius_m of the target.
/// Radius is specified in meters and converted through the GSD
/// (7.5 m is 50 px at 0.15 m/px).
NeighborGraph neighbor_graph(Vec2 target, const std::vector<Vec2>& others,
                             double gsd, double radius_m = 7.5);

/// Stacks up to five graphs (oldest first) into an 18 x 5 matrix; rejects
/// longer input.
GraphHistoryMatrix graph_history(const std::vector<NeighborGraph>& graphs);

/// Consecutive differences of the last positions, oldest first, left-padded
/// with zeros to exactly five movement vectors.
std::array<Vec2, 5> movement_history(const std::vector<Vec2>& positions);

/// Throws std::invalid_argument on non-positive factor or zero-extent box.
PatchGeometry patch_geometry(const BoundingBox& box, double context_factor);

Vec2 patch_to_image(Vec2 patch_px, const PatchGeometry& g);
Vec2 image_to_patch(Vec2 image_px, const PatchGeometry& g);

enum class LossKind { L1, L2, Huber };

/// L1: sum |x_i - y_i|; L2: sum (x_i - y_i)^2; Huber: per-element
/// 0.5 d^2 below |d| = 1, |d| - 0.5 above. Length mismatch rejected.
double loss(LossKind kind, const std::vector<double>& x,
            const std::vector<double>& y);

/// CSV exports for downstream consumers: the graph-history matrix as one row
/// per feature dimension, movement histories as one row per track.
std::string graph_history_csv(const GraphHistoryMatrix& g);
std::string movement_history_csv(
    const std::vector<std::array<Vec2, 5>>& histories);

}  // namespace aerotrack

#include "aerotrack/features.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "aerotrack/kernels.hpp"

namespace aerotrack {

std::array<double, 18> NeighborGraph::flatten() const {
    std::array<double, 18> out{};
    out[0] = target.x;
    out[1] = target.y;
    for (int i = 0; i < 8; ++i) {
        out[2 + 2 * i] = vectors[i].x;
        out[3 + 2 * i] = vectors[i].y;
    }
    return out;
}

NeighborGraph neighbor_graph(Vec2 target, const std::vector<Vec2>& others,
                             double gsd, double radius_m) {
    if (!(gsd > 0.0)) {
        throw std::invalid_argument("neighbor_graph: gsd must be positive");
    }
    const double radius_px = radius_m / gsd;

    struct Cand {
        double dist;
        std::size_t index;
    };
    std::vector<Cand> cands;
    cands.reserve(others.size());
    for (std::size_t i = 0; i < others.size(); ++i) {
        const double d = (target - others[i]).norm();
        if (d <= radius_px) cands.push_back({d, i});
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        return a.dist != b.dist ? a.dist < b.dist : a.index < b.index;
    });

    NeighborGraph g;
    g.target = target;
    g.count = static_cast<int>(std::min<std::size_t>(cands.size(), 8));
    for (int i = 0; i < g.count; ++i) {
        g.vectors[i] = target - others[cands[i].index];
    }
    return g;
}

GraphHistoryMatrix graph_history(const std::vector<NeighborGraph>& graphs) {
    if (graphs.size() > 5) {
        throw std::invalid_argument("graph_history: more than 5 graphs");
    }
    GraphHistoryMatrix h;
    for (std::size_t c = 0; c < graphs.size(); ++c) {
        const auto flat = graphs[c].flatten();
        for (int r = 0; r < GraphHistoryMatrix::kRows; ++r) {
            h.m[r][c] = flat[r];
        }
    }
    return h;
}

std::array<Vec2, 5> movement_history(const std::vector<Vec2>& positions) {
    std::array<Vec2, 5> out{};
    if (positions.size() < 2) return out;
    const std::size_t diffs = std::min<std::size_t>(positions.size() - 1, 5);
    const std::size_t first = positions.size() - 1 - diffs;
    for (std::size_t i = 0; i < diffs; ++i) {
        out[5 - diffs + i] = positions[first + i + 1] - positions[first + i];
    }
    return out;
}

PatchGeometry patch_geometry(const BoundingBox& box, double context_factor) {
    if (!(context_factor > 0.0)) {
        throw std::invalid_argument("patch_geometry: context_factor must be positive");
    }
    const double extent = std::max(box.width(), box.height());
    if (!(extent > 0.0)) {
        throw std::invalid_argument("patch_geometry: box has zero extent");
    }
    PatchGeometry g;
    g.side = extent * context_factor;
    g.patch = BoundingBox::from_center(box.center(), g.side, g.side);
    g.scale = PatchGeometry::kInputSide / g.side;
    return g;
}

Vec2 patch_to_image(Vec2 patch_px, const PatchGeometry& g) {
    return {g.patch.x1 + patch_px.x / g.scale, g.patch.y1 + patch_px.y / g.scale};
}

Vec2 image_to_patch(Vec2 image_px, const PatchGeometry& g) {
    return {(image_px.x - g.patch.x1) * g.scale,
            (image_px.y - g.patch.y1) * g.scale};
}

double loss(LossKind kind, const std::vector<double>& x,
            const std::vector<double>& y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("loss: length mismatch");
    }
    switch (kind) {
        case LossKind::L1:
            return kernels::abs_diff_sum(x.data(), y.data(), x.size());
        case LossKind::L2:
            return kernels::sq_diff_sum(x.data(), y.data(), x.size());
        case LossKind::Huber:
            return kernels::huber_diff_sum(x.data(), y.data(), x.size());
    }
    throw std::invalid_argument("loss: unknown kind");
}

std::string graph_history_csv(const GraphHistoryMatrix& g) {
    std::ostringstream out;
    for (int r = 0; r < GraphHistoryMatrix::kRows; ++r) {
        for (int c = 0; c < GraphHistoryMatrix::kCols; ++c) {
            if (c) out << ',';
            out << g.m[r][c];
        }
        out << '\n';
    }
    return out.str();
}

std::string movement_history_csv(
    const std::vector<std::array<Vec2, 5>>& histories) {
    std::ostringstream out;
    for (const auto& h : histories) {
        for (int i = 0; i < 5; ++i) {
            if (i) out << ',';
            out << h[i].x << ',' << h[i].y;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace aerotrack

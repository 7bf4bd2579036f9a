#pragma once

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "aerotrack/geometry.hpp"

namespace aerotrack {

/// Sentinel for gated-out cells. Kept out of every cost sum.
inline constexpr double kInfeasible = std::numeric_limits<double>::infinity();

inline bool is_feasible(double cost) { return cost != kInfeasible; }

/// Rectangular table of non-negative costs with a distinguished infeasible
/// value. Row-major storage.
class CostMatrix {
public:
    CostMatrix() = default;
    CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);

    /// Convenience for literals in tests: ragged input rejected.
    static CostMatrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& at(std::size_t r, std::size_t c) { return cells_[r * cols_ + c]; }
    double at(std::size_t r, std::size_t c) const { return cells_[r * cols_ + c]; }

    double* row_data(std::size_t r) { return cells_.data() + r * cols_; }
    const double* row_data(std::size_t r) const { return cells_.data() + r * cols_; }

    bool feasible(std::size_t r, std::size_t c) const { return is_feasible(at(r, c)); }

    /// Throws std::invalid_argument if any cell is negative or NaN.
    void validate() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> cells_;
};

/// One-to-one row/column matching. Pairs are sorted by row index; unmatched
/// lists ascend. total_cost sums exactly the matched cells.
struct Assignment {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<std::size_t> unmatched_rows;
    std::vector<std::size_t> unmatched_cols;
    double total_cost = 0.0;
};

/// Cell (i,j) = gsd * Euclidean pixel distance between prediction i and
/// detection j, in meters.
CostMatrix euclidean_cost_matrix(const std::vector<Vec2>& predictions,
                                 const std::vector<Vec2>& detections,
                                 double gsd);

/// Cell (i,j) = 1 - IoU(track_box_i, det_box_j).
CostMatrix iou_cost_matrix(const std::vector<BoundingBox>& track_boxes,
                           const std::vector<BoundingBox>& det_boxes);

/// Cells strictly above the threshold become infeasible; others unchanged.
CostMatrix gate(CostMatrix m, double threshold);

/// Minimum-cost matching over feasible cells, maximizing match count first.
/// Deterministic; rows and columns that cannot be feasibly matched end up in
/// the unmatched sets. Rectangular and empty matrices are fine.
Assignment solve_assignment(const CostMatrix& m);

/// Exhaustive oracle over all injective partial matchings of maximal feasible
/// cardinality. Rejects max(rows, cols) > 8.
Assignment solve_assignment_bruteforce(const CostMatrix& m);

}  // namespace aerotrack

#include "aerotrack/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <stdexcept>

#include "aerotrack/kernels.hpp"

namespace aerotrack {

namespace {
constexpr std::size_t kNone = static_cast<std::size_t>(-1);
}

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), cells_(rows * cols, fill) {}

CostMatrix CostMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.front().size();
    CostMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (rows[i].size() != c) {
            throw std::invalid_argument("CostMatrix::from_rows: ragged rows");
        }
        std::copy(rows[i].begin(), rows[i].end(), m.row_data(i));
    }
    return m;
}

void CostMatrix::validate() const {
    for (double c : cells_) {
        if (std::isnan(c) || c < 0.0) {
            throw std::invalid_argument(
                "CostMatrix: cells must be >= 0 or infeasible");
        }
    }
}

CostMatrix euclidean_cost_matrix(const std::vector<Vec2>& predictions,
                                 const std::vector<Vec2>& detections,
                                 double gsd) {
    if (!(gsd > 0.0)) {
        throw std::invalid_argument("euclidean_cost_matrix: gsd must be positive");
    }
    CostMatrix m(predictions.size(), detections.size());
    std::vector<double> xs(detections.size()), ys(detections.size());
    for (std::size_t j = 0; j < detections.size(); ++j) {
        xs[j] = detections[j].x;
        ys[j] = detections[j].y;
    }
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        kernels::scaled_dist_row(predictions[i].x, predictions[i].y, xs.data(),
                                 ys.data(), detections.size(), gsd,
                                 m.row_data(i));
    }
    return m;
}

CostMatrix iou_cost_matrix(const std::vector<BoundingBox>& track_boxes,
                           const std::vector<BoundingBox>& det_boxes) {
    for (const auto& b : track_boxes) {
        if (!b.valid()) throw std::invalid_argument("iou_cost_matrix: invalid track box");
    }
    for (const auto& b : det_boxes) {
        if (!b.valid()) throw std::invalid_argument("iou_cost_matrix: invalid det box");
    }
    CostMatrix m(track_boxes.size(), det_boxes.size());
    const std::size_t n = det_boxes.size();
    std::vector<double> x1s(n), y1s(n), x2s(n), y2s(n);
    for (std::size_t j = 0; j < n; ++j) {
        x1s[j] = det_boxes[j].x1;
        y1s[j] = det_boxes[j].y1;
        x2s[j] = det_boxes[j].x2;
        y2s[j] = det_boxes[j].y2;
    }
    for (std::size_t i = 0; i < track_boxes.size(); ++i) {
        const auto& t = track_boxes[i];
        kernels::iou_cost_row(t.x1, t.y1, t.x2, t.y2, x1s.data(), y1s.data(),
                              x2s.data(), y2s.data(), n, m.row_data(i));
    }
    return m;
}

CostMatrix gate(CostMatrix m, double threshold) {
    if (!(threshold >= 0.0)) {
        throw std::invalid_argument("gate: threshold must be >= 0");
    }
    for (std::size_t r = 0; r < m.rows(); ++r) {
        double* row = m.row_data(r);
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (row[c] > threshold) row[c] = kInfeasible;
        }
    }
    return m;
}

namespace {

Assignment collect(const CostMatrix& m, const std::vector<std::size_t>& match_row,
                   const std::vector<std::size_t>& match_col) {
    Assignment a;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        if (match_row[r] == kNone) {
            a.unmatched_rows.push_back(r);
        } else {
            a.pairs.emplace_back(r, match_row[r]);
            a.total_cost += m.at(r, match_row[r]);
        }
    }
    for (std::size_t c = 0; c < m.cols(); ++c) {
        if (match_col[c] == kNone) a.unmatched_cols.push_back(c);
    }
    return a;
}

}  // namespace

// Shortest augmenting path with dual potentials. Every row also owns a
// virtual "stay unmatched" column priced above the total of all finite costs,
// so each augmentation succeeds and the result maximizes the number of real
// matches first and minimizes their cost second. Which rows end up on their
// virtual column is a global optimum, not an artifact of processing order.
Assignment solve_assignment(const CostMatrix& m) {
    m.validate();
    const std::size_t R = m.rows();
    const std::size_t C = m.cols();

    double big = 1.0;
    for (std::size_t r = 0; r < R; ++r) {
        const double* row = m.row_data(r);
        for (std::size_t j = 0; j < C; ++j) {
            if (is_feasible(row[j])) big += row[j];
        }
    }

    const std::size_t cols = C + R;  // real columns then one dummy per row
    std::vector<std::size_t> match_row(R, kNone), match_col(cols, kNone);
    std::vector<double> u(R, 0.0), v(cols, 0.0);

    std::vector<double> dist(cols);
    std::vector<std::size_t> path(cols);
    std::vector<char> visited(cols);
    std::vector<std::size_t> settled;
    std::vector<std::size_t> tree_rows;
    using Entry = std::pair<double, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;

    auto relax_row = [&](std::size_t i, double base) {
        const double* row = m.row_data(i);
        for (std::size_t j = 0; j < C; ++j) {
            if (visited[j] || !is_feasible(row[j])) continue;
            const double nd = base + row[j] - u[i] - v[j];
            if (nd < dist[j]) {
                dist[j] = nd;
                path[j] = i;
                heap.emplace(nd, j);
            }
        }
        const std::size_t dummy = C + i;
        if (!visited[dummy]) {
            const double nd = base + big - u[i] - v[dummy];
            if (nd < dist[dummy]) {
                dist[dummy] = nd;
                path[dummy] = i;
                heap.emplace(nd, dummy);
            }
        }
    };

    for (std::size_t r = 0; r < R; ++r) {
        std::fill(dist.begin(), dist.end(), kInfeasible);
        std::fill(visited.begin(), visited.end(), 0);
        settled.clear();
        tree_rows.clear();
        while (!heap.empty()) heap.pop();

        relax_row(r, 0.0);

        std::size_t sink = kNone;
        double sink_dist = 0.0;
        while (!heap.empty()) {
            const auto [d, j] = heap.top();
            heap.pop();
            if (visited[j] || d > dist[j]) continue;
            visited[j] = 1;
            settled.push_back(j);
            if (match_col[j] == kNone) {
                sink = j;
                sink_dist = d;
                break;
            }
            const std::size_t i = match_col[j];
            tree_rows.push_back(i);
            relax_row(i, d);
        }
        // The own dummy column is always reachable, so a sink always exists.

        u[r] += sink_dist;
        for (std::size_t i : tree_rows) u[i] += sink_dist - dist[match_row[i]];
        for (std::size_t j : settled) v[j] -= sink_dist - dist[j];

        std::size_t j = sink;
        while (true) {
            const std::size_t i = path[j];
            const std::size_t next = (i == r) ? kNone : match_row[i];
            match_row[i] = j;
            match_col[j] = i;
            if (i == r) break;
            j = next;
        }
    }

    for (std::size_t r = 0; r < R; ++r) {
        if (match_row[r] >= C) match_row[r] = kNone;  // parked on the dummy
    }
    return collect(m, match_row, match_col);
}

namespace {

// Maximum feasible matching cardinality (Kuhn's augmenting paths); bounds the
// brute-force skip budget.
std::size_t max_cardinality(const CostMatrix& m) {
    const std::size_t R = m.rows();
    const std::size_t C = m.cols();
    std::vector<std::size_t> match_col(C, kNone);
    std::vector<char> seen(C);
    std::size_t card = 0;

    auto try_row = [&](auto&& self, std::size_t r) -> bool {
        for (std::size_t j = 0; j < C; ++j) {
            if (seen[j] || !m.feasible(r, j)) continue;
            seen[j] = 1;
            if (match_col[j] == kNone || self(self, match_col[j])) {
                match_col[j] = r;
                return true;
            }
        }
        return false;
    };

    for (std::size_t r = 0; r < R; ++r) {
        std::fill(seen.begin(), seen.end(), 0);
        if (try_row(try_row, r)) ++card;
    }
    return card;
}

struct BruteState {
    const CostMatrix* m;
    std::size_t rows, cols;
    std::vector<std::size_t> choice;       // per row: col index or kNone
    std::vector<std::size_t> best_choice;
    double best_cost = 0.0;
    bool have_best = false;

    // Lexicographic order of the per-row column vector, unmatched last.
    bool lex_less(const std::vector<std::size_t>& a,
                  const std::vector<std::size_t>& b) const {
        for (std::size_t r = 0; r < rows; ++r) {
            const std::size_t ca = a[r] == kNone ? cols : a[r];
            const std::size_t cb = b[r] == kNone ? cols : b[r];
            if (ca != cb) return ca < cb;
        }
        return false;
    }

    void recurse(std::size_t r, std::uint32_t used, int skips_left, double cost) {
        if (r == rows) {
            if (!have_best || cost < best_cost ||
                (cost == best_cost && lex_less(choice, best_choice))) {
                best_cost = cost;
                best_choice = choice;
                have_best = true;
            }
            return;
        }
        for (std::size_t j = 0; j < cols; ++j) {
            if ((used >> j) & 1u) continue;
            const double c = m->at(r, j);
            if (!is_feasible(c)) continue;
            choice[r] = j;
            recurse(r + 1, used | (1u << j), skips_left, cost + c);
        }
        if (skips_left > 0) {
            choice[r] = kNone;
            recurse(r + 1, used, skips_left - 1, cost);
        }
        choice[r] = kNone;
    }
};

}  // namespace

Assignment solve_assignment_bruteforce(const CostMatrix& m) {
    m.validate();
    if (std::max(m.rows(), m.cols()) > 8) {
        throw std::invalid_argument(
            "solve_assignment_bruteforce: dimensions above 8 rejected");
    }
    const std::size_t K = max_cardinality(m);

    BruteState st;
    st.m = &m;
    st.rows = m.rows();
    st.cols = m.cols();
    st.choice.assign(m.rows(), kNone);
    st.recurse(0, 0, static_cast<int>(m.rows() - K), 0.0);

    std::vector<std::size_t> match_row = st.have_best
                                             ? st.best_choice
                                             : std::vector<std::size_t>(m.rows(), kNone);
    std::vector<std::size_t> match_col(m.cols(), kNone);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        if (match_row[r] != kNone) match_col[match_row[r]] = r;
    }
    return collect(m, match_row, match_col);
}

}  // namespace aerotrack

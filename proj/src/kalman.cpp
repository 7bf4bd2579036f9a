#include "aerotrack/kalman.hpp"

#include <cmath>

namespace aerotrack {

namespace {

// F = [I2 I2; 0 I2]: x += vx, y += vy.
// P' = F P F^T computed blockwise; with P = [A B; B^T D] (2x2 blocks):
//   A' = A + B + B^T + D, B' = B + D, D' = D.
inline double& el(std::array<double, 16>& p, int r, int c) { return p[r * 4 + c]; }
inline double el(const std::array<double, 16>& p, int r, int c) { return p[r * 4 + c]; }

void symmetrize(std::array<double, 16>& p) {
    for (int r = 0; r < 4; ++r) {
        for (int c = r + 1; c < 4; ++c) {
            const double m = 0.5 * (el(p, r, c) + el(p, c, r));
            el(p, r, c) = m;
            el(p, c, r) = m;
        }
    }
}

}  // namespace

KalmanState kalman_init(Vec2 position, const MotionNoiseConfig& cfg) {
    KalmanState s;
    s.mean = {position.x, position.y, 0.0, 0.0};
    const double vel_prior = 1000.0 * std::max(cfg.measurement_var, 1.0);
    el(s.cov, 0, 0) = cfg.measurement_var;
    el(s.cov, 1, 1) = cfg.measurement_var;
    el(s.cov, 2, 2) = vel_prior;
    el(s.cov, 3, 3) = vel_prior;
    return s;
}

KalmanState kalman_predict(const KalmanState& s, const MotionNoiseConfig& cfg) {
    KalmanState out;
    out.mean = {s.mean[0] + s.mean[2], s.mean[1] + s.mean[3], s.mean[2],
                s.mean[3]};

    // P' = F P F^T + Q, with F acting on the (pos, vel) blocks.
    const auto& p = s.cov;
    auto& q = out.cov;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            el(q, a, b) = el(p, a, b) + el(p, a, b + 2) + el(p, a + 2, b) +
                          el(p, a + 2, b + 2);
            el(q, a, b + 2) = el(p, a, b + 2) + el(p, a + 2, b + 2);
            el(q, a + 2, b) = el(p, a + 2, b) + el(p, a + 2, b + 2);
            el(q, a + 2, b + 2) = el(p, a + 2, b + 2);
        }
    }
    el(q, 0, 0) += cfg.process_pos_var;
    el(q, 1, 1) += cfg.process_pos_var;
    el(q, 2, 2) += cfg.process_vel_var;
    el(q, 3, 3) += cfg.process_vel_var;
    symmetrize(q);
    return out;
}

KalmanState kalman_update(const KalmanState& s, Vec2 observation,
                          const MotionNoiseConfig& cfg) {
    const auto& p = s.cov;
    const double r = cfg.measurement_var;

    // S = H P H^T + R with H observing (x, y).
    const double s00 = el(p, 0, 0) + r;
    const double s01 = el(p, 0, 1);
    const double s10 = el(p, 1, 0);
    const double s11 = el(p, 1, 1) + r;
    const double det = s00 * s11 - s01 * s10;
    if (!(std::isfinite(det)) || std::abs(det) < 1e-300) {
        return s;  // exactly determined: innovation carries no usable information
    }
    const double i00 = s11 / det;
    const double i01 = -s01 / det;
    const double i10 = -s10 / det;
    const double i11 = s00 / det;

    // K = P H^T S^-1 (4x2); column k of P H^T is P[:,k] for k in {0,1}.
    std::array<double, 8> k{};
    for (int row = 0; row < 4; ++row) {
        const double ph0 = el(p, row, 0);
        const double ph1 = el(p, row, 1);
        k[row * 2 + 0] = ph0 * i00 + ph1 * i10;
        k[row * 2 + 1] = ph0 * i01 + ph1 * i11;
    }

    const double innov_x = observation.x - s.mean[0];
    const double innov_y = observation.y - s.mean[1];

    KalmanState out;
    for (int row = 0; row < 4; ++row) {
        out.mean[row] =
            s.mean[row] + k[row * 2 + 0] * innov_x + k[row * 2 + 1] * innov_y;
    }

    // Joseph form: P' = (I - K H) P (I - K H)^T + K R K^T.
    std::array<double, 16> a{};  // I - K H (only first two columns differ from I)
    for (int row = 0; row < 4; ++row) {
        for (int col = 0; col < 4; ++col) {
            double val = (row == col) ? 1.0 : 0.0;
            if (col < 2) val -= k[row * 2 + col];
            el(a, row, col) = val;
        }
    }
    std::array<double, 16> ap{};
    for (int row = 0; row < 4; ++row) {
        for (int col = 0; col < 4; ++col) {
            double acc = 0.0;
            for (int t = 0; t < 4; ++t) acc += el(a, row, t) * el(p, t, col);
            el(ap, row, col) = acc;
        }
    }
    for (int row = 0; row < 4; ++row) {
        for (int col = 0; col < 4; ++col) {
            double acc = 0.0;
            for (int t = 0; t < 4; ++t) acc += el(ap, row, t) * el(a, col, t);
            acc += r * (k[row * 2 + 0] * k[col * 2 + 0] +
                        k[row * 2 + 1] * k[col * 2 + 1]);
            el(out.cov, row, col) = acc;
        }
    }
    symmetrize(out.cov);
    return out;
}

Vec2 linear_predict(Vec2 p, Vec2 v_last, double k) {
    return {p.x + k * v_last.x, p.y + k * v_last.y};
}

}  // namespace aerotrack

#pragma once

#include <array>

#include "aerotrack/geometry.hpp"

namespace aerotrack {

/// Noise magnitudes for the constant-velocity filter, all in px^2. Defaults
/// keep gating at aerial GSDs well above the filter noise floor.
struct MotionNoiseConfig {
    double process_pos_var = 1.0;
    double process_vel_var = 0.25;
    double measurement_var = 1.0;
};

/// Constant-velocity filter state: mean (x, y, vx, vy) in px and px/frame,
/// 4x4 symmetric PSD covariance (row-major).
struct KalmanState {
    std::array<double, 4> mean{};
    std::array<double, 16> cov{};

    Vec2 position() const { return {mean[0], mean[1]}; }
    Vec2 velocity() const { return {mean[2], mean[3]}; }
};

/// State at the observed position with zero velocity. The velocity prior is
/// uninformative: 1000 * max(measurement_var, 1) so a zero measurement
/// variance still leaves the velocity free to be learned.
KalmanState kalman_init(Vec2 position, const MotionNoiseConfig& cfg);

/// One constant-velocity step (dt fixed at one frame).
KalmanState kalman_predict(const KalmanState& s, const MotionNoiseConfig& cfg);

/// Linear measurement update observing (x, y). Joseph-form covariance update;
/// a numerically singular innovation (exactly determined state with an exact
/// measurement) leaves the state unchanged.
KalmanState kalman_update(const KalmanState& s, Vec2 observation,
                          const MotionNoiseConfig& cfg);

/// Single-step linear motion estimate: p + k * v_last. k scales the influence
/// of the last movement.
Vec2 linear_predict(Vec2 p, Vec2 v_last, double k);

}  // namespace aerotrack

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "aerotrack/geometry.hpp"
#include "aerotrack/kalman.hpp"

namespace aerotrack {

/// Euclidean: GSD-normalized center-distance gating (meters).
/// Iou: 1 - IoU cost gating over (optionally enlarged) boxes.
enum class TrackerMode { Euclidean, Iou };

/// AllFrames: every unmatched detection spawns a track. FirstFrameOnly:
/// ground-truth style initialization on the first stepped frame.
enum class SpawnPolicy { AllFrames, FirstFrameOnly };

struct TrackerConfig {
    TrackerMode mode = TrackerMode::Euclidean;
    /// Meters in Euclidean mode (default 17 * gsd), cost in [0, 1] in Iou
    /// mode (default 0.99, i.e. any positive overlap).
    std::optional<double> gate_threshold;
    int max_age = 3;
    double box_enlarge_factor = 1.0;
    /// Euclidean mode: only tracks matched in the previous frame enter the
    /// cost matrix; lost tracks coast until they expire.
    bool require_prev_match = true;
    SpawnPolicy spawn_policy = SpawnPolicy::AllFrames;
    MotionNoiseConfig noise;
};

/// Live tracker record. Box size is fixed at spawn; only the center moves.
struct TrackState {
    ObjectId id = 0;
    KalmanState kalman;
    BoundingBox box;
    int age = 0;  // frames since last successful match
    std::vector<Vec2> history;  // up to 5 movement vectors, oldest first
    std::int64_t born = 0;
    std::vector<Vec2> last_positions;  // per-frame centers
};

struct TrackingResult {
    TrajectoryMap trajectories;
    SequenceMeta meta;
    TrackerConfig config;
};

/// Per-step introspection (tests, sweeps).
struct StepStats {
    std::size_t candidates = 0;
    std::size_t matched = 0;
    std::size_t spawned = 0;
    std::size_t removed = 0;
    std::vector<double> matched_costs;  // gated-matrix costs of matched pairs
};

/// Online track lifecycle: predict, gate, assign, update/coast, expire,
/// spawn. One exclusive owner steps a tracker through increasing frames.
class Tracker {
public:
    /// Throws std::invalid_argument on inconsistent config or meta.
    Tracker(TrackerConfig cfg, SequenceMeta meta);

    /// Resolved gate (config override or the mode default).
    double gate_threshold() const { return gate_; }

    /// Advances one frame and returns all live (id, box) pairs.
    std::vector<std::pair<ObjectId, BoundingBox>> step(
        std::int64_t frame, const std::vector<Detection>& detections);

    TrackingResult finalize() const;

    const std::vector<TrackState>& tracks() const { return tracks_; }
    const StepStats& last_stats() const { return stats_; }

private:
    TrackerConfig cfg_;
    SequenceMeta meta_;
    double gate_ = 0.0;
    std::vector<TrackState> tracks_;
    ObjectId next_id_ = 0;
    std::int64_t last_frame_ = -1;
    bool stepped_ = false;
    StepStats stats_;
    TrackingResult result_;
};

/// Steps a fresh tracker through frames 0..frames-1 (frames without
/// detections still age the tracks).
TrackingResult track_detections(const TrackerConfig& cfg,
                                const SequenceMeta& meta,
                                const std::vector<std::vector<Detection>>& frames);

/// Same over a sparse frame->detections map; runs through every frame index
/// from 0 to the larger of the last keyed frame and frame_count_hint - 1.
TrackingResult track_detections(
    const TrackerConfig& cfg, const SequenceMeta& meta,
    const std::map<std::int64_t, std::vector<Detection>>& frames,
    std::int64_t frame_count_hint = 0);

}  // namespace aerotrack

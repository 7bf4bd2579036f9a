#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "aerotrack/geometry.hpp"

namespace aerotrack {

/// Rectangle in which detections drop out (bridges, trees, shadow).
struct OcclusionZone {
    BoundingBox zone;
    double dropout = 1.0;
};

enum class ObjectClass { Pedestrian, Vehicle };
enum class Placement { UniformRandom, Grid };

/// IndependentHeadings: every object draws its own speed and heading and
/// wanders with per-frame heading noise. SharedVelocity: one velocity vector
/// for all objects (pairwise distances stay constant); heading noise ignored.
enum class MotionModel { IndependentHeadings, SharedVelocity };

/// Deterministic straight-line object; overrides procedural generation.
struct ScriptedObject {
    Vec2 start;
    Vec2 velocity;  // px/frame
    std::int64_t born = 0;
};

struct ScenarioConfig {
    SequenceMeta meta{"sim", 0.12, 2.0, 1024, 1024};
    int n_objects = 15;
    int frames = 30;
    ObjectClass object_class = ObjectClass::Pedestrian;
    double speed_mean_mps = 1.4;
    double speed_sigma_mps = 0.3;   // draws clamped to mean +- 3 sigma, floored at 0
    double stationary_fraction = 0.0;  // crowd members standing still
    double heading_noise_sigma = 0.1;  // radians per frame
    double group_fraction = 0.0;       // fraction of objects moving in groups of 4
    double group_cohesion_px = 0.5;    // member jitter around the group path
    double entry_exit_prob = 0.0;      // per-frame chance of late entry; exits replace reflection
    std::vector<OcclusionZone> occlusions;  // applied by corrupt()
    double box_w = 4.0;
    double box_h = 4.0;
    Placement placement = Placement::UniformRandom;
    MotionModel motion = MotionModel::IndependentHeadings;
    double grid_spacing_px = 51.0;  // Placement::Grid
    std::vector<ScriptedObject> scripted;  // non-empty: ignore n_objects/placement
    std::uint64_t seed = 1;
};

struct Scenario {
    TrajectoryMap ground_truth;
    SequenceMeta meta;
    ScenarioConfig config;
};

struct NoiseConfig {
    double jitter_sigma = 0.0;  // px, Gaussian center jitter
    double p_miss = 0.0;
    double clutter_rate = 0.0;  // expected false detections per frame
    std::uint64_t seed = 1;
};

/// Deterministic function of (cfg, cfg.seed). Objects advance by per-object
/// velocity (m/s / frame_rate / gsd px per frame); boxes stay fully inside
/// the image while alive (reflection at walls, or death when entry/exit is
/// enabled). Throws std::invalid_argument on configs the image cannot hold.
Scenario simulate(const ScenarioConfig& cfg);

/// Per-frame detection lists: jittered copies of live ground-truth boxes
/// minus dropouts, plus Poisson clutter. Deterministic under n.seed.
std::vector<std::vector<Detection>> corrupt(const Scenario& s,
                                            const NoiseConfig& n);

/// Pedestrian box side for a GSD band: 4 px up to 0.14 m/px, 5 px above.
double pedestrian_box_side(double gsd);

// Density presets mirror the sequence regimes the toolkit targets; the
// lattice ("separated") and two-object crossing presets are deterministic
// fixtures for tracker tests.
ScenarioConfig preset_sparse(std::uint64_t seed);
ScenarioConfig preset_dense(std::uint64_t seed);
ScenarioConfig preset_crowd(std::uint64_t seed);
ScenarioConfig preset_separated(std::uint64_t seed);
ScenarioConfig preset_crossing2(std::uint64_t seed);

/// Throws std::invalid_argument for unknown names.
ScenarioConfig preset_by_name(const std::string& name, std::uint64_t seed);

}  // namespace aerotrack

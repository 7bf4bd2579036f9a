#include "aerotrack/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "aerotrack/rng.hpp"

namespace aerotrack {

namespace {

constexpr std::uint64_t kSharedStreamKey = 1ULL << 40;

struct Bounds {
    double lo_x, hi_x, lo_y, hi_y;  // allowed center range keeping the box inside
};

Bounds center_bounds(const SequenceMeta& meta, double bw, double bh) {
    return {bw / 2.0, meta.width - bw / 2.0, bh / 2.0, meta.height - bh / 2.0};
}

bool inside(const Bounds& b, Vec2 p) {
    return p.x >= b.lo_x && p.x <= b.hi_x && p.y >= b.lo_y && p.y <= b.hi_y;
}

void validate(const ScenarioConfig& cfg) {
    if (cfg.meta.width <= 0 || cfg.meta.height <= 0)
        throw std::invalid_argument("simulate: image size must be positive");
    if (!(cfg.meta.gsd > 0.0) || !(cfg.meta.frame_rate > 0.0))
        throw std::invalid_argument("simulate: gsd and frame_rate must be positive");
    if (cfg.frames <= 0) throw std::invalid_argument("simulate: frames must be positive");
    if (cfg.n_objects < 0) throw std::invalid_argument("simulate: negative object count");
    if (cfg.speed_mean_mps < 0.0 || cfg.speed_sigma_mps < 0.0)
        throw std::invalid_argument("simulate: negative speed");
    if (!(cfg.box_w > 0.0) || !(cfg.box_h > 0.0))
        throw std::invalid_argument("simulate: box size must be positive");
    for (double p : {cfg.group_fraction, cfg.entry_exit_prob, cfg.stationary_fraction})
        if (p < 0.0 || p > 1.0) throw std::invalid_argument("simulate: probability outside [0,1]");
    for (const auto& z : cfg.occlusions)
        if (z.dropout < 0.0 || z.dropout > 1.0)
            throw std::invalid_argument("simulate: occlusion dropout outside [0,1]");

    const Bounds b = center_bounds(cfg.meta, cfg.box_w, cfg.box_h);
    if (cfg.scripted.empty() && cfg.n_objects > 0 &&
        (b.lo_x >= b.hi_x || b.lo_y >= b.hi_y))
        throw std::invalid_argument("simulate: objects cannot fit in the image");
}

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

struct MotionParams {
    double speed_px = 0.0;  // px per frame
    double heading = 0.0;   // radians
};

double draw_speed_px(Rng& rng, const ScenarioConfig& cfg) {
    const double lo = std::max(0.0, cfg.speed_mean_mps - 3.0 * cfg.speed_sigma_mps);
    const double hi = cfg.speed_mean_mps + 3.0 * cfg.speed_sigma_mps;
    const double mps = clamp(rng.normal(cfg.speed_mean_mps, cfg.speed_sigma_mps), lo, hi);
    return mps / cfg.meta.frame_rate / cfg.meta.gsd;
}

Vec2 grid_position(const ScenarioConfig& cfg, const Bounds& b, int index) {
    const int cols = static_cast<int>(std::ceil(std::sqrt(double(cfg.n_objects))));
    const int rows = (cfg.n_objects + cols - 1) / cols;
    const double extent_x = (cols - 1) * cfg.grid_spacing_px;
    const double extent_y = (rows - 1) * cfg.grid_spacing_px;
    if (extent_x > b.hi_x - b.lo_x || extent_y > b.hi_y - b.lo_y)
        throw std::invalid_argument("simulate: grid does not fit in the image");
    const double x0 = b.lo_x + 0.5 * ((b.hi_x - b.lo_x) - extent_x);
    const double y0 = b.lo_y + 0.5 * ((b.hi_y - b.lo_y) - extent_y);
    return {x0 + (index % cols) * cfg.grid_spacing_px,
            y0 + (index / cols) * cfg.grid_spacing_px};
}

/// Procedural path of one non-grouped object; group leaders reuse this so
/// members can rebuild the leader trajectory deterministically.
Trajectory base_path(const ScenarioConfig& cfg, const Bounds& b, int index,
                     const MotionParams* shared, bool in_group,
                     bool stationary = false) {
    Rng rng(substream_seed(cfg.seed, static_cast<std::uint64_t>(index)));

    std::int64_t born = 0;
    bool late = false;
    const bool may_exit = cfg.entry_exit_prob > 0.0 && !in_group;
    if (may_exit) {
        for (int t = 1; t < cfg.frames; ++t) {
            if (rng.uniform01() < cfg.entry_exit_prob) {
                born = t;
                late = true;
                break;
            }
        }
    }

    MotionParams mp;
    Vec2 pos;
    if (late) {
        // Spawn on a border, heading roughly inward.
        const int side = static_cast<int>(rng.uniform01() * 4.0);
        const double along_x = rng.uniform(b.lo_x, b.hi_x);
        const double along_y = rng.uniform(b.lo_y, b.hi_y);
        double inward = 0.0;
        switch (side) {
            case 0: pos = {b.lo_x, along_y}; inward = 0.0; break;               // left, +x
            case 1: pos = {b.hi_x, along_y}; inward = std::numbers::pi; break;  // right, -x
            case 2: pos = {along_x, b.lo_y}; inward = std::numbers::pi / 2; break;
            default: pos = {along_x, b.hi_y}; inward = -std::numbers::pi / 2; break;
        }
        mp.heading = inward + rng.uniform(-std::numbers::pi / 4, std::numbers::pi / 4);
        mp.speed_px = draw_speed_px(rng, cfg);
    } else if (shared) {
        if (cfg.placement == Placement::Grid) {
            pos = grid_position(cfg, b, index);
        } else {
            pos = {rng.uniform(b.lo_x, b.hi_x), rng.uniform(b.lo_y, b.hi_y)};
        }
        mp = *shared;
    } else {
        if (cfg.placement == Placement::Grid) {
            pos = grid_position(cfg, b, index);
        } else {
            pos = {rng.uniform(b.lo_x, b.hi_x), rng.uniform(b.lo_y, b.hi_y)};
        }
        mp.heading = rng.uniform(0.0, 2.0 * std::numbers::pi);
        mp.speed_px = draw_speed_px(rng, cfg);
    }

    if (stationary) mp.speed_px = 0.0;  // draws above keep streams aligned

    Trajectory traj;
    for (std::int64_t t = born; t < cfg.frames; ++t) {
        traj[t] = BoundingBox::from_center(pos, cfg.box_w, cfg.box_h);

        if (!shared && cfg.heading_noise_sigma > 0.0)
            mp.heading = rng.normal(mp.heading, cfg.heading_noise_sigma);
        Vec2 next{pos.x + mp.speed_px * std::cos(mp.heading),
                  pos.y + mp.speed_px * std::sin(mp.heading)};
        if (may_exit || late) {
            if (!inside(b, next)) break;  // leaves the scene
        } else {
            if (next.x < b.lo_x || next.x > b.hi_x) {
                mp.heading = std::numbers::pi - mp.heading;
                next.x = clamp(next.x < b.lo_x ? 2 * b.lo_x - next.x : 2 * b.hi_x - next.x,
                               b.lo_x, b.hi_x);
            }
            if (next.y < b.lo_y || next.y > b.hi_y) {
                mp.heading = -mp.heading;
                next.y = clamp(next.y < b.lo_y ? 2 * b.lo_y - next.y : 2 * b.hi_y - next.y,
                               b.lo_y, b.hi_y);
            }
        }
        pos = next;
    }
    return traj;
}

}  // namespace

double pedestrian_box_side(double gsd) { return gsd <= 0.14 ? 4.0 : 5.0; }

Scenario simulate(const ScenarioConfig& cfg) {
    validate(cfg);
    Scenario sc;
    sc.meta = cfg.meta;
    sc.config = cfg;

    if (!cfg.scripted.empty()) {
        const Bounds b = center_bounds(cfg.meta, cfg.box_w, cfg.box_h);
        for (std::size_t i = 0; i < cfg.scripted.size(); ++i) {
            const auto& so = cfg.scripted[i];
            Trajectory traj;
            Vec2 pos = so.start;
            for (std::int64_t t = so.born; t < cfg.frames; ++t) {
                if (!inside(b, pos)) break;
                traj[t] = BoundingBox::from_center(pos, cfg.box_w, cfg.box_h);
                pos = pos + so.velocity;
            }
            if (!traj.empty()) sc.ground_truth[static_cast<ObjectId>(i)] = traj;
        }
        return sc;
    }

    const Bounds b = center_bounds(cfg.meta, cfg.box_w, cfg.box_h);

    MotionParams shared;
    const bool use_shared = cfg.motion == MotionModel::SharedVelocity;
    if (use_shared) {
        Rng rng(substream_seed(cfg.seed, kSharedStreamKey));
        shared.heading = rng.uniform(0.0, 2.0 * std::numbers::pi);
        shared.speed_px = draw_speed_px(rng, cfg);
    }

    const int n_grouped =
        4 * (static_cast<int>(std::lround(cfg.group_fraction * cfg.n_objects)) / 4);
    const int n_stationary =
        static_cast<int>(std::lround(cfg.stationary_fraction * cfg.n_objects));

    for (int i = 0; i < cfg.n_objects; ++i) {
        const bool stationary = i >= cfg.n_objects - n_stationary && i >= n_grouped;
        Trajectory traj;
        if (i < n_grouped) {
            const int leader = (i / 4) * 4;
            const Trajectory leader_path =
                base_path(cfg, b, leader, use_shared ? &shared : nullptr, true);
            if (i == leader) {
                traj = leader_path;
            } else {
                Rng rng(substream_seed(cfg.seed, static_cast<std::uint64_t>(i)));
                const Vec2 offset{rng.uniform(-3.0 * cfg.box_w, 3.0 * cfg.box_w),
                                  rng.uniform(-3.0 * cfg.box_h, 3.0 * cfg.box_h)};
                for (const auto& [t, box] : leader_path) {
                    Vec2 c = box.center() + offset;
                    if (cfg.group_cohesion_px > 0.0) {
                        c.x = rng.normal(c.x, cfg.group_cohesion_px);
                        c.y = rng.normal(c.y, cfg.group_cohesion_px);
                    }
                    c.x = clamp(c.x, b.lo_x, b.hi_x);
                    c.y = clamp(c.y, b.lo_y, b.hi_y);
                    traj[t] = BoundingBox::from_center(c, cfg.box_w, cfg.box_h);
                }
            }
        } else {
            traj = base_path(cfg, b, i, use_shared ? &shared : nullptr, false,
                             stationary);
        }
        if (!traj.empty()) sc.ground_truth[static_cast<ObjectId>(i)] = traj;
    }
    return sc;
}

std::vector<std::vector<Detection>> corrupt(const Scenario& s,
                                            const NoiseConfig& n) {
    for (double p : {n.p_miss}) {
        if (p < 0.0 || p > 1.0)
            throw std::invalid_argument("corrupt: probability outside [0,1]");
    }
    if (n.jitter_sigma < 0.0 || n.clutter_rate < 0.0)
        throw std::invalid_argument("corrupt: negative noise magnitude");

    const auto& cfg = s.config;
    std::vector<std::vector<Detection>> frames(cfg.frames);
    const Bounds cb = center_bounds(s.meta, cfg.box_w, cfg.box_h);

    for (std::int64_t t = 0; t < cfg.frames; ++t) {
        Rng rng(substream_seed(n.seed, static_cast<std::uint64_t>(t)));
        auto& dets = frames[t];
        for (const auto& [id, traj] : s.ground_truth) {
            const auto it = traj.find(t);
            if (it == traj.end()) continue;
            const BoundingBox& box = it->second;

            bool dropped = rng.uniform01() < n.p_miss;
            if (!dropped) {
                const Vec2 c = box.center();
                for (const auto& z : cfg.occlusions) {
                    if (c.x >= z.zone.x1 && c.x <= z.zone.x2 && c.y >= z.zone.y1 &&
                        c.y <= z.zone.y2) {
                        if (rng.uniform01() < z.dropout) {
                            dropped = true;
                            break;
                        }
                    }
                }
            }
            if (dropped) continue;

            const double dx = rng.normal(0.0, n.jitter_sigma);
            const double dy = rng.normal(0.0, n.jitter_sigma);
            dets.push_back(Detection{
                t, {box.x1 + dx, box.y1 + dy, box.x2 + dx, box.y2 + dy},
                std::nullopt});
        }
        const std::uint64_t clutter = rng.poisson(n.clutter_rate);
        for (std::uint64_t c = 0; c < clutter; ++c) {
            const Vec2 pos{rng.uniform(cb.lo_x, cb.hi_x), rng.uniform(cb.lo_y, cb.hi_y)};
            dets.push_back(Detection{
                t, BoundingBox::from_center(pos, cfg.box_w, cfg.box_h),
                std::nullopt});
        }
    }
    return frames;
}

ScenarioConfig preset_sparse(std::uint64_t seed) {
    ScenarioConfig cfg;
    cfg.meta = {"sparse", 0.12, 2.0, 512, 512};
    cfg.n_objects = 15;
    cfg.frames = 30;
    cfg.heading_noise_sigma = 0.05;
    cfg.seed = seed;
    return cfg;
}

ScenarioConfig preset_dense(std::uint64_t seed) {
    ScenarioConfig cfg;
    cfg.meta = {"dense", 0.12, 2.0, 1024, 1024};
    cfg.n_objects = 250;
    cfg.frames = 30;
    cfg.heading_noise_sigma = 0.1;
    cfg.stationary_fraction = 0.3;  // fair/city-center crowds stand around a lot
    cfg.seed = seed;
    return cfg;
}

ScenarioConfig preset_crowd(std::uint64_t seed) {
    ScenarioConfig cfg;
    cfg.meta = {"crowd", 0.12, 2.0, 1536, 1536};
    cfg.n_objects = 600;
    cfg.frames = 30;
    cfg.heading_noise_sigma = 0.1;
    cfg.stationary_fraction = 0.3;
    cfg.seed = seed;
    return cfg;
}

ScenarioConfig preset_separated(std::uint64_t seed) {
    ScenarioConfig cfg;
    cfg.meta = {"separated", 0.12, 2.0, 1024, 1024};
    cfg.n_objects = 15;
    cfg.frames = 30;
    cfg.heading_noise_sigma = 0.0;
    cfg.placement = Placement::Grid;
    cfg.motion = MotionModel::SharedVelocity;
    cfg.grid_spacing_px = 51.0;  // three EOT gates at the default GSD
    cfg.seed = seed;
    return cfg;
}

ScenarioConfig preset_crossing2(std::uint64_t seed) {
    ScenarioConfig cfg;
    cfg.meta = {"crossing2", 0.12, 2.0, 512, 512};
    cfg.frames = 30;
    cfg.heading_noise_sigma = 0.0;
    // Two straight lines crossing at the image center at different times and
    // speeds; the objects never coincide.
    cfg.scripted = {
        {{172.0, 256.0}, {6.0, 0.0}, 0},
        {{256.0, 179.5}, {0.0, 4.5}, 0},
    };
    cfg.n_objects = 2;
    cfg.seed = seed;
    return cfg;
}

ScenarioConfig preset_by_name(const std::string& name, std::uint64_t seed) {
    if (name == "sparse") return preset_sparse(seed);
    if (name == "dense") return preset_dense(seed);
    if (name == "crowd") return preset_crowd(seed);
    if (name == "separated") return preset_separated(seed);
    if (name == "crossing2") return preset_crossing2(seed);
    throw std::invalid_argument("unknown preset: " + name);
}

}  // namespace aerotrack

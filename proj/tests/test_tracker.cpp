#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "aerotrack/annotation_io.hpp"
#include "aerotrack/metrics.hpp"
#include "aerotrack/simulator.hpp"
#include "aerotrack/tracker.hpp"

using namespace aerotrack;

namespace {

const SequenceMeta kMeta{"test", 0.12, 2.0, 512, 512};

Detection det_at(std::int64_t frame, double x, double y, double side = 4.0) {
    return Detection{frame, BoundingBox::from_center({x, y}, side, side),
                     std::nullopt};
}

std::vector<std::vector<Detection>> gt_as_detections(const Scenario& sc) {
    std::vector<std::vector<Detection>> frames(sc.config.frames);
    for (const auto& [id, traj] : sc.ground_truth) {
        for (const auto& [f, box] : traj) {
            frames[f].push_back(Detection{f, box, std::nullopt});
        }
    }
    return frames;
}

}  // namespace

TEST_CASE("config defaults and validation") {
    TrackerConfig cfg;
    const Tracker eot(cfg, kMeta);
    CHECK(eot.gate_threshold() == doctest::Approx(17.0 * 0.12));

    cfg.mode = TrackerMode::Iou;
    const Tracker iou_tracker(cfg, kMeta);
    CHECK(iou_tracker.gate_threshold() == 0.99);  // required overlap 0.01
    CHECK(cfg.max_age == 3);

    TrackerConfig bad;
    bad.max_age = -1;
    CHECK_THROWS_AS(Tracker(bad, kMeta), std::invalid_argument);
    TrackerConfig bad2;
    bad2.box_enlarge_factor = 0.0;
    CHECK_THROWS_AS(Tracker(bad2, kMeta), std::invalid_argument);
    CHECK_THROWS_AS(Tracker(TrackerConfig{}, SequenceMeta{"x", 0.0, 2.0, 10, 10}),
                    std::invalid_argument);
}

TEST_CASE("zero-distance match keeps age zero") {
    Tracker tr(TrackerConfig{}, kMeta);
    tr.step(0, {det_at(0, 10, 10)});
    tr.step(1, {det_at(1, 10, 10)});
    REQUIRE(tr.tracks().size() == 1);
    CHECK(tr.tracks()[0].age == 0);
    CHECK(tr.last_stats().matched == 1);
    CHECK(tr.last_stats().matched_costs[0] == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("track expires after max_age missed frames") {
    Tracker tr(TrackerConfig{}, kMeta);
    tr.step(0, {det_at(0, 100, 100)});
    REQUIRE(tr.tracks().size() == 1);
    const ObjectId id = tr.tracks()[0].id;
    tr.step(1, {});
    CHECK(tr.tracks().size() == 1);
    CHECK(tr.tracks()[0].age == 1);
    tr.step(2, {});
    tr.step(3, {});
    CHECK(tr.tracks().size() == 1);  // age 3 == max_age: still coasting
    tr.step(4, {});                  // age 4 > 3: removed
    CHECK(tr.tracks().empty());
    const TrackingResult res = tr.finalize();
    CHECK(res.trajectories.at(id).size() == 4);  // frames 0..3
}

TEST_CASE("out-of-order frames rejected, detection frame validated") {
    Tracker tr(TrackerConfig{}, kMeta);
    tr.step(0, {});
    CHECK_THROWS_AS(tr.step(0, {}), std::invalid_argument);
    CHECK_THROWS_AS(tr.step(1, {det_at(0, 5, 5)}), std::invalid_argument);
}

TEST_CASE("tracks leaving the scene are removed") {
    Tracker tr(TrackerConfig{}, kMeta);
    // detections marching toward the border; the track follows and then the
    // prediction crosses it
    double x = 508.0;
    std::int64_t f = 0;
    tr.step(f++, {det_at(0, x, 256)});
    for (int i = 0; i < 6 && !tr.tracks().empty(); ++i, ++f) {
        x += 2.0;
        if (x < 511.0) {
            tr.step(f, {det_at(f, x, 256)});
        } else {
            tr.step(f, {});
        }
    }
    CHECK(tr.tracks().empty());
}

TEST_CASE("finalize with no frames and a single detection") {
    Tracker empty(TrackerConfig{}, kMeta);
    CHECK(empty.finalize().trajectories.empty());

    Tracker one(TrackerConfig{}, kMeta);
    one.step(0, {det_at(0, 50, 50)});
    const TrackingResult res = one.finalize();
    REQUIRE(res.trajectories.size() == 1);
    CHECK(res.trajectories.begin()->second.size() == 1);
}

TEST_CASE("euclidean mode requires a previous-frame match by default") {
    TrackerConfig cfg;  // require_prev_match = true
    Tracker tr(cfg, kMeta);
    tr.step(0, {det_at(0, 100, 100)});
    tr.step(1, {});  // track now age 1
    // detection right on top of the prediction, but the track may not rematch
    tr.step(2, {det_at(2, 100, 100)});
    CHECK(tr.last_stats().matched == 0);
    CHECK(tr.last_stats().spawned == 1);
    CHECK(tr.tracks().size() == 2);

    TrackerConfig relaxed;
    relaxed.require_prev_match = false;
    Tracker tr2(relaxed, kMeta);
    tr2.step(0, {det_at(0, 100, 100)});
    tr2.step(1, {});
    tr2.step(2, {det_at(2, 100, 100)});
    CHECK(tr2.last_stats().matched == 1);
    CHECK(tr2.tracks().size() == 1);
}

TEST_CASE("iou mode rematches coasting tracks") {
    TrackerConfig cfg;
    cfg.mode = TrackerMode::Iou;
    Tracker tr(cfg, kMeta);
    tr.step(0, {det_at(0, 100, 100)});
    tr.step(1, {});
    tr.step(2, {det_at(2, 100, 100)});
    CHECK(tr.last_stats().matched == 1);
    CHECK(tr.tracks().size() == 1);
}

TEST_CASE("spawn policy first-frame-only") {
    TrackerConfig cfg;
    cfg.spawn_policy = SpawnPolicy::FirstFrameOnly;
    Tracker tr(cfg, kMeta);
    tr.step(0, {det_at(0, 100, 100)});
    tr.step(1, {det_at(1, 100, 100), det_at(1, 300, 300)});
    CHECK(tr.tracks().size() == 1);  // newcomer not spawned
    CHECK(tr.last_stats().spawned == 0);
}

TEST_CASE("identity is never reused") {
    Tracker tr(TrackerConfig{}, kMeta);
    std::set<ObjectId> live_before, retired;
    for (std::int64_t f = 0; f < 40; ++f) {
        // a detection that appears and disappears, forcing respawns
        std::vector<Detection> dets;
        if (f % 8 < 2) dets.push_back(det_at(f, 100.0 + double(f), 100));
        std::set<ObjectId> live_now;
        for (const auto& [id, box] : tr.step(f, dets)) live_now.insert(id);
        for (ObjectId id : live_now) CHECK(retired.count(id) == 0);
        for (ObjectId id : live_before) {
            if (!live_now.count(id)) retired.insert(id);
        }
        live_before = live_now;
    }
    const TrackingResult res = tr.finalize();
    CHECK(res.trajectories.size() >= 4);  // several distinct ids existed
    CHECK(retired.size() >= 4);
}

TEST_CASE("determinism: identical inputs give identical results") {
    const Scenario sc = simulate(preset_dense(5));
    const auto dets = corrupt(sc, NoiseConfig{1.5, 0.05, 1.0, 5});
    TrackerConfig cfg;
    const TrackingResult a = track_detections(cfg, sc.meta, dets);
    const TrackingResult b = track_detections(cfg, sc.meta, dets);
    CHECK(write_annotations(annotations_from_result(a)) ==
          write_annotations(annotations_from_result(b)));
}

TEST_CASE("crossing objects keep their identities under EOT") {
    const Scenario sc = simulate(preset_crossing2(1));
    const TrackingResult res =
        track_detections(TrackerConfig{}, sc.meta, gt_as_detections(sc));
    REQUIRE(res.trajectories.size() == 2);
    const MetricsAccumulator acc = evaluate_trajectories(
        sc.ground_truth, res.trajectories, MatchCriterion::distance(5.0), "x");
    const MetricsReport r = acc.summarize();
    CHECK(r.ids == 0);
    CHECK(*r.mota == doctest::Approx(1.0));
}

TEST_CASE("perfect input on the separated preset tracks perfectly") {
    const Scenario sc = simulate(preset_separated(7));
    const TrackingResult res =
        track_detections(TrackerConfig{}, sc.meta, gt_as_detections(sc));
    const MetricsAccumulator acc = evaluate_trajectories(
        sc.ground_truth, res.trajectories, MatchCriterion::distance(5.0), "sep");
    const MetricsReport r = acc.summarize();
    CHECK(r.ids == 0);
    CHECK(*r.mota == doctest::Approx(1.0));
    CHECK(*r.mt_pct == doctest::Approx(100.0));
    // id structure is bijective with the ground truth up to relabeling
    CHECK(res.trajectories.size() == sc.ground_truth.size());
}

TEST_CASE("gating soundness: matched costs never exceed the gate") {
    const Scenario sc = simulate(preset_dense(11));
    const auto dets = corrupt(sc, NoiseConfig{1.5, 0.1, 2.0, 11});
    for (TrackerMode mode : {TrackerMode::Euclidean, TrackerMode::Iou}) {
        TrackerConfig cfg;
        cfg.mode = mode;
        Tracker tr(cfg, sc.meta);
        for (std::size_t f = 0; f < dets.size(); ++f) {
            tr.step(static_cast<std::int64_t>(f), dets[f]);
            for (double c : tr.last_stats().matched_costs) {
                REQUIRE(c <= tr.gate_threshold());
            }
        }
    }
}

TEST_CASE("iou gate sweep leaves fewer switches at looser gates") {
    const Scenario sc = simulate(preset_dense(3));
    const auto dets = corrupt(sc, NoiseConfig{1.5, 0.0, 0.0, 3});
    std::vector<std::int64_t> ids_counts;
    for (double g : {0.5, 0.7, 0.9, 0.99}) {
        TrackerConfig cfg;
        cfg.mode = TrackerMode::Iou;
        cfg.gate_threshold = g;
        const TrackingResult res = track_detections(cfg, sc.meta, dets);
        const MetricsAccumulator acc = evaluate_trajectories(
            sc.ground_truth, res.trajectories, MatchCriterion::distance(5.0), "d");
        ids_counts.push_back(acc.summarize().ids);
    }
    for (std::size_t i = 1; i < ids_counts.size(); ++i) {
        CHECK(ids_counts[i] <= ids_counts[i - 1]);
    }
    CHECK(ids_counts.back() < ids_counts.front());
}

TEST_CASE("movement history tracks consecutive position differences") {
    Tracker tr(TrackerConfig{}, kMeta);
    double x = 100.0;
    for (std::int64_t f = 0; f < 8; ++f) {
        tr.step(f, {det_at(f, x, 100)});
        x += 6.0;
    }
    REQUIRE(tr.tracks().size() == 1);
    const TrackState& t = tr.tracks()[0];
    CHECK(t.history.size() == 5);
    REQUIRE(t.last_positions.size() == 8);
    for (std::size_t i = 0; i < 5; ++i) {
        const std::size_t p = t.last_positions.size() - 5 + i;
        const Vec2 want = t.last_positions[p] - t.last_positions[p - 1];
        CHECK(t.history[i].x == doctest::Approx(want.x).epsilon(1e-12));
        CHECK(t.history[i].y == doctest::Approx(want.y).epsilon(1e-12));
    }
}

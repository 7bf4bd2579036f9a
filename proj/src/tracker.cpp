#include "aerotrack/tracker.hpp"

#include <stdexcept>

#include "aerotrack/assignment.hpp"

namespace aerotrack {

namespace {

void push_movement(TrackState& t, Vec2 movement) {
    t.history.push_back(movement);
    if (t.history.size() > 5) t.history.erase(t.history.begin());
}

}  // namespace

Tracker::Tracker(TrackerConfig cfg, SequenceMeta meta)
    : cfg_(cfg), meta_(std::move(meta)) {
    if (!(meta_.gsd > 0.0)) throw std::invalid_argument("tracker: gsd must be positive");
    if (meta_.width <= 0 || meta_.height <= 0)
        throw std::invalid_argument("tracker: image size must be positive");
    if (cfg_.max_age < 0) throw std::invalid_argument("tracker: max_age must be >= 0");
    if (!(cfg_.box_enlarge_factor > 0.0))
        throw std::invalid_argument("tracker: box_enlarge_factor must be positive");
    if (cfg_.gate_threshold && !(*cfg_.gate_threshold >= 0.0))
        throw std::invalid_argument("tracker: gate_threshold must be >= 0");

    gate_ = cfg_.gate_threshold.value_or(
        cfg_.mode == TrackerMode::Euclidean ? 17.0 * meta_.gsd : 0.99);
    result_.meta = meta_;
    result_.config = cfg_;
}

std::vector<std::pair<ObjectId, BoundingBox>> Tracker::step(
    std::int64_t frame, const std::vector<Detection>& detections) {
    if (frame <= last_frame_) {
        throw std::invalid_argument("tracker: out-of-order frame index");
    }
    for (const auto& d : detections) {
        if (d.frame != frame) {
            throw std::invalid_argument("tracker: detection from another frame");
        }
    }
    const bool first_step = !stepped_;
    stepped_ = true;
    last_frame_ = frame;
    stats_ = {};

    for (auto& t : tracks_) t.kalman = kalman_predict(t.kalman, cfg_.noise);

    // Candidate tracks entering the cost matrix.
    std::vector<std::size_t> cand;
    for (std::size_t i = 0; i < tracks_.size(); ++i) {
        if (cfg_.mode == TrackerMode::Euclidean && cfg_.require_prev_match &&
            tracks_[i].age != 0) {
            continue;
        }
        cand.push_back(i);
    }
    stats_.candidates = cand.size();

    CostMatrix m;
    if (cfg_.mode == TrackerMode::Euclidean) {
        std::vector<Vec2> preds, dets;
        preds.reserve(cand.size());
        dets.reserve(detections.size());
        for (std::size_t i : cand) preds.push_back(tracks_[i].kalman.position());
        for (const auto& d : detections) dets.push_back(d.box.center());
        m = gate(euclidean_cost_matrix(preds, dets, meta_.gsd), gate_);
    } else {
        std::vector<BoundingBox> tboxes, dboxes;
        tboxes.reserve(cand.size());
        dboxes.reserve(detections.size());
        for (std::size_t i : cand) {
            const auto& t = tracks_[i];
            tboxes.push_back(enlarge(
                BoundingBox::from_center(t.kalman.position(), t.box.width(),
                                         t.box.height()),
                cfg_.box_enlarge_factor));
        }
        for (const auto& d : detections) {
            dboxes.push_back(enlarge(d.box, cfg_.box_enlarge_factor));
        }
        m = gate(iou_cost_matrix(tboxes, dboxes), gate_);
    }

    const Assignment a = solve_assignment(m);

    std::vector<char> det_matched(detections.size(), 0);
    std::vector<char> track_matched(tracks_.size(), 0);
    for (const auto& [r, c] : a.pairs) {
        const std::size_t ti = cand[r];
        TrackState& t = tracks_[ti];
        track_matched[ti] = 1;
        det_matched[c] = 1;
        stats_.matched_costs.push_back(m.at(r, c));

        const Vec2 prev = t.last_positions.back();
        t.kalman = kalman_update(t.kalman, detections[c].box.center(), cfg_.noise);
        t.age = 0;
        const Vec2 now = t.kalman.position();
        t.last_positions.push_back(now);
        push_movement(t, now - prev);
        t.box = BoundingBox::from_center(now, t.box.width(), t.box.height());
    }
    stats_.matched = a.pairs.size();

    for (std::size_t i = 0; i < tracks_.size(); ++i) {
        if (track_matched[i]) continue;
        TrackState& t = tracks_[i];
        t.age += 1;
        const Vec2 prev = t.last_positions.back();
        const Vec2 now = t.kalman.position();  // coast on the prediction
        t.last_positions.push_back(now);
        push_movement(t, now - prev);
        t.box = BoundingBox::from_center(now, t.box.width(), t.box.height());
    }

    // Expire tracks that aged out or left the scene.
    std::vector<TrackState> keep;
    keep.reserve(tracks_.size());
    for (auto& t : tracks_) {
        const Vec2 c = t.last_positions.back();
        const bool inside = c.x >= 0.0 && c.x < meta_.width && c.y >= 0.0 &&
                            c.y < meta_.height;
        if (t.age > cfg_.max_age || !inside) {
            ++stats_.removed;
        } else {
            keep.push_back(std::move(t));
        }
    }
    tracks_ = std::move(keep);

    if (cfg_.spawn_policy == SpawnPolicy::AllFrames || first_step) {
        for (std::size_t j = 0; j < detections.size(); ++j) {
            if (det_matched[j]) continue;
            TrackState t;
            t.id = next_id_++;
            t.kalman = kalman_init(detections[j].box.center(), cfg_.noise);
            t.box = detections[j].box;
            t.age = 0;
            t.born = frame;
            t.last_positions = {detections[j].box.center()};
            tracks_.push_back(std::move(t));
            ++stats_.spawned;
        }
    }

    std::vector<std::pair<ObjectId, BoundingBox>> out;
    out.reserve(tracks_.size());
    for (const auto& t : tracks_) {
        out.emplace_back(t.id, t.box);
        result_.trajectories[t.id][frame] = t.box;
    }
    return out;
}

TrackingResult Tracker::finalize() const { return result_; }

TrackingResult track_detections(const TrackerConfig& cfg,
                                const SequenceMeta& meta,
                                const std::vector<std::vector<Detection>>& frames) {
    Tracker tr(cfg, meta);
    for (std::size_t f = 0; f < frames.size(); ++f) {
        tr.step(static_cast<std::int64_t>(f), frames[f]);
    }
    return tr.finalize();
}

TrackingResult track_detections(
    const TrackerConfig& cfg, const SequenceMeta& meta,
    const std::map<std::int64_t, std::vector<Detection>>& frames,
    std::int64_t frame_count_hint) {
    Tracker tr(cfg, meta);
    std::int64_t last = frame_count_hint - 1;
    if (!frames.empty()) last = std::max(last, frames.rbegin()->first);
    static const std::vector<Detection> kEmpty;
    for (std::int64_t f = 0; f <= last; ++f) {
        const auto it = frames.find(f);
        tr.step(f, it == frames.end() ? kEmpty : it->second);
    }
    return tr.finalize();
}

}  // namespace aerotrack

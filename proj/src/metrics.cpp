#include "aerotrack/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "aerotrack/assignment.hpp"

namespace aerotrack {

bool MatchCriterion::matches(const BoundingBox& gt, const BoundingBox& pred) const {
    if (kind == Kind::IoU) return aerotrack::iou(gt, pred) > tau;
    return (gt.center() - pred.center()).norm() <= tau;
}

Coverage classify_coverage(std::int64_t gt_lifetime, std::int64_t tracked) {
    if (gt_lifetime <= 0 || tracked < 0 || tracked > gt_lifetime) {
        throw std::invalid_argument("classify_coverage: invalid lifetime/tracked");
    }
    const double ratio = static_cast<double>(tracked) / static_cast<double>(gt_lifetime);
    if (ratio < 0.2) return Coverage::MostlyLost;
    if (ratio > 0.8) return Coverage::MostlyTracked;
    return Coverage::PartiallyTracked;
}

namespace {

std::optional<double> ratio_or_absent(double num, double den) {
    if (den <= 0.0) return std::nullopt;
    return num / den;
}

struct IdTallies {
    std::map<ObjectId, std::int64_t> gt_frames, pred_frames;
    std::map<std::pair<ObjectId, ObjectId>, std::int64_t> pair_overlap;
};

// Optimal trajectory pairing from per-pair overlap counts. Matching a pair
// with overlap ov changes IDFP+IDFN by -2*ov, so the min-cost matching that
// may leave trajectories unmatched is the one maximizing total overlap; a
// per-row dummy column makes "unmatched" an explicit zero-gain option while
// keeping all costs non-negative for the assignment solver.
IdMetrics solve_id_tallies(const IdTallies& t) {
    IdMetrics out;
    std::int64_t total_gt = 0, total_pred = 0;
    for (const auto& [id, n] : t.gt_frames) total_gt += n;
    for (const auto& [id, n] : t.pred_frames) total_pred += n;

    std::int64_t idtp = 0;
    if (!t.gt_frames.empty() && !t.pred_frames.empty() && !t.pair_overlap.empty()) {
        std::vector<ObjectId> gt_ids, pred_ids;
        std::map<ObjectId, std::size_t> pred_index;
        for (const auto& [id, n] : t.gt_frames) gt_ids.push_back(id);
        for (const auto& [id, n] : t.pred_frames) {
            pred_index[id] = pred_ids.size();
            pred_ids.push_back(id);
        }
        std::int64_t max_frames = 0;
        for (const auto& [id, n] : t.gt_frames) max_frames = std::max(max_frames, n);
        for (const auto& [id, n] : t.pred_frames) max_frames = std::max(max_frames, n);
        const double big = 2.0 * static_cast<double>(max_frames) + 1.0;

        const std::size_t g = gt_ids.size();
        const std::size_t p = pred_ids.size();
        CostMatrix m(g, p + g, kInfeasible);
        std::map<std::pair<std::size_t, std::size_t>, std::int64_t> cell_overlap;
        for (std::size_t r = 0; r < g; ++r) m.at(r, p + r) = big;  // stay unmatched
        for (const auto& [pair, ov] : t.pair_overlap) {
            const auto git = std::lower_bound(gt_ids.begin(), gt_ids.end(), pair.first);
            const std::size_t r = static_cast<std::size_t>(git - gt_ids.begin());
            const std::size_t c = pred_index.at(pair.second);
            m.at(r, c) = big - 2.0 * static_cast<double>(ov);
            cell_overlap[{r, c}] = ov;
        }
        const Assignment a = solve_assignment(m);
        for (const auto& [r, c] : a.pairs) {
            if (c < p) idtp += cell_overlap.at({r, c});
        }
    }

    out.idtp = idtp;
    out.idfn = total_gt - idtp;
    out.idfp = total_pred - idtp;
    out.idp = ratio_or_absent(double(idtp), double(idtp + out.idfp));
    out.idr = ratio_or_absent(double(idtp), double(idtp + out.idfn));
    out.idf1 = ratio_or_absent(2.0 * double(idtp),
                               2.0 * double(idtp) + double(out.idfp) + double(out.idfn));
    return out;
}

}  // namespace

IdMetrics id_metrics(const TrajectoryMap& gt, const TrajectoryMap& pred,
                     const MatchCriterion& criterion) {
    IdTallies t;
    std::set<std::int64_t> frames;
    for (const auto& [id, traj] : gt) {
        t.gt_frames[id] += static_cast<std::int64_t>(traj.size());
        for (const auto& [f, box] : traj) frames.insert(f);
    }
    for (const auto& [id, traj] : pred) {
        t.pred_frames[id] += static_cast<std::int64_t>(traj.size());
        for (const auto& [f, box] : traj) frames.insert(f);
    }
    for (std::int64_t f : frames) {
        for (const auto& [gid, gtraj] : gt) {
            const auto gbox = gtraj.find(f);
            if (gbox == gtraj.end()) continue;
            for (const auto& [pid, ptraj] : pred) {
                const auto pbox = ptraj.find(f);
                if (pbox == ptraj.end()) continue;
                if (criterion.matches(gbox->second, pbox->second)) {
                    ++t.pair_overlap[{gid, pid}];
                }
            }
        }
    }
    return solve_id_tallies(t);
}

MetricsAccumulator::MetricsAccumulator(std::string sequence_tag, IdsMode ids_mode)
    : tag_(std::move(sequence_tag)), ids_mode_(ids_mode) {}

FrameMatch MetricsAccumulator::match_frame(std::int64_t frame,
                                           const std::vector<FrameObject>& gt,
                                           const std::vector<FrameObject>& pred,
                                           const MatchCriterion& criterion) {
    if (criterion_ && !(*criterion_ == criterion)) {
        throw std::invalid_argument("match_frame: criterion changed mid-sequence");
    }
    criterion_ = criterion;
    SeqData& d = data_[tag_];
    if (d.started && frame <= d.last_frame) {
        throw std::invalid_argument("match_frame: frames must strictly increase");
    }
    d.started = true;
    d.last_frame = frame;

    std::map<ObjectId, BoundingBox> gt_boxes, pred_boxes;
    for (const auto& o : gt) {
        if (!gt_boxes.emplace(o.id, o.box).second) {
            throw std::invalid_argument("match_frame: duplicate gt id in frame");
        }
    }
    for (const auto& o : pred) {
        if (!pred_boxes.emplace(o.id, o.box).second) {
            throw std::invalid_argument("match_frame: duplicate pred id in frame");
        }
    }

    FrameMatch fm;
    fm.frame = frame;

    // Correspondence persistence: keep last frame's pairs that still match.
    std::set<ObjectId> taken_gt, taken_pred;
    for (const auto& [g, p] : d.prev_frame) {
        const auto git = gt_boxes.find(g);
        const auto pit = pred_boxes.find(p);
        if (git == gt_boxes.end() || pit == pred_boxes.end()) continue;
        if (!criterion.matches(git->second, pit->second)) continue;
        fm.pairs.push_back({g, p, iou(git->second, pit->second),
                            (git->second.center() - pit->second.center()).norm()});
        taken_gt.insert(g);
        taken_pred.insert(p);
    }

    // Optimal matching over the remainder, gated by the criterion.
    std::vector<ObjectId> rest_gt, rest_pred;
    for (const auto& [id, box] : gt_boxes)
        if (!taken_gt.count(id)) rest_gt.push_back(id);
    for (const auto& [id, box] : pred_boxes)
        if (!taken_pred.count(id)) rest_pred.push_back(id);
    if (!rest_gt.empty() && !rest_pred.empty()) {
        CostMatrix m(rest_gt.size(), rest_pred.size(), kInfeasible);
        for (std::size_t r = 0; r < rest_gt.size(); ++r) {
            const BoundingBox& gb = gt_boxes.at(rest_gt[r]);
            for (std::size_t c = 0; c < rest_pred.size(); ++c) {
                const BoundingBox& pb = pred_boxes.at(rest_pred[c]);
                if (!criterion.matches(gb, pb)) continue;
                m.at(r, c) = criterion.kind == MatchCriterion::Kind::IoU
                                 ? 1.0 - iou(gb, pb)
                                 : (gb.center() - pb.center()).norm();
            }
        }
        for (const auto& [r, c] : solve_assignment(m).pairs) {
            const BoundingBox& gb = gt_boxes.at(rest_gt[r]);
            const BoundingBox& pb = pred_boxes.at(rest_pred[c]);
            fm.pairs.push_back({rest_gt[r], rest_pred[c], iou(gb, pb),
                                (gb.center() - pb.center()).norm()});
            taken_gt.insert(rest_gt[r]);
            taken_pred.insert(rest_pred[c]);
        }
    }

    fm.fn = gt_boxes.size() - taken_gt.size();
    fm.fp = pred_boxes.size() - taken_pred.size();

    // Identity switches against the reference assignment.
    for (const auto& pr : fm.pairs) {
        const auto& ref = ids_mode_ == IdsMode::LastKnown ? d.last_known : d.prev_frame;
        const auto it = ref.find(pr.gt);
        if (it != ref.end() && it->second != pr.pred) ++fm.ids_events;
    }
    for (const auto& pr : fm.pairs) d.last_known[pr.gt] = pr.pred;

    // Coverage and fragmentation per ground-truth object.
    for (const auto& [id, box] : gt_boxes) {
        GtStats& st = d.gt_stats[id];
        ++st.present;
        const bool matched = taken_gt.count(id) > 0;
        if (matched) {
            ++st.tracked;
            if (st.state == 2) ++st.fm;
            st.state = 1;
        } else if (st.state == 1) {
            st.state = 2;
        }
    }

    // Identity-metric tallies over the raw frame contents.
    for (const auto& [gid, gb] : gt_boxes) ++d.gt_frames[gid];
    for (const auto& [pid, pb] : pred_boxes) ++d.pred_frames[pid];
    for (const auto& [gid, gb] : gt_boxes) {
        for (const auto& [pid, pb] : pred_boxes) {
            if (criterion.matches(gb, pb)) ++d.pair_overlap[{gid, pid}];
        }
    }

    d.frames += 1;
    d.gt_total += static_cast<std::int64_t>(gt_boxes.size());
    d.tp += static_cast<std::int64_t>(fm.pairs.size());
    d.fp += static_cast<std::int64_t>(fm.fp);
    d.fn += static_cast<std::int64_t>(fm.fn);
    d.ids += static_cast<std::int64_t>(fm.ids_events);
    d.ids_log_sum += std::log10(static_cast<double>(fm.ids_events) + 1.0);
    for (const auto& pr : fm.pairs) {
        d.overlap_sum += pr.overlap;
        d.dist_sum += pr.dist_px;
    }

    d.prev_frame.clear();
    for (const auto& pr : fm.pairs) d.prev_frame[pr.gt] = pr.pred;

    std::sort(fm.pairs.begin(), fm.pairs.end(),
              [](const FrameMatch::Pair& a, const FrameMatch::Pair& b) {
                  return a.gt < b.gt;
              });
    return fm;
}

MetricsReport MetricsAccumulator::summarize(MotpMode motp_mode) const {
    MetricsReport r;
    for (const auto& [tag, d] : data_) {
        r.frames += d.frames;
        r.tp += d.tp;
        r.fp += d.fp;
        r.fn += d.fn;
        r.ids += d.ids;
        r.gt_total += d.gt_total;
    }
    if (r.frames == 0) {
        throw std::logic_error("summarize: no frames accumulated");
    }

    double ids_log_sum = 0.0, overlap_sum = 0.0, dist_sum = 0.0;
    for (const auto& [tag, d] : data_) {
        ids_log_sum += d.ids_log_sum;
        overlap_sum += d.overlap_sum;
        dist_sum += d.dist_sum;
    }

    const double gt = static_cast<double>(r.gt_total);
    r.mota = gt > 0.0 ? std::optional<double>(
                            1.0 - double(r.fn + r.fp + r.ids) / gt)
                      : std::nullopt;
    r.motal = gt > 0.0 ? std::optional<double>(
                             1.0 - (double(r.fn + r.fp) + ids_log_sum) / gt)
                       : std::nullopt;
    r.rcll = ratio_or_absent(double(r.tp), double(r.tp + r.fn));
    r.prcn = ratio_or_absent(double(r.tp), double(r.tp + r.fp));
    r.far = double(r.fp) / double(r.frames);
    if (r.tp > 0) {
        r.motp = motp_mode == MotpMode::Overlap
                     ? 100.0 * overlap_sum / double(r.tp)
                     : dist_sum / double(r.tp);
    }

    for (const auto& [tag, d] : data_) {
        for (const auto& [id, st] : d.gt_stats) {
            ++r.gt_trajectories;
            r.fm += st.fm;
            switch (classify_coverage(st.present, st.tracked)) {
                case Coverage::MostlyTracked: ++r.mt; break;
                case Coverage::PartiallyTracked: ++r.pt; break;
                case Coverage::MostlyLost: ++r.ml; break;
            }
        }
    }
    if (r.gt_trajectories > 0) {
        const double n = static_cast<double>(r.gt_trajectories);
        r.mt_pct = 100.0 * double(r.mt) / n;
        r.pt_pct = 100.0 * double(r.pt) / n;
        r.ml_pct = 100.0 * double(r.ml) / n;
    }

    // Identity metrics: per-sequence optimal trajectory pairing, counts summed.
    for (const auto& [tag, d] : data_) {
        IdTallies t;
        t.gt_frames = d.gt_frames;
        t.pred_frames = d.pred_frames;
        t.pair_overlap = d.pair_overlap;
        const IdMetrics im = solve_id_tallies(t);
        r.idtp += im.idtp;
        r.idfp += im.idfp;
        r.idfn += im.idfn;
    }
    r.idp = ratio_or_absent(double(r.idtp), double(r.idtp + r.idfp));
    r.idr = ratio_or_absent(double(r.idtp), double(r.idtp + r.idfn));
    r.idf1 = ratio_or_absent(2.0 * double(r.idtp),
                             2.0 * double(r.idtp) + double(r.idfp) + double(r.idfn));
    return r;
}

MetricsAccumulator merge(const MetricsAccumulator& a, const MetricsAccumulator& b) {
    if (a.criterion_ && b.criterion_ && !(*a.criterion_ == *b.criterion_)) {
        throw std::invalid_argument("merge: accumulators use different criteria");
    }
    if (a.ids_mode_ != b.ids_mode_) {
        throw std::invalid_argument("merge: accumulators use different ids modes");
    }
    MetricsAccumulator out = a;
    out.criterion_ = a.criterion_ ? a.criterion_ : b.criterion_;
    for (const auto& [tag, d] : b.data_) {
        auto [it, fresh] = out.data_.emplace(tag, d);
        if (fresh) continue;
        MetricsAccumulator::SeqData& m = it->second;
        m.frames += d.frames;
        m.last_frame = std::max(m.last_frame, d.last_frame);
        m.tp += d.tp;
        m.fp += d.fp;
        m.fn += d.fn;
        m.ids += d.ids;
        m.gt_total += d.gt_total;
        m.ids_log_sum += d.ids_log_sum;
        m.overlap_sum += d.overlap_sum;
        m.dist_sum += d.dist_sum;
        for (const auto& [id, st] : d.gt_stats) {
            auto& dst = m.gt_stats[id];
            dst.present += st.present;
            dst.tracked += st.tracked;
            dst.fm += st.fm;
        }
        for (const auto& [id, n] : d.gt_frames) m.gt_frames[id] += n;
        for (const auto& [id, n] : d.pred_frames) m.pred_frames[id] += n;
        for (const auto& [pr, n] : d.pair_overlap) m.pair_overlap[pr] += n;
    }
    return out;
}

MetricsAccumulator evaluate_trajectories(const TrajectoryMap& gt,
                                         const TrajectoryMap& pred,
                                         const MatchCriterion& criterion,
                                         const std::string& tag,
                                         IdsMode ids_mode) {
    MetricsAccumulator acc(tag, ids_mode);
    std::set<std::int64_t> frames;
    for (const auto& [id, traj] : gt)
        for (const auto& [f, box] : traj) frames.insert(f);
    for (const auto& [id, traj] : pred)
        for (const auto& [f, box] : traj) frames.insert(f);
    for (std::int64_t f : frames) {
        std::vector<FrameObject> g, p;
        for (const auto& [id, traj] : gt) {
            const auto it = traj.find(f);
            if (it != traj.end()) g.push_back({id, it->second});
        }
        for (const auto& [id, traj] : pred) {
            const auto it = traj.find(f);
            if (it != traj.end()) p.push_back({id, it->second});
        }
        acc.match_frame(f, g, p, criterion);
    }
    return acc;
}

}  // namespace aerotrack

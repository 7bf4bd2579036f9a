#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aerotrack/geometry.hpp"

namespace aerotrack {

/// Frame-level match test between a ground-truth and a predicted box.
/// IoU: match iff iou > tau (strict). Distance: match iff center distance in
/// pixels <= tau.
struct MatchCriterion {
    enum class Kind { IoU, Distance };
    Kind kind = Kind::IoU;
    double tau = 0.5;

    static MatchCriterion iou(double tau = 0.5) { return {Kind::IoU, tau}; }
    static MatchCriterion distance(double tau_px) {
        return {Kind::Distance, tau_px};
    }
    bool matches(const BoundingBox& gt, const BoundingBox& pred) const;
    bool operator==(const MatchCriterion&) const = default;
};

struct FrameObject {
    ObjectId id;
    BoundingBox box;
};

/// Outcome of matching one frame.
struct FrameMatch {
    struct Pair {
        ObjectId gt;
        ObjectId pred;
        double overlap;  // IoU of the pair
        double dist_px;  // center distance
    };
    std::int64_t frame = 0;
    std::vector<Pair> pairs;
    std::size_t fp = 0;  // unmatched predictions
    std::size_t fn = 0;  // unmatched ground truth
    std::size_t ids_events = 0;
};

/// LastKnown: a switch is counted against the most recent assignment even
/// across occlusion gaps. PreviousFrame: only against the immediately
/// preceding evaluated frame.
enum class IdsMode { LastKnown, PreviousFrame };

/// Overlap: 100 * mean IoU of matches. Distance: mean center distance px.
enum class MotpMode { Overlap, Distance };

enum class Coverage { MostlyTracked, PartiallyTracked, MostlyLost };

/// MostlyLost below 20% of lifetime tracked, MostlyTracked above 80%,
/// PartiallyTracked otherwise (boundaries included). Lifetime must be
/// positive.
Coverage classify_coverage(std::int64_t gt_lifetime, std::int64_t tracked);

/// Undefined ratios are explicitly absent, never NaN.
struct MetricsReport {
    std::optional<double> mota, motal, motp, far, rcll, prcn;
    std::optional<double> idf1, idp, idr;
    std::optional<double> mt_pct, pt_pct, ml_pct;
    std::int64_t mt = 0, pt = 0, ml = 0;  // trajectory counts
    std::int64_t ids = 0, fm = 0, fp = 0, fn = 0, tp = 0;
    std::int64_t gt_total = 0, frames = 0, gt_trajectories = 0;
    std::int64_t idtp = 0, idfp = 0, idfn = 0;
};

struct IdMetrics {
    std::optional<double> idf1, idp, idr;
    std::int64_t idtp = 0, idfp = 0, idfn = 0;
};

/// Identity metrics from a global min-cost matching between whole gt and
/// predicted trajectories (frames where the pair satisfies the criterion
/// count as identity-true-positives under the optimal pairing).
IdMetrics id_metrics(const TrajectoryMap& gt, const TrajectoryMap& pred,
                     const MatchCriterion& criterion);

/// Per-frame event tallies and trajectory coverage for one or more sequences.
/// Feed frames in increasing order through match_frame; summarize at the end.
/// Accumulators for disjoint sequences (distinct tags) can be merged.
class MetricsAccumulator {
public:
    explicit MetricsAccumulator(std::string sequence_tag = "",
                                IdsMode ids_mode = IdsMode::LastKnown);

    /// Matches one frame: previous correspondences are kept while they still
    /// satisfy the criterion, the remainder is matched at minimum cost, and
    /// identity switches are counted against the reference assignment.
    FrameMatch match_frame(std::int64_t frame, const std::vector<FrameObject>& gt,
                           const std::vector<FrameObject>& pred,
                           const MatchCriterion& criterion);

    /// Derived metric values. Requires at least one accumulated frame.
    MetricsReport summarize(MotpMode motp_mode = MotpMode::Overlap) const;

    friend MetricsAccumulator merge(const MetricsAccumulator& a,
                                    const MetricsAccumulator& b);

private:
    struct GtStats {
        std::int64_t present = 0;
        std::int64_t tracked = 0;
        std::int64_t fm = 0;
        int state = 0;  // 0 never tracked, 1 tracked, 2 in gap
    };
    struct SeqData {
        std::int64_t frames = 0;
        std::int64_t last_frame = -1;
        bool started = false;
        std::int64_t tp = 0, fp = 0, fn = 0, ids = 0, gt_total = 0;
        double ids_log_sum = 0.0;  // sum of log10(ids_t + 1)
        double overlap_sum = 0.0, dist_sum = 0.0;
        std::map<ObjectId, GtStats> gt_stats;
        std::map<ObjectId, ObjectId> last_known;   // gt -> pred
        std::map<ObjectId, ObjectId> prev_frame;   // gt -> pred, last frame only
        std::map<ObjectId, std::int64_t> gt_frames, pred_frames;
        std::map<std::pair<ObjectId, ObjectId>, std::int64_t> pair_overlap;
    };

    std::string tag_;
    IdsMode ids_mode_;
    std::optional<MatchCriterion> criterion_;
    std::map<std::string, SeqData> data_;
};

/// Counterwise union of two accumulators from disjoint sequences;
/// summarize(merge(a, b)) equals recomputing over the concatenated streams.
MetricsAccumulator merge(const MetricsAccumulator& a,
                         const MetricsAccumulator& b);

/// Convenience: run a whole gt/pred trajectory pair through an accumulator.
MetricsAccumulator evaluate_trajectories(const TrajectoryMap& gt,
                                         const TrajectoryMap& pred,
                                         const MatchCriterion& criterion,
                                         const std::string& tag = "",
                                         IdsMode ids_mode = IdsMode::LastKnown);

}  // namespace aerotrack

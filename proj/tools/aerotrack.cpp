#include <cstdint>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "aerotrack/annotation_io.hpp"
#include "aerotrack/assignment.hpp"
#include "aerotrack/kernels.hpp"
#include "aerotrack/metrics.hpp"
#include "aerotrack/report.hpp"
#include "aerotrack/simulator.hpp"
#include "aerotrack/tracker.hpp"

namespace {

using namespace aerotrack;

struct SimulateArgs {
    std::string config_path;
    std::string preset = "sparse";
    std::uint64_t seed = 1;
    int objects = -1;
    int frames = -1;
    double gsd = -1.0;
    int width = -1, height = -1;
    std::string name;
    std::string object_class;
    double box_w = -1.0, box_h = -1.0;
    std::string out;
    std::string det_out;
    double jitter = 0.0, p_miss = 0.0, clutter = 0.0;
    std::uint64_t noise_seed = 1;
};

int run_simulate(const SimulateArgs& a, bool seed_given) {
    ScenarioConfig cfg = preset_by_name(a.preset, a.seed);
    bool box_explicit = false;
    if (!a.config_path.empty()) {
        const std::string text = read_file(a.config_path);
        cfg = scenario_config_from_json(text, cfg);
        const auto j = nlohmann::json::parse(text);
        box_explicit = j.contains("box_w") || j.contains("box_h");
        if (seed_given) cfg.seed = a.seed;  // flag beats the config file
    }
    if (a.objects >= 0) cfg.n_objects = a.objects;
    if (a.frames > 0) cfg.frames = a.frames;
    if (a.gsd > 0.0) cfg.meta.gsd = a.gsd;
    if (a.width > 0) cfg.meta.width = a.width;
    if (a.height > 0) cfg.meta.height = a.height;
    if (!a.name.empty()) cfg.meta.name = a.name;
    if (!a.object_class.empty()) {
        if (a.object_class == "pedestrian") {
            cfg.object_class = ObjectClass::Pedestrian;
        } else if (a.object_class == "vehicle") {
            cfg.object_class = ObjectClass::Vehicle;
            cfg.speed_mean_mps = 11.0;
            cfg.speed_sigma_mps = 3.0;
        } else {
            throw std::runtime_error("unknown --class: " + a.object_class);
        }
    }
    if (a.box_w > 0.0 || a.box_h > 0.0) {
        if (a.box_w > 0.0) cfg.box_w = a.box_w;
        if (a.box_h > 0.0) cfg.box_h = a.box_h;
    } else if (!box_explicit) {
        if (cfg.object_class == ObjectClass::Vehicle) {
            cfg.box_w = 30.0;
            cfg.box_h = 15.0;
        } else {
            cfg.box_w = cfg.box_h = pedestrian_box_side(cfg.meta.gsd);
        }
    }

    const Scenario sc = simulate(cfg);
    atomic_write_file(a.out, write_annotations(annotations_from_scenario(sc)));
    std::cerr << "wrote " << a.out << " (" << sc.ground_truth.size()
              << " trajectories)\n";

    if (!a.det_out.empty()) {
        NoiseConfig noise{a.jitter, a.p_miss, a.clutter, a.noise_seed};
        const auto dets = corrupt(sc, noise);
        atomic_write_file(a.det_out,
                          write_annotations(annotations_from_detections(dets, sc.meta)));
        std::cerr << "wrote " << a.det_out << "\n";
    }
    return 0;
}

struct TrackArgs {
    std::string in, out;
    std::string mode = "euclidean";
    double gate = -1.0;
    int max_age = 3;
    double enlarge = 1.0;
    bool no_require_prev_match = false;
    std::string spawn = "all";
    double process_pos_var = 1.0, process_vel_var = 0.25, measurement_var = 1.0;
};

TrackerConfig tracker_config_from(const TrackArgs& a) {
    TrackerConfig cfg;
    if (a.mode == "euclidean") {
        cfg.mode = TrackerMode::Euclidean;
    } else if (a.mode == "iou") {
        cfg.mode = TrackerMode::Iou;
    } else {
        throw std::runtime_error("unknown --mode: " + a.mode);
    }
    if (a.gate >= 0.0) cfg.gate_threshold = a.gate;
    cfg.max_age = a.max_age;
    cfg.box_enlarge_factor = a.enlarge;
    cfg.require_prev_match = !a.no_require_prev_match;
    if (a.spawn == "all") {
        cfg.spawn_policy = SpawnPolicy::AllFrames;
    } else if (a.spawn == "first") {
        cfg.spawn_policy = SpawnPolicy::FirstFrameOnly;
    } else {
        throw std::runtime_error("unknown --spawn: " + a.spawn);
    }
    cfg.noise = {a.process_pos_var, a.process_vel_var, a.measurement_var};
    return cfg;
}

int run_track(const TrackArgs& a) {
    const AnnotationFile in = parse_annotations(read_file(a.in));
    for (const auto& w : in.warnings) std::cerr << "warning: " << a.in << " " << w << "\n";
    const auto rows = expand_point_rows(in.rows, in.meta.gsd);
    const auto frames = to_detection_frames(rows);

    const TrackingResult result =
        track_detections(tracker_config_from(a), in.meta, frames);
    atomic_write_file(a.out, write_annotations(annotations_from_result(result)));
    std::cerr << "wrote " << a.out << " (" << result.trajectories.size()
              << " trajectories)\n";
    return 0;
}

struct EvaluateArgs {
    std::vector<std::string> gt, pred;
    std::string criterion = "iou";
    double tau = -1.0;
    std::string motp_mode = "overlap";
    std::string ids_mode = "lastknown";
    std::string json_out;
    bool no_table = false;
};

MatchCriterion criterion_from(const std::string& kind, double tau) {
    if (kind == "iou") return MatchCriterion::iou(tau < 0.0 ? 0.5 : tau);
    if (kind == "distance") return MatchCriterion::distance(tau < 0.0 ? 5.0 : tau);
    throw std::runtime_error("unknown --criterion: " + kind);
}

IdsMode ids_mode_from(const std::string& s) {
    if (s == "lastknown") return IdsMode::LastKnown;
    if (s == "previous") return IdsMode::PreviousFrame;
    throw std::runtime_error("unknown --ids-mode: " + s);
}

MotpMode motp_mode_from(const std::string& s) {
    if (s == "overlap") return MotpMode::Overlap;
    if (s == "distance") return MotpMode::Distance;
    throw std::runtime_error("unknown --motp-mode: " + s);
}

int run_evaluate(const EvaluateArgs& a) {
    if (a.gt.empty() || a.gt.size() != a.pred.size()) {
        throw std::runtime_error("--gt and --pred must be given in equal numbers");
    }
    const MatchCriterion crit = criterion_from(a.criterion, a.tau);
    const MotpMode motp = motp_mode_from(a.motp_mode);
    const IdsMode ids = ids_mode_from(a.ids_mode);

    std::vector<std::pair<std::string, MetricsReport>> seq_reports;
    std::optional<MetricsAccumulator> total;
    for (std::size_t i = 0; i < a.gt.size(); ++i) {
        const AnnotationFile gt_file = parse_annotations(read_file(a.gt[i]));
        const AnnotationFile pred_file = parse_annotations(read_file(a.pred[i]));
        for (const auto& w : gt_file.warnings)
            std::cerr << "warning: " << a.gt[i] << " " << w << "\n";
        for (const auto& w : pred_file.warnings)
            std::cerr << "warning: " << a.pred[i] << " " << w << "\n";
        const auto gt_trajs =
            to_trajectories(expand_point_rows(gt_file.rows, gt_file.meta.gsd));
        const auto pred_trajs =
            to_trajectories(expand_point_rows(pred_file.rows, pred_file.meta.gsd));
        std::string tag = gt_file.meta.name;
        if (tag.empty()) tag = "seq" + std::to_string(i);
        tag += "#" + std::to_string(i);
        const MetricsAccumulator acc =
            evaluate_trajectories(gt_trajs, pred_trajs, crit, tag, ids);
        seq_reports.emplace_back(gt_file.meta.name.empty() ? tag : gt_file.meta.name,
                                 acc.summarize(motp));
        total = total ? merge(*total, acc) : acc;
    }
    const MetricsReport total_report = total->summarize(motp);

    if (!a.no_table) {
        std::cout << render_markdown_table(seq_reports, total_report);
    }
    if (!a.json_out.empty()) {
        atomic_write_file(a.json_out, evaluation_to_json(seq_reports, total_report));
        std::cerr << "wrote " << a.json_out << "\n";
    }
    return 0;
}

struct SweepArgs {
    std::string param = "gate";
    std::vector<double> values;
    std::string preset = "dense";
    std::string mode = "iou";
    int num_seeds = 10;
    std::uint64_t seed_base = 1;
    double jitter = 0.0, p_miss = 0.0, clutter = 0.0;
    double enlarge = 1.0;
    double gate = -1.0;
    int max_age = 3;
    std::string criterion = "distance";
    double tau = -1.0;
    std::string out;
    std::string svg;
};

int run_sweep(const SweepArgs& a) {
    if (a.values.empty()) throw std::runtime_error("--values must not be empty");
    if (a.param != "gate" && a.param != "enlarge") {
        throw std::runtime_error("--param must be 'gate' or 'enlarge'");
    }
    const MatchCriterion crit = criterion_from(a.criterion, a.tau);

    std::vector<SweepRow> rows;
    for (const double value : a.values) {
        for (int s = 0; s < a.num_seeds; ++s) {
            const std::uint64_t seed = a.seed_base + static_cast<std::uint64_t>(s);
            const Scenario sc = simulate(preset_by_name(a.preset, seed));
            const NoiseConfig noise{a.jitter, a.p_miss, a.clutter, seed};
            const auto dets = corrupt(sc, noise);

            TrackerConfig cfg;
            cfg.mode = a.mode == "euclidean" ? TrackerMode::Euclidean : TrackerMode::Iou;
            cfg.max_age = a.max_age;
            cfg.box_enlarge_factor = a.param == "enlarge" ? value : a.enlarge;
            if (a.param == "gate") {
                cfg.gate_threshold = value;
            } else if (a.gate >= 0.0) {
                cfg.gate_threshold = a.gate;
            }
            const TrackingResult result = track_detections(cfg, sc.meta, dets);

            const MetricsAccumulator acc = evaluate_trajectories(
                sc.ground_truth, result.trajectories, crit, sc.meta.name);
            rows.push_back({a.param, value, seed, acc.summarize()});
        }
    }
    atomic_write_file(a.out, sweep_to_csv(rows));
    std::cerr << "wrote " << a.out << "\n";
    if (!a.svg.empty()) {
        atomic_write_file(a.svg, sweep_to_svg(rows));
        std::cerr << "wrote " << a.svg << "\n";
    }
    return 0;
}

struct ReportArgs {
    std::string json_in;
    std::string out;
};

int run_report(const ReportArgs& a) {
    const std::string md = render_markdown_from_json(read_file(a.json_in));
    std::cout << md;
    if (!a.out.empty()) {
        atomic_write_file(a.out, md);
        std::cerr << "wrote " << a.out << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-object tracking toolkit for low-frame-rate aerial scenes"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* s = app.add_subcommand("simulate", "Generate a synthetic scenario");
    s->add_option("--config", sim.config_path, "Scenario config JSON");
    s->add_option("--preset", sim.preset,
                  "sparse | dense | crowd | separated | crossing2");
    s->add_option("--seed", sim.seed, "Scenario seed");
    s->add_option("--objects", sim.objects, "Object count override");
    s->add_option("--frames", sim.frames, "Frame count override");
    s->add_option("--gsd", sim.gsd, "Ground sampling distance (m/px)");
    s->add_option("--width", sim.width, "Image width px");
    s->add_option("--height", sim.height, "Image height px");
    s->add_option("--name", sim.name, "Sequence name");
    s->add_option("--class", sim.object_class, "pedestrian | vehicle");
    s->add_option("--box-w", sim.box_w, "Box width px");
    s->add_option("--box-h", sim.box_h, "Box height px");
    s->add_option("--out", sim.out, "Ground-truth CSV path")->required();
    s->add_option("--det-out", sim.det_out, "Corrupted detections CSV path");
    s->add_option("--jitter", sim.jitter, "Detection center jitter sigma px");
    s->add_option("--p-miss", sim.p_miss, "Detection dropout probability");
    s->add_option("--clutter", sim.clutter, "Expected false detections per frame");
    s->add_option("--noise-seed", sim.noise_seed, "Noise seed");
    s->callback([&sim, s] { run_simulate(sim, s->count("--seed") > 0); });

    TrackArgs trk;
    auto* t = app.add_subcommand("track", "Run a tracker over detections");
    t->add_option("--in", trk.in, "Detections CSV")->required();
    t->add_option("--out", trk.out, "Tracking result CSV")->required();
    t->add_option("--mode", trk.mode, "euclidean | iou");
    t->add_option("--gate", trk.gate,
                  "Gate: meters (euclidean, default 17*gsd) or cost (iou, default 0.99)");
    t->add_option("--max-age", trk.max_age, "Frames a track may coast");
    t->add_option("--enlarge", trk.enlarge, "Box enlargement factor (iou mode)");
    t->add_flag("--no-require-prev-match", trk.no_require_prev_match,
                "Allow lost tracks to re-enter matching (euclidean mode)");
    t->add_option("--spawn", trk.spawn, "all | first (new-track policy)");
    t->add_option("--process-pos-var", trk.process_pos_var, "Kalman process position var");
    t->add_option("--process-vel-var", trk.process_vel_var, "Kalman process velocity var");
    t->add_option("--measurement-var", trk.measurement_var, "Kalman measurement var");
    t->callback([&trk] { run_track(trk); });

    EvaluateArgs ev;
    auto* e = app.add_subcommand("evaluate", "Score tracking results against ground truth");
    e->add_option("--gt", ev.gt, "Ground-truth CSV (repeatable)")->required();
    e->add_option("--pred", ev.pred, "Result CSV (repeatable, paired with --gt)")->required();
    e->add_option("--criterion", ev.criterion, "iou | distance");
    e->add_option("--tau", ev.tau, "Match threshold (IoU default 0.5, distance default 5 px)");
    e->add_option("--motp-mode", ev.motp_mode, "overlap | distance");
    e->add_option("--ids-mode", ev.ids_mode, "lastknown | previous");
    e->add_option("--json", ev.json_out, "metrics.json output path");
    e->add_flag("--no-table", ev.no_table, "Suppress the stdout table");
    e->callback([&ev] { run_evaluate(ev); });

    SweepArgs sw;
    auto* w = app.add_subcommand("sweep", "Metric-vs-parameter sweep on a preset");
    w->add_option("--param", sw.param, "gate | enlarge")->required();
    w->add_option("--values", sw.values, "Swept values")->required()->delimiter(',');
    w->add_option("--preset", sw.preset, "Scenario preset");
    w->add_option("--mode", sw.mode, "euclidean | iou");
    w->add_option("--seeds", sw.num_seeds, "Number of seeds");
    w->add_option("--seed-base", sw.seed_base, "First seed");
    w->add_option("--jitter", sw.jitter, "Detection jitter sigma px");
    w->add_option("--p-miss", sw.p_miss, "Detection dropout probability");
    w->add_option("--clutter", sw.clutter, "Expected false detections per frame");
    w->add_option("--enlarge", sw.enlarge, "Fixed enlargement when sweeping gate");
    w->add_option("--gate", sw.gate, "Fixed gate when sweeping enlarge");
    w->add_option("--max-age", sw.max_age, "Frames a track may coast");
    w->add_option("--criterion", sw.criterion, "Evaluation criterion: iou | distance");
    w->add_option("--tau", sw.tau, "Evaluation threshold");
    w->add_option("--out", sw.out, "Sweep CSV path")->required();
    w->add_option("--svg", sw.svg, "Optional SVG line plot");
    w->callback([&sw] { run_sweep(sw); });

    ReportArgs rp;
    auto* r = app.add_subcommand("report", "Render metrics JSON as a markdown table");
    r->add_option("--json", rp.json_in, "metrics.json path")->required();
    r->add_option("--out", rp.out, "Markdown output path");
    r->callback([&rp] { run_report(rp); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        return app.exit(err);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}

#include "aerotrack/annotation_io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace aerotrack {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
    throw std::runtime_error("line " + std::to_string(line) + ": " + what);
}

double parse_number(const std::string& cell, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size()) parse_fail(line, "non-numeric cell '" + cell + "'");
        return v;
    } catch (const std::invalid_argument&) {
        parse_fail(line, "non-numeric cell '" + cell + "'");
    } catch (const std::out_of_range&) {
        parse_fail(line, "number out of range '" + cell + "'");
    }
}

std::int64_t parse_int(const std::string& cell, std::size_t line) {
    const double v = parse_number(cell, line);
    if (!std::isfinite(v) || std::abs(v) > 9e15) {
        parse_fail(line, "expected integer '" + cell + "'");
    }
    const auto i = static_cast<std::int64_t>(v);
    if (static_cast<double>(i) != v) parse_fail(line, "expected integer '" + cell + "'");
    return i;
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::string format_coord(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

constexpr const char* kColumns = "frame,id,x1,y1,x2,y2";

}  // namespace

AnnotationFile parse_annotations(const std::string& text) {
    AnnotationFile f;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;

    if (!std::getline(in, line)) parse_fail(1, "empty file");
    ++lineno;
    if (line.rfind("# ", 0) != 0) parse_fail(lineno, "missing '# {...}' meta header");
    json meta;
    try {
        meta = json::parse(line.substr(2));
    } catch (const json::exception& e) {
        parse_fail(lineno, std::string("bad meta JSON: ") + e.what());
    }
    for (const char* key : {"name", "gsd", "frame_rate", "width", "height"}) {
        if (!meta.contains(key)) {
            parse_fail(lineno, std::string("meta header missing field '") + key + "'");
        }
    }
    f.meta.name = meta["name"].get<std::string>();
    f.meta.gsd = meta["gsd"].get<double>();
    f.meta.frame_rate = meta["frame_rate"].get<double>();
    f.meta.width = meta["width"].get<int>();
    f.meta.height = meta["height"].get<int>();
    if (!(f.meta.gsd > 0.0) || !(f.meta.frame_rate > 0.0) || f.meta.width <= 0 ||
        f.meta.height <= 0) {
        parse_fail(lineno, "meta header values out of range");
    }

    if (!std::getline(in, line)) parse_fail(lineno + 1, "missing column header");
    ++lineno;
    if (line != kColumns) {
        parse_fail(lineno, std::string("expected column header '") + kColumns + "'");
    }

    std::int64_t prev_frame = -1;
    ObjectId prev_id = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto cells = split_csv(line);
        if (cells.size() != 6) parse_fail(lineno, "expected 6 fields");
        AnnotationRow row;
        row.frame = parse_int(cells[0], lineno);
        row.id = parse_int(cells[1], lineno);
        row.box = {parse_number(cells[2], lineno), parse_number(cells[3], lineno),
                   parse_number(cells[4], lineno), parse_number(cells[5], lineno)};
        if (row.frame < 0) parse_fail(lineno, "negative frame index");
        if (row.id < -1) parse_fail(lineno, "id must be >= -1");
        if (!row.box.valid()) parse_fail(lineno, "invalid box (x1 <= x2, y1 <= y2 required)");
        if (row.frame < prev_frame) parse_fail(lineno, "unsorted frames");
        if (row.frame == prev_frame) {
            if (row.id < prev_id) parse_fail(lineno, "rows must be sorted by (frame, id)");
            if (row.id == prev_id && row.id >= 0) {
                parse_fail(lineno, "duplicate (frame, id) row");
            }
        }
        prev_frame = row.frame;
        prev_id = row.id;
        if (row.box.x1 < 0.0 || row.box.y1 < 0.0 || row.box.x2 > f.meta.width ||
            row.box.y2 > f.meta.height) {
            f.warnings.push_back("line " + std::to_string(lineno) +
                                 ": box outside declared image size");
        }
        f.rows.push_back(row);
    }
    return f;
}

std::string write_annotations(const AnnotationFile& f) {
    json meta = {
        {"name", f.meta.name},         {"gsd", f.meta.gsd},
        {"frame_rate", f.meta.frame_rate}, {"width", f.meta.width},
        {"height", f.meta.height},
    };
    std::vector<AnnotationRow> rows = f.rows;
    std::stable_sort(rows.begin(), rows.end(),
                     [](const AnnotationRow& a, const AnnotationRow& b) {
                         return a.frame != b.frame ? a.frame < b.frame : a.id < b.id;
                     });
    std::string out = "# " + meta.dump() + "\n";
    out += kColumns;
    out += '\n';
    for (const auto& r : rows) {
        out += std::to_string(r.frame);
        out += ',';
        out += std::to_string(r.id);
        out += ',';
        out += format_coord(r.box.x1);
        out += ',';
        out += format_coord(r.box.y1);
        out += ',';
        out += format_coord(r.box.x2);
        out += ',';
        out += format_coord(r.box.y2);
        out += '\n';
    }
    return out;
}

std::vector<AnnotationRow> expand_point_rows(std::vector<AnnotationRow> rows,
                                             double gsd) {
    const double side = pedestrian_box_side(gsd);
    for (auto& r : rows) {
        if (r.box.x1 == r.box.x2 && r.box.y1 == r.box.y2) {
            r.box = BoundingBox::from_center(r.box.center(), side, side);
        }
    }
    return rows;
}

TrajectoryMap to_trajectories(const std::vector<AnnotationRow>& rows) {
    TrajectoryMap out;
    for (const auto& r : rows) {
        if (r.id >= 0) out[r.id][r.frame] = r.box;
    }
    return out;
}

std::map<std::int64_t, std::vector<Detection>> to_detection_frames(
    const std::vector<AnnotationRow>& rows) {
    std::map<std::int64_t, std::vector<Detection>> out;
    for (const auto& r : rows) {
        out[r.frame].push_back(Detection{r.frame, r.box, std::nullopt});
    }
    return out;
}

AnnotationFile annotations_from_trajectories(const TrajectoryMap& trajs,
                                             const SequenceMeta& meta) {
    AnnotationFile f;
    f.meta = meta;
    for (const auto& [id, traj] : trajs) {
        for (const auto& [frame, box] : traj) {
            f.rows.push_back({frame, id, box});
        }
    }
    std::stable_sort(f.rows.begin(), f.rows.end(),
                     [](const AnnotationRow& a, const AnnotationRow& b) {
                         return a.frame != b.frame ? a.frame < b.frame : a.id < b.id;
                     });
    return f;
}

AnnotationFile annotations_from_scenario(const Scenario& s) {
    return annotations_from_trajectories(s.ground_truth, s.meta);
}

AnnotationFile annotations_from_detections(
    const std::vector<std::vector<Detection>>& frames, const SequenceMeta& meta) {
    AnnotationFile f;
    f.meta = meta;
    for (std::size_t t = 0; t < frames.size(); ++t) {
        for (const auto& d : frames[t]) {
            f.rows.push_back({static_cast<std::int64_t>(t), -1, d.box});
        }
    }
    return f;
}

AnnotationFile annotations_from_result(const TrackingResult& r) {
    return annotations_from_trajectories(r.trajectories, r.meta);
}

void atomic_write_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw std::runtime_error("rename failed: " + path + " (" +
                                 std::strerror(errno) + ")");
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

json meta_to_json(const SequenceMeta& m) {
    return {{"name", m.name},
            {"gsd", m.gsd},
            {"frame_rate", m.frame_rate},
            {"width", m.width},
            {"height", m.height}};
}

SequenceMeta meta_from_json(const json& j, SequenceMeta base) {
    if (j.contains("name")) base.name = j["name"].get<std::string>();
    if (j.contains("gsd")) base.gsd = j["gsd"].get<double>();
    if (j.contains("frame_rate")) base.frame_rate = j["frame_rate"].get<double>();
    if (j.contains("width")) base.width = j["width"].get<int>();
    if (j.contains("height")) base.height = j["height"].get<int>();
    return base;
}

}  // namespace

std::string scenario_config_to_json(const ScenarioConfig& cfg) {
    json j;
    j["meta"] = meta_to_json(cfg.meta);
    j["n_objects"] = cfg.n_objects;
    j["frames"] = cfg.frames;
    j["object_class"] =
        cfg.object_class == ObjectClass::Pedestrian ? "pedestrian" : "vehicle";
    j["speed_mean_mps"] = cfg.speed_mean_mps;
    j["speed_sigma_mps"] = cfg.speed_sigma_mps;
    j["stationary_fraction"] = cfg.stationary_fraction;
    j["heading_noise_sigma"] = cfg.heading_noise_sigma;
    j["group_fraction"] = cfg.group_fraction;
    j["group_cohesion_px"] = cfg.group_cohesion_px;
    j["entry_exit_prob"] = cfg.entry_exit_prob;
    j["box_w"] = cfg.box_w;
    j["box_h"] = cfg.box_h;
    j["placement"] = cfg.placement == Placement::Grid ? "grid" : "uniform";
    j["motion"] =
        cfg.motion == MotionModel::SharedVelocity ? "shared" : "independent";
    j["grid_spacing_px"] = cfg.grid_spacing_px;
    j["seed"] = cfg.seed;
    j["occlusions"] = json::array();
    for (const auto& z : cfg.occlusions) {
        j["occlusions"].push_back({{"x1", z.zone.x1},
                                   {"y1", z.zone.y1},
                                   {"x2", z.zone.x2},
                                   {"y2", z.zone.y2},
                                   {"dropout", z.dropout}});
    }
    j["scripted"] = json::array();
    for (const auto& s : cfg.scripted) {
        j["scripted"].push_back({{"x", s.start.x},
                                 {"y", s.start.y},
                                 {"vx", s.velocity.x},
                                 {"vy", s.velocity.y},
                                 {"born", s.born}});
    }
    return j.dump(2) + "\n";
}

ScenarioConfig scenario_config_from_json(const std::string& json_text,
                                         const ScenarioConfig& base) {
    ScenarioConfig cfg = base;
    const json j = json::parse(json_text);
    if (j.contains("meta")) cfg.meta = meta_from_json(j["meta"], cfg.meta);
    if (j.contains("n_objects")) cfg.n_objects = j["n_objects"].get<int>();
    if (j.contains("frames")) cfg.frames = j["frames"].get<int>();
    if (j.contains("object_class")) {
        const auto s = j["object_class"].get<std::string>();
        if (s == "pedestrian") {
            cfg.object_class = ObjectClass::Pedestrian;
        } else if (s == "vehicle") {
            cfg.object_class = ObjectClass::Vehicle;
        } else {
            throw std::runtime_error("unknown object_class: " + s);
        }
    }
    if (j.contains("speed_mean_mps")) cfg.speed_mean_mps = j["speed_mean_mps"].get<double>();
    if (j.contains("speed_sigma_mps")) cfg.speed_sigma_mps = j["speed_sigma_mps"].get<double>();
    if (j.contains("stationary_fraction"))
        cfg.stationary_fraction = j["stationary_fraction"].get<double>();
    if (j.contains("heading_noise_sigma"))
        cfg.heading_noise_sigma = j["heading_noise_sigma"].get<double>();
    if (j.contains("group_fraction")) cfg.group_fraction = j["group_fraction"].get<double>();
    if (j.contains("group_cohesion_px"))
        cfg.group_cohesion_px = j["group_cohesion_px"].get<double>();
    if (j.contains("entry_exit_prob")) cfg.entry_exit_prob = j["entry_exit_prob"].get<double>();
    if (j.contains("box_w")) cfg.box_w = j["box_w"].get<double>();
    if (j.contains("box_h")) cfg.box_h = j["box_h"].get<double>();
    if (j.contains("placement")) {
        const auto s = j["placement"].get<std::string>();
        if (s == "grid") {
            cfg.placement = Placement::Grid;
        } else if (s == "uniform") {
            cfg.placement = Placement::UniformRandom;
        } else {
            throw std::runtime_error("unknown placement: " + s);
        }
    }
    if (j.contains("motion")) {
        const auto s = j["motion"].get<std::string>();
        if (s == "shared") {
            cfg.motion = MotionModel::SharedVelocity;
        } else if (s == "independent") {
            cfg.motion = MotionModel::IndependentHeadings;
        } else {
            throw std::runtime_error("unknown motion: " + s);
        }
    }
    if (j.contains("grid_spacing_px")) cfg.grid_spacing_px = j["grid_spacing_px"].get<double>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("occlusions")) {
        cfg.occlusions.clear();
        for (const auto& z : j["occlusions"]) {
            cfg.occlusions.push_back({{z["x1"].get<double>(), z["y1"].get<double>(),
                                       z["x2"].get<double>(), z["y2"].get<double>()},
                                      z["dropout"].get<double>()});
        }
    }
    if (j.contains("scripted")) {
        cfg.scripted.clear();
        for (const auto& s : j["scripted"]) {
            cfg.scripted.push_back({{s["x"].get<double>(), s["y"].get<double>()},
                                    {s["vx"].get<double>(), s["vy"].get<double>()},
                                    s.value("born", std::int64_t{0})});
        }
    }
    return cfg;
}

std::string noise_config_to_json(const NoiseConfig& cfg) {
    json j = {{"jitter_sigma", cfg.jitter_sigma},
              {"p_miss", cfg.p_miss},
              {"clutter_rate", cfg.clutter_rate},
              {"seed", cfg.seed}};
    return j.dump(2) + "\n";
}

NoiseConfig noise_config_from_json(const std::string& json_text,
                                   const NoiseConfig& base) {
    NoiseConfig cfg = base;
    const json j = json::parse(json_text);
    if (j.contains("jitter_sigma")) cfg.jitter_sigma = j["jitter_sigma"].get<double>();
    if (j.contains("p_miss")) cfg.p_miss = j["p_miss"].get<double>();
    if (j.contains("clutter_rate")) cfg.clutter_rate = j["clutter_rate"].get<double>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    return cfg;
}

}  // namespace aerotrack

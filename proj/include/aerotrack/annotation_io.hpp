#pragma once

#include <map>
#include <string>
#include <vector>

#include "aerotrack/geometry.hpp"
#include "aerotrack/simulator.hpp"
#include "aerotrack/tracker.hpp"

namespace aerotrack {

/// One CSV row. id -1 marks raw detections.
struct AnnotationRow {
    std::int64_t frame = 0;
    ObjectId id = -1;
    BoundingBox box;
};

/// Annotation file: a commented JSON meta header followed by
/// frame,id,x1,y1,x2,y2 rows sorted by (frame, id). Writing a parsed file
/// reproduces it byte for byte.
struct AnnotationFile {
    SequenceMeta meta;
    std::vector<AnnotationRow> rows;
    std::vector<std::string> warnings;  // non-fatal parse notes
};

/// Throws std::runtime_error naming the offending line on malformed input;
/// out-of-bounds coordinates only produce warnings.
AnnotationFile parse_annotations(const std::string& text);

std::string write_annotations(const AnnotationFile& f);

/// Point rows (x1 == x2 and y1 == y2) become centered boxes sized by the GSD
/// band (4 px up to 0.14 m/px, 5 px above). Box rows pass through.
std::vector<AnnotationRow> expand_point_rows(std::vector<AnnotationRow> rows,
                                             double gsd);

/// Rows with id >= 0 grouped into per-object trajectories.
TrajectoryMap to_trajectories(const std::vector<AnnotationRow>& rows);

/// All rows as per-frame detection lists keyed by frame index.
std::map<std::int64_t, std::vector<Detection>> to_detection_frames(
    const std::vector<AnnotationRow>& rows);

AnnotationFile annotations_from_trajectories(const TrajectoryMap& trajs,
                                             const SequenceMeta& meta);
AnnotationFile annotations_from_scenario(const Scenario& s);
AnnotationFile annotations_from_detections(
    const std::vector<std::vector<Detection>>& frames, const SequenceMeta& meta);
AnnotationFile annotations_from_result(const TrackingResult& r);

/// Write-temp-then-rename; either the full content lands or nothing does.
void atomic_write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

/// Scenario / noise configs as JSON (all fields optional on input; missing
/// ones keep the supplied base values).
std::string scenario_config_to_json(const ScenarioConfig& cfg);
ScenarioConfig scenario_config_from_json(const std::string& json_text,
                                         const ScenarioConfig& base = {});
std::string noise_config_to_json(const NoiseConfig& cfg);
NoiseConfig noise_config_from_json(const std::string& json_text,
                                   const NoiseConfig& base = {});

}  // namespace aerotrack

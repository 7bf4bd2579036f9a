#pragma once

#include <string>
#include <utility>
#include <vector>

#include "aerotrack/metrics.hpp"

namespace aerotrack {

/// Report fields as JSON; absent metrics become explicit nulls.
std::string metrics_report_to_json(const MetricsReport& r);

/// Per-sequence rows plus a merged "total" row as a JSON document.
std::string evaluation_to_json(
    const std::vector<std::pair<std::string, MetricsReport>>& sequences,
    const MetricsReport& total);

/// Markdown table mirroring the usual tracking-benchmark layout
/// (ratios in percent, counts plain).
std::string render_markdown_table(
    const std::vector<std::pair<std::string, MetricsReport>>& sequences,
    const MetricsReport& total);

/// Re-renders a metrics JSON document (as produced by evaluation_to_json)
/// into the markdown table.
std::string render_markdown_from_json(const std::string& json_text);

struct SweepRow {
    std::string param;
    double value = 0.0;
    std::uint64_t seed = 0;
    MetricsReport report;
};

std::string sweep_to_csv(const std::vector<SweepRow>& rows);

/// Minimal line plot of a metric against the swept parameter (one line,
/// seeds summed). Textual SVG, no raster dependencies.
std::string sweep_to_svg(const std::vector<SweepRow>& rows,
                         const std::string& metric_label = "IDS");

}  // namespace aerotrack

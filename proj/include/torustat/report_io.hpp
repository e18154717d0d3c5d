#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "torustat/segmentation.hpp"

namespace torustat {

enum class AngleUnit { Degrees, Radians };
enum class RangeConvention { ZeroTo2Pi, MinusPiToPi };

/// Where and how to read an angle column.  Values are converted to radians in
/// [0, 2*pi) exactly once on load.
struct IngestSpec {
    std::filesystem::path path;
    AngleUnit unit = AngleUnit::Radians;
    RangeConvention range = RangeConvention::ZeroTo2Pi;
    std::optional<std::size_t> column; // 1-based CSV column; absent: one value per line
    char delimiter = ',';
};

/// Load a temporally ordered angle series.  Non-numeric rows are a hard
/// error, reported with their line numbers.
AngleSeries load_angles(const IngestSpec& spec);

nlohmann::json to_json(const TestReport& report);
TestReport test_report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SegmentTree& tree);

/// Leaf summary rows from a segmentation JSON document (as consumed by the
/// plot command).
std::vector<SegmentRow> segment_rows_from_json(const nlohmann::json& j);

std::string to_text(const TestReport& report);
std::string to_text(const SegmentTree& tree);

enum class ReportFormat { Json, Text };

std::string render_report(const TestReport& report, ReportFormat format);
std::string render_report(const SegmentTree& tree, ReportFormat format);

} // namespace torustat

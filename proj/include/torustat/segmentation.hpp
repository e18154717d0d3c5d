#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>

#include "torustat/changepoint.hpp"

namespace torustat {

struct SegmentationConfig {
    Method method = Method::Sagc;
    double alpha = 0.05;
    std::size_t min_segment_length = 5;
    std::size_t calibration_replicates = 5000;
    std::uint64_t calibration_seed = 1;
    unsigned threads = 0;
    std::optional<double> known_mean;          // SACC with a known mean direction
    std::optional<Family> cvmc_family;         // required when method == Cvmc
    std::optional<double> cvmc_concentration;  // plug-in estimated from the root when absent
    ConcentrationMeasure concentration_measure = ConcentrationMeasure::MeanResultantLength;
    std::filesystem::path cache_dir;           // empty: no on-disk calibration cache

    void validate() const;
};

/// Memoised calibration samples, optionally persisted to disk so repeated
/// segmentations (and separate CLI invocations) reuse them.
class CalibrationCache {
public:
    CalibrationCache(std::size_t replicates, std::uint64_t seed, unsigned threads,
                     std::filesystem::path dir = {});

    const CalibrationSample& b_infinity(std::size_t grid_size);
    const CalibrationSample& sn_null(std::size_t n, Family family, double concentration);

private:
    const CalibrationSample& fetch(const std::string& key,
                                   const std::function<CalibrationSample()>& make);

    std::size_t replicates_;
    std::uint64_t seed_;
    unsigned threads_;
    std::filesystem::path dir_;
    std::mutex mutex_;
    std::map<std::string, CalibrationSample> memo_;
};

enum class NodeStatus { Tested, TooShort, Degenerate };

/// One node of the binary-segmentation recursion over a 1-based inclusive
/// index range of the original series.
struct SegmentNode {
    std::size_t lo = 0;
    std::size_t hi = 0;
    NodeStatus status = NodeStatus::TooShort;
    std::optional<TestReport> report;   // present when status == Tested;
                                        // changepoint_index is relative to [lo, hi]
    std::size_t split_at = 0;           // absolute changepoint index when split
    std::unique_ptr<SegmentNode> left;  // [lo, split_at]
    std::unique_ptr<SegmentNode> right; // [split_at + 1, hi]
    std::optional<CircularSummary> summary; // filled on leaves

    bool is_leaf() const { return left == nullptr; }
    std::size_t length() const { return hi - lo + 1; }
};

struct SegmentTree {
    std::unique_ptr<SegmentNode> root;
    std::size_t n = 0;
    SegmentationConfig config;               // with any plug-in concentration resolved
    bool concentration_plugged_in = false;

    std::vector<const SegmentNode*> preorder() const;
    std::vector<const SegmentNode*> leaves() const;
    /// Sorted absolute indices of the accepted splits.
    std::vector<std::size_t> changepoints() const;
};

/// Depth-first recursion: test a range, split at the estimated changepoint
/// while the test rejects, and stop on acceptance or when a range is shorter
/// than min_segment_length (or too short to test at all).  Degenerate ranges
/// become untested leaves.  P-values are computed against calibration samples
/// at grid size equal to the segment length.
SegmentTree binary_segment(const AngleSeries& series, const SegmentationConfig& config,
                           CalibrationCache* cache = nullptr);

struct SegmentRow {
    std::size_t lo = 0;
    std::size_t hi = 0;
    std::optional<double> mean_rad;
    std::optional<double> mean_deg;
    std::optional<double> concentration;
};

/// One row per leaf, ordered by range.
std::vector<SegmentRow> segment_report(const SegmentTree& tree);

} // namespace torustat

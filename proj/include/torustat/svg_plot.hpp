#pragma once

#include <string>
#include <vector>

#include "torustat/segmentation.hpp"

namespace torustat {

/// Circular temporal plot: the i-th observation sits on the i-th of n
/// concentric circles, at radius (i/n) * outer_radius and its own angle, in a
/// y-up frame.  Segment summaries add a highlighted circle at each segment's
/// outer end, a mean-direction bubble on it, and per-segment point intensity
/// proportional to the segment concentration.
struct PlotSpec {
    double outer_radius = 250.0;
    double point_size = 2.5;
    bool segment_circles = true;
    bool mean_bubbles = true;
    double intensity_lo = 0.0; // concentration mapped linearly onto opacity
    double intensity_hi = 1.0;
};

std::string circular_temporal_svg(const AngleSeries& series,
                                  const std::vector<SegmentRow>& segments, const PlotSpec& spec);

std::string circular_temporal_svg(const AngleSeries& series, const SegmentTree& tree,
                                  const PlotSpec& spec);

std::string circular_temporal_svg(const AngleSeries& series, const PlotSpec& spec);

} // namespace torustat

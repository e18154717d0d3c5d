#pragma once

#include <optional>

#include "torustat/angles.hpp"

namespace torustat {

/// Below this mean resultant length the sample direction is considered
/// numerically meaningless and the circular mean undefined.
inline constexpr double resultant_floor = 1e-12;

/// Quadrant-correct direction of the resultant vector, in [0, 2*pi).
/// Throws undefined_mean_error when the resultant length is below the floor.
double circular_mean(const AngleSeries& series);

/// \bar{R} = |mean of the unit vectors|, in [0, 1].
double mean_resultant_length(const AngleSeries& series);

/// Elementwise (theta - mu) mod 2*pi.
AngleSeries center_mod2pi(const AngleSeries& series, double mu);

/// Mean of square_angle over the mean-centered series, in [0, 1/4].  Uses the
/// supplied mean direction when given, the estimated circular mean otherwise.
double curved_variance(const AngleSeries& series, std::optional<double> mu = std::nullopt);

/// Solve I1(kappa)/I0(kappa) = rbar for the von Mises concentration.
/// Requires rbar in [0, 1); the residual of the returned root is below 1e-10.
double vm_kappa_from_resultant(double rbar);

/// How "concentration" is reported for a segment: the mean resultant length
/// itself, or the von Mises kappa implied by it.
enum class ConcentrationMeasure { MeanResultantLength, VonMisesKappa };

struct CircularSummary {
    std::optional<double> mean_direction; // absent when undefined
    double resultant_length = 0.0;
    std::optional<double> curved_variance; // absent when the mean is undefined
};

CircularSummary summarize(const AngleSeries& series);

/// The summary's concentration under the chosen measure; absent when it is
/// undefined (kappa at resultant length 1).
std::optional<double> concentration_value(const CircularSummary& s, ConcentrationMeasure measure);

} // namespace torustat
